#pragma once

#include <complex>
#include <random>
#include <vector>

#include "spinbath/errors.hpp"

namespace spinbath {

// Quasi-static structured dephasing environment: the detuning is a random
// constant per shot, drawn from a weighted multi-Gaussian spectrum. Units:
// cyclic MHz for frequencies, ns for times (MHz * ns = 1e-3 cycles).

inline constexpr double kMHzNsCycles = 1e-3;

// Paper-regime constants for the default bath.
inline constexpr double kDefaultSplittingMhz = 2.170;
inline constexpr double kDefaultEnvelopeT_ns = 1382.0;
inline constexpr double kDefaultRabiMhz = 5.37;

struct BathMode {
  double weight = 0;      // relative, normalised on construction
  double center_mhz = 0;  // mode center detuning
  double sigma_mhz = 0;   // Gaussian std; 0 means a point mass

  bool operator==(const BathMode&) const = default;
};

class BathSpectrum {
 public:
  // Validates (>= 1 mode, weights >= 0 with positive sum, sigma >= 0) and
  // normalises weights to sum 1.
  static BathSpectrum from_modes(std::vector<BathMode> modes);

  static BathSpectrum point_mass(double delta_mhz);
  static BathSpectrum single_gaussian(double center_mhz, double sigma_mhz);

  const std::vector<BathMode>& modes() const { return modes_; }

 private:
  explicit BathSpectrum(std::vector<BathMode> modes)
      : modes_(std::move(modes)) {}
  std::vector<BathMode> modes_;
};

// Triple-mode bath of the paper: centers (-Delta, 0, +Delta) with
// Delta = 2.170 MHz, equal weights, and per-mode sigma = sqrt(2)*1e3/(2 pi T)
// chosen so the ensemble coherence envelope is exp(-t^2/T^2) with T = 1382 ns.
BathSpectrum paper_default_spectrum();

// The per-mode Gaussian std that produces envelope exp(-t^2/T^2).
double envelope_sigma_mhz(double t_envelope_ns);

struct Detuning {
  double mhz = 0;
};

// W(t) = <exp(i 2 pi delta t)> over the normalised spectrum, evaluated in
// closed form (each Gaussian contributes a phase factor times a Gaussian
// envelope). Defined for any real t; W(-t) = conj(W(t)).
std::complex<double> coherence_function(const BathSpectrum& s, double t_ns);

// One draw: mode by weight, then Gaussian. Box-Muller on the raw generator
// so results are identical across standard-library implementations.
Detuning sample_detuning(const BathSpectrum& s, std::mt19937_64& rng);

struct WeightedDetuning {
  double delta_mhz = 0;
  double weight = 0;
};

// Gauss-Hermite nodes per mode, scaled to the mode width; weights sum to 1.
// Point-mass modes collapse to a single exact node. n_per_mode in [1, 512].
std::vector<WeightedDetuning> quadrature_nodes(const BathSpectrum& s,
                                               int n_per_mode);

// Phenomenological nuclear-polarisation model: polarisation fraction
// p = min(1, (B/B_sat)^k). Stands in for the level-anti-crossing mechanism;
// only the 35 mT threshold comes from the experiment.
struct PolarizationModel {
  double saturation_field_mt = 35.0;
  double exponent = 1.0;
};

// Scales every weight except the mode nearest zero detuning by (1-p) and
// moves the lost weight there. At p = 1 a single mode remains.
BathSpectrum polarize_spectrum(const BathSpectrum& s, double b_mt,
                               const PolarizationModel& m);

}  // namespace spinbath
