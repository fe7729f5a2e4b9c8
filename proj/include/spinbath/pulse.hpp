#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinbath/bath.hpp"
#include "spinbath/quantum.hpp"

namespace spinbath {

// Executable pulse schedules. Rotating frame, rotating-wave approximation:
// during a pulse the Hamiltonian is constant, H = pi(delta sz + Omega
// (cos phi sx + sin phi sy)) in cyclic units, so every segment is an exact
// SU(2) rotation about ((Omega cos phi, Omega sin phi, delta)) by
// 2 pi sqrt(Omega^2 + delta^2) * duration. Delays rotate about z alone.
//
// The `Instant` kind is a zero-duration ideal rotation; protocol runners use
// it for their instantaneous-pulse modes. It never appears in the DSL.

enum class Axis { X, Y, MinusX, MinusY };

// MW phase realising each axis: X -> 0, Y -> pi/2, -X -> pi, -Y -> 3pi/2.
double axis_phase_rad(Axis axis);

struct PulseSegment {
  enum class Kind { Pulse, Delay, Instant };

  Kind kind = Kind::Delay;
  double phase_rad = 0;     // pulse/instant
  double rabi_mhz = 0;      // pulse only
  double duration_ns = 0;   // pulse/delay
  double angle_rad = 0;     // instant only

  static PulseSegment pulse(double phase_rad, double rabi_mhz,
                            double duration_ns);
  static PulseSegment delay(double duration_ns);
  static PulseSegment instant(double phase_rad, double angle_rad);

  bool operator==(const PulseSegment&) const = default;
};

struct PulseSequence {
  std::vector<PulseSegment> segments;
  std::string label;

  double total_duration_ns() const;
};

// Finite-duration rotation: duration = angle/(2 pi Omega), phase from axis.
PulseSegment rotation_pulse(Axis axis, double angle_rad, double rabi_mhz);

// Ideal zero-duration rotation about an equatorial axis.
PulseSegment instant_rotation(Axis axis, double angle_rad);

// Photon-count readout calibration: C = c_min + P0 (c_max - c_min) per shot.
struct SignalModel {
  double c_max = 0;  // counts/shot for |0>
  double c_min = 0;  // counts/shot for |1>
  std::int64_t shots = 0;

  static SignalModel create(double c_max, double c_min, std::int64_t shots);
};

// Exact per-detuning evolution of every segment in time order.
DensityMatrix evolve(const DensityMatrix& rho0, const PulseSequence& seq,
                     Detuning d);

struct EnsembleMethod {
  enum class Kind { Quadrature, MonteCarlo };

  Kind kind = Kind::Quadrature;
  int n = 64;              // nodes per mode / total samples
  std::uint64_t seed = 1;  // Monte Carlo only

  static EnsembleMethod quadrature(int n_per_mode);
  static EnsembleMethod monte_carlo(int n_samples, std::uint64_t seed);

  std::string describe() const;
  bool operator==(const EnsembleMethod&) const = default;
};

// Weighted average of evolve() over bath detunings, reduced in a fixed order
// so results are reproducible for a given configuration and seed.
DensityMatrix ensemble_evolve(const DensityMatrix& rho0,
                              const PulseSequence& seq, const BathSpectrum& s,
                              const EnsembleMethod& method);

// Expected total counts for shots repetitions; Poisson-distributed when noisy.
double counts_from_p0(double p0, const SignalModel& m, bool noisy,
                      std::uint64_t seed);

struct PopulationEstimate {
  double p0 = 0;
  // Raw estimate outside [-0.05, 1.05]; the value is never clipped.
  bool out_of_range = false;
};

PopulationEstimate p0_from_counts(double counts, const SignalModel& m);

}  // namespace spinbath
