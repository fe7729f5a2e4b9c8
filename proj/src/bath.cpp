#include "spinbath/bath.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace spinbath {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxNodesPerMode = 512;

// Gauss-Hermite rule for weight exp(-x^2), normalised to probability weights
// (sum 1). Golub-Welsch on the Jacobi matrix; cached per order.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const HermiteRule& hermite_rule(int n) {
  static std::mutex mu;
  static std::map<int, HermiteRule> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  HermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa in [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

BathSpectrum BathSpectrum::from_modes(std::vector<BathMode> modes) {
  if (modes.empty()) throw InputError("bath spectrum needs at least one mode");
  double sum = 0;
  for (const auto& m : modes) {
    if (!std::isfinite(m.weight) || !std::isfinite(m.center_mhz) ||
        !std::isfinite(m.sigma_mhz)) {
      throw InputError("bath mode parameters must be finite");
    }
    if (m.weight < 0) throw InputError("bath mode weight must be >= 0");
    if (m.sigma_mhz < 0) throw InputError("bath mode width must be >= 0");
    sum += m.weight;
  }
  if (sum <= 0) throw InputError("bath mode weights must have positive sum");
  for (auto& m : modes) m.weight /= sum;
  return BathSpectrum(std::move(modes));
}

BathSpectrum BathSpectrum::point_mass(double delta_mhz) {
  return from_modes({BathMode{1.0, delta_mhz, 0.0}});
}

BathSpectrum BathSpectrum::single_gaussian(double center_mhz,
                                           double sigma_mhz) {
  return from_modes({BathMode{1.0, center_mhz, sigma_mhz}});
}

double envelope_sigma_mhz(double t_envelope_ns) {
  // exp(-(2 pi sigma t * 1e-3)^2 / 2) == exp(-t^2/T^2)
  return std::numbers::sqrt2 / (kTwoPi * t_envelope_ns * kMHzNsCycles);
}

BathSpectrum paper_default_spectrum() {
  const double s = envelope_sigma_mhz(kDefaultEnvelopeT_ns);
  const double w = 1.0 / 3.0;
  return BathSpectrum::from_modes({BathMode{w, -kDefaultSplittingMhz, s},
                                   BathMode{w, 0.0, s},
                                   BathMode{w, +kDefaultSplittingMhz, s}});
}

std::complex<double> coherence_function(const BathSpectrum& s, double t_ns) {
  std::complex<double> w{0.0, 0.0};
  for (const auto& m : s.modes()) {
    const double phase = kTwoPi * m.center_mhz * t_ns * kMHzNsCycles;
    const double arg = kTwoPi * m.sigma_mhz * t_ns * kMHzNsCycles;
    const double env = std::exp(-0.5 * arg * arg);
    w += m.weight * env * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return w;
}

Detuning sample_detuning(const BathSpectrum& s, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = 0;
  const BathMode* chosen = &s.modes().back();
  for (const auto& m : s.modes()) {
    acc += m.weight;
    if (u < acc) {
      chosen = &m;
      break;
    }
  }
  // Box-Muller, cosine branch only.
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double gauss =
      std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(kTwoPi * u2);
  return Detuning{chosen->center_mhz + chosen->sigma_mhz * gauss};
}

std::vector<WeightedDetuning> quadrature_nodes(const BathSpectrum& s,
                                               int n_per_mode) {
  if (n_per_mode < 1) throw ConfigError("quadrature needs n_per_mode >= 1");
  if (n_per_mode > kMaxNodesPerMode) {
    std::ostringstream os;
    os << "n_per_mode " << n_per_mode << " exceeds " << kMaxNodesPerMode;
    throw ConfigError(os.str());
  }
  std::vector<WeightedDetuning> out;
  for (const auto& m : s.modes()) {
    if (m.sigma_mhz == 0.0) {
      // Point mass: one exact node keeps ensemble == single-shot evolution.
      out.push_back({m.center_mhz, m.weight});
      continue;
    }
    const HermiteRule& rule = hermite_rule(n_per_mode);
    for (int i = 0; i < n_per_mode; ++i) {
      // x ~ exp(-x^2) has std 1/sqrt(2); scale to sigma.
      out.push_back({m.center_mhz + std::numbers::sqrt2 * m.sigma_mhz * rule.nodes[i],
                     m.weight * rule.weights[i]});
    }
  }
  return out;
}

BathSpectrum polarize_spectrum(const BathSpectrum& s, double b_mt,
                               const PolarizationModel& m) {
  if (b_mt < 0) throw InputError("magnetic field must be >= 0");
  if (m.saturation_field_mt <= 0) throw InputError("B_sat must be > 0");
  if (m.exponent <= 0) throw InputError("polarization exponent must be > 0");
  const double p =
      std::min(1.0, std::pow(b_mt / m.saturation_field_mt, m.exponent));

  const auto& modes = s.modes();
  std::size_t dest = 0;
  for (std::size_t i = 1; i < modes.size(); ++i) {
    if (std::abs(modes[i].center_mhz) < std::abs(modes[dest].center_mhz)) {
      dest = i;
    }
  }
  std::vector<BathMode> out = modes;
  double moved = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i == dest) continue;
    moved += out[i].weight * p;
    out[i].weight *= (1.0 - p);
  }
  out[dest].weight += moved;
  if (p >= 1.0) {
    // Exactly one surviving mode.
    return BathSpectrum::from_modes({out[dest]});
  }
  return BathSpectrum::from_modes(std::move(out));
}

}  // namespace spinbath
