#include "spinbath/pulse.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spinbath {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Matrix2cd axis_angle_unitary(double nx, double ny, double nz,
                                    double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Eigen::Matrix2cd u;
  u << std::complex<double>(c, -s * nz), std::complex<double>(-s * ny, -s * nx),
      std::complex<double>(s * ny, -s * nx), std::complex<double>(c, s * nz);
  return u;
}

Eigen::Matrix2cd segment_unitary(const PulseSegment& seg, double delta_mhz) {
  switch (seg.kind) {
    case PulseSegment::Kind::Pulse: {
      const double wr = std::hypot(seg.rabi_mhz, delta_mhz);
      if (wr == 0.0) return Eigen::Matrix2cd::Identity();
      const double theta = kTwoPi * wr * seg.duration_ns * kMHzNsCycles;
      const double nx = seg.rabi_mhz * std::cos(seg.phase_rad) / wr;
      const double ny = seg.rabi_mhz * std::sin(seg.phase_rad) / wr;
      const double nz = delta_mhz / wr;
      return axis_angle_unitary(nx, ny, nz, theta);
    }
    case PulseSegment::Kind::Delay: {
      const double theta = kTwoPi * delta_mhz * seg.duration_ns * kMHzNsCycles;
      return axis_angle_unitary(0, 0, 1, theta);
    }
    case PulseSegment::Kind::Instant:
      return axis_angle_unitary(std::cos(seg.phase_rad),
                                std::sin(seg.phase_rad), 0, seg.angle_rad);
  }
  return Eigen::Matrix2cd::Identity();
}

Eigen::Matrix2cd sequence_unitary(const PulseSequence& seq, double delta_mhz) {
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  for (const auto& seg : seq.segments) u = segment_unitary(seg, delta_mhz) * u;
  return u;
}

}  // namespace

double axis_phase_rad(Axis axis) {
  switch (axis) {
    case Axis::X:
      return 0.0;
    case Axis::Y:
      return 0.5 * std::numbers::pi;
    case Axis::MinusX:
      return std::numbers::pi;
    case Axis::MinusY:
      return 1.5 * std::numbers::pi;
  }
  return 0.0;
}

PulseSegment PulseSegment::pulse(double phase_rad, double rabi_mhz,
                                 double duration_ns) {
  if (!(rabi_mhz > 0)) throw InputError("pulse needs Rabi frequency > 0");
  if (!(duration_ns > 0)) throw InputError("pulse needs duration > 0");
  PulseSegment s;
  s.kind = Kind::Pulse;
  s.phase_rad = phase_rad;
  s.rabi_mhz = rabi_mhz;
  s.duration_ns = duration_ns;
  return s;
}

PulseSegment PulseSegment::delay(double duration_ns) {
  if (!(duration_ns >= 0) || !std::isfinite(duration_ns)) {
    throw InputError("delay needs duration >= 0");
  }
  PulseSegment s;
  s.kind = Kind::Delay;
  s.duration_ns = duration_ns;
  return s;
}

PulseSegment PulseSegment::instant(double phase_rad, double angle_rad) {
  PulseSegment s;
  s.kind = Kind::Instant;
  s.phase_rad = phase_rad;
  s.angle_rad = angle_rad;
  return s;
}

double PulseSequence::total_duration_ns() const {
  double t = 0;
  for (const auto& s : segments) t += s.duration_ns;
  return t;
}

PulseSegment rotation_pulse(Axis axis, double angle_rad, double rabi_mhz) {
  if (!(angle_rad > 0)) throw InputError("rotation angle must be > 0");
  if (!(rabi_mhz > 0)) throw InputError("Rabi frequency must be > 0");
  const double duration_ns = angle_rad / (kTwoPi * rabi_mhz * kMHzNsCycles);
  return PulseSegment::pulse(axis_phase_rad(axis), rabi_mhz, duration_ns);
}

PulseSegment instant_rotation(Axis axis, double angle_rad) {
  return PulseSegment::instant(axis_phase_rad(axis), angle_rad);
}

SignalModel SignalModel::create(double c_max, double c_min,
                                std::int64_t shots) {
  if (!(c_max > 0) || c_min < 0) throw InputError("need c_max > 0, c_min >= 0");
  if (!(c_max > c_min)) throw InputError("need c_max > c_min");
  if (shots <= 0) throw InputError("need shots > 0");
  return SignalModel{c_max, c_min, shots};
}

DensityMatrix evolve(const DensityMatrix& rho0, const PulseSequence& seq,
                     Detuning d) {
  const Eigen::Matrix2cd u = sequence_unitary(seq, d.mhz);
  return DensityMatrix::from_matrix(u * rho0.matrix() * u.adjoint());
}

EnsembleMethod EnsembleMethod::quadrature(int n_per_mode) {
  EnsembleMethod m;
  m.kind = Kind::Quadrature;
  m.n = n_per_mode;
  return m;
}

EnsembleMethod EnsembleMethod::monte_carlo(int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ConfigError("Monte Carlo needs n_samples >= 1");
  EnsembleMethod m;
  m.kind = Kind::MonteCarlo;
  m.n = n_samples;
  m.seed = seed;
  return m;
}

std::string EnsembleMethod::describe() const {
  std::ostringstream os;
  if (kind == Kind::Quadrature) {
    os << "quadrature:" << n;
  } else {
    os << "mc:" << n << ":" << seed;
  }
  return os.str();
}

DensityMatrix ensemble_evolve(const DensityMatrix& rho0,
                              const PulseSequence& seq, const BathSpectrum& s,
                              const EnsembleMethod& method) {
  Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
  if (method.kind == EnsembleMethod::Kind::Quadrature) {
    for (const auto& node : quadrature_nodes(s, method.n)) {
      const Eigen::Matrix2cd u = sequence_unitary(seq, node.delta_mhz);
      acc += node.weight * (u * rho0.matrix() * u.adjoint());
    }
  } else {
    std::mt19937_64 rng(method.seed);
    for (int i = 0; i < method.n; ++i) {
      const Detuning d = sample_detuning(s, rng);
      const Eigen::Matrix2cd u = sequence_unitary(seq, d.mhz);
      acc += u * rho0.matrix() * u.adjoint();
    }
    acc /= static_cast<double>(method.n);
  }
  return DensityMatrix::from_matrix(acc, kEnsemblePsdTol);
}

double counts_from_p0(double p0, const SignalModel& m, bool noisy,
                      std::uint64_t seed) {
  if (!(p0 >= -1e-9 && p0 <= 1.0 + 1e-9)) {
    std::ostringstream os;
    os << "p0 = " << p0 << " outside [0, 1]";
    throw InputError(os.str());
  }
  const double clamped = std::min(1.0, std::max(0.0, p0));
  const double mean =
      (m.c_min + clamped * (m.c_max - m.c_min)) * static_cast<double>(m.shots);
  if (!noisy) return mean;
  std::mt19937_64 rng(seed);
  std::poisson_distribution<long long> poisson(mean);
  return static_cast<double>(poisson(rng));
}

PopulationEstimate p0_from_counts(double counts, const SignalModel& m) {
  const double per_shot = counts / static_cast<double>(m.shots);
  const double p0 = (per_shot - m.c_min) / (m.c_max - m.c_min);
  return PopulationEstimate{p0, p0 < -0.05 || p0 > 1.05};
}

}  // namespace spinbath
