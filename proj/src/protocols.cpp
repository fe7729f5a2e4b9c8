#include "spinbath/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace spinbath {

namespace {

constexpr double kPi = std::numbers::pi;

void check_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw InputError(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw InputError("grid has non-finite entry");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw InputError(std::string(what) + " grid must be strictly increasing");
    }
  }
}

void check_p0(double p0) {
  if (p0 < -0.05 || p0 > 1.05) {
    std::ostringstream os;
    os << "simulated population " << p0 << " outside [-0.05, 1.05]";
    throw Error(os.str());
  }
}

}  // namespace

double Oracle::phase_rad() const {
  switch (id) {
    case Id::U1:
      return 0.0;
    case Id::U2:
      return 2.0 * kPi;
    case Id::U3:
      return 3.0 * kPi;
    case Id::U4:
      return kPi;
  }
  return 0.0;
}

bool Oracle::balanced() const { return id == Id::U3 || id == Id::U4; }

std::string Oracle::name() const {
  switch (id) {
    case Id::U1:
      return "U1";
    case Id::U2:
      return "U2";
    case Id::U3:
      return "U3";
    case Id::U4:
      return "U4";
  }
  return "U1";
}

Oracle Oracle::from_name(std::string_view name) {
  for (const Oracle& o : all()) {
    if (o.name() == name) return o;
  }
  throw InputError("unknown oracle '" + std::string(name) +
                   "', expected U1..U4");
}

std::array<Oracle, 4> Oracle::all() {
  return {Oracle{Id::U1}, Oracle{Id::U2}, Oracle{Id::U3}, Oracle{Id::U4}};
}

PulseStyle PulseStyle::finite(double rabi_mhz) {
  if (!(rabi_mhz > 0)) throw InputError("Rabi frequency must be > 0");
  return PulseStyle{false, rabi_mhz};
}

PulseStyle PulseStyle::ideal() { return PulseStyle{true, kDefaultRabiMhz}; }

PulseSegment PulseStyle::rotation(Axis axis, double angle_rad) const {
  if (instantaneous) return instant_rotation(axis, angle_rad);
  return rotation_pulse(axis, angle_rad, rabi_mhz);
}

PulseSequence build_rdja_sequence(Oracle o, double tau_ns,
                                  const PulseStyle& style) {
  if (!(tau_ns >= 0) || !std::isfinite(tau_ns)) {
    throw InputError("RDJA delay must be >= 0");
  }
  PulseSequence seq;
  seq.segments.push_back(style.rotation(Axis::X, kPi / 2));
  seq.segments.push_back(style.rotation(Axis::X, kPi / 2));
  if (o.phase_rad() > 0) {
    seq.segments.push_back(style.rotation(Axis::Y, o.phase_rad()));
  }
  seq.segments.push_back(style.rotation(Axis::MinusX, kPi / 2));
  seq.segments.push_back(PulseSegment::delay(tau_ns));
  seq.segments.push_back(style.rotation(Axis::X, kPi / 2));
  std::ostringstream label;
  label << "rdja-" << o.name() << "-tau" << tau_ns;
  seq.label = label.str();
  return seq;
}

PulseSequence build_echo_rdja_sequence(Oracle o, double t1_ns, double t2_ns,
                                       const PulseStyle& style) {
  if (!(t1_ns >= 0) || !(t2_ns >= 0) || !std::isfinite(t1_ns) ||
      !std::isfinite(t2_ns)) {
    throw InputError("echo delays must be >= 0");
  }
  PulseSequence seq;
  // Net gate block: H then U_oracle sends |0> to (|0> -+ i|1>)/sqrt(2).
  seq.segments.push_back(
      style.rotation(o.balanced() ? Axis::MinusX : Axis::X, kPi / 2));
  seq.segments.push_back(PulseSegment::delay(t1_ns));
  seq.segments.push_back(style.rotation(Axis::X, kPi));
  seq.segments.push_back(PulseSegment::delay(t2_ns));
  seq.segments.push_back(style.rotation(Axis::X, kPi / 2));
  std::ostringstream label;
  label << "echo-rdja-" << o.name() << "-t1_" << t1_ns << "-t2_" << t2_ns;
  seq.label = label.str();
  return seq;
}

ScanResult run_rdja_scan(const BathSpectrum& s, const PulseStyle& style,
                         const std::vector<double>& tau_grid,
                         const EnsembleMethod& method) {
  check_grid(tau_grid, "tau");
  ScanResult r;
  r.grid_name = "tau_ns";
  r.grid = tau_grid;
  std::vector<std::vector<double>> p0(4);
  const DensityMatrix rho0 = DensityMatrix::ground();
  for (double tau : tau_grid) {
    int k = 0;
    for (const Oracle& o : Oracle::all()) {
      const PulseSequence seq = build_rdja_sequence(o, tau, style);
      const double p = population_p0(ensemble_evolve(rho0, seq, s, method));
      check_p0(p);
      p0[k++].push_back(p);
    }
  }
  r.curves.emplace_back("p0_u1", p0[0]);
  r.curves.emplace_back("p0_u2", p0[1]);
  r.curves.emplace_back("p0_u3", p0[2]);
  r.curves.emplace_back("p0_u4", p0[3]);
  std::vector<double> contrast(tau_grid.size());
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    contrast[i] = p0[2][i] - p0[0][i];
  }
  r.curves.emplace_back("contrast", std::move(contrast));
  r.metadata["method"] = method.describe();
  return r;
}

ScanResult run_echo_scan(const BathSpectrum& s, const PulseStyle& style,
                         double t1_ns, const std::vector<double>& t2_grid,
                         const EnsembleMethod& method) {
  check_grid(t2_grid, "t2");
  ScanResult r;
  r.grid_name = "t2_ns";
  r.grid = t2_grid;
  std::vector<double> pc, pb, pos;
  const DensityMatrix rho0 = DensityMatrix::ground();
  const Oracle constant{Oracle::Id::U1};
  const Oracle balanced{Oracle::Id::U3};
  for (double t2 : t2_grid) {
    const double c = population_p0(ensemble_evolve(
        rho0, build_echo_rdja_sequence(constant, t1_ns, t2, style), s, method));
    const double b = population_p0(ensemble_evolve(
        rho0, build_echo_rdja_sequence(balanced, t1_ns, t2, style), s, method));
    check_p0(c);
    check_p0(b);
    pc.push_back(c);
    pb.push_back(b);
    pos.push_back(c - b);
  }
  r.curves.emplace_back("p0_constant", std::move(pc));
  r.curves.emplace_back("p0_balanced", std::move(pb));
  r.curves.emplace_back("pos", std::move(pos));
  r.metadata["method"] = method.describe();
  std::ostringstream t1s;
  t1s << t1_ns;
  r.metadata["t1_ns"] = t1s.str();
  return r;
}

TraceDistanceSeries run_trace_distance_experiment(
    const BathSpectrum& s, double rabi_mhz, const std::vector<double>& t_grid,
    const EnsembleMethod& method, bool ideal_pulses) {
  check_grid(t_grid, "time");
  const PulseStyle style =
      ideal_pulses ? PulseStyle::ideal() : PulseStyle::finite(rabi_mhz);
  const DensityMatrix rho0 = DensityMatrix::ground();
  std::vector<double> values;
  values.reserve(t_grid.size());
  for (double t : t_grid) {
    PulseSequence plus, minus;
    plus.segments = {style.rotation(Axis::X, kPi / 2), PulseSegment::delay(t)};
    minus.segments = {style.rotation(Axis::MinusX, kPi / 2),
                      PulseSegment::delay(t)};
    const DensityMatrix r1 = ensemble_evolve(rho0, plus, s, method);
    const DensityMatrix r2 = ensemble_evolve(rho0, minus, s, method);
    values.push_back(trace_distance(r1, r2));
  }
  std::map<std::string, std::string> meta;
  meta["method"] = method.describe();
  meta["pulses"] = ideal_pulses ? "ideal" : "finite";
  return TraceDistanceSeries::create(t_grid, std::move(values),
                                     std::move(meta));
}

DensityMatrix run_qst(const PulseSequence& prep, const BathSpectrum& s,
                      const EnsembleMethod& method,
                      const PulseStyle& readout_style) {
  const DensityMatrix rho0 = DensityMatrix::ground();

  const double pz = population_p0(ensemble_evolve(rho0, prep, s, method));

  PulseSequence seq_x = prep;
  seq_x.segments.push_back(readout_style.rotation(Axis::Y, kPi / 2));
  const double px = population_p0(ensemble_evolve(rho0, seq_x, s, method));

  PulseSequence seq_y = prep;
  seq_y.segments.push_back(readout_style.rotation(Axis::MinusX, kPi / 2));
  const double py = population_p0(ensemble_evolve(rho0, seq_y, s, method));

  // R_y(pi/2) maps x onto -z; R_x(-pi/2) maps y onto -z.
  return density_from_bloch(
      BlochVector{1.0 - 2.0 * px, 1.0 - 2.0 * py, 2.0 * pz - 1.0});
}

ScanResult run_rabi_scan(const BathSpectrum& s, double rabi_mhz,
                         const std::vector<double>& duration_grid,
                         const EnsembleMethod& method) {
  check_grid(duration_grid, "duration");
  if (!(rabi_mhz > 0)) throw InputError("Rabi frequency must be > 0");
  ScanResult r;
  r.grid_name = "duration_ns";
  r.grid = duration_grid;
  std::vector<double> p0;
  const DensityMatrix rho0 = DensityMatrix::ground();
  for (double d : duration_grid) {
    PulseSequence seq;
    if (d > 0) {
      seq.segments.push_back(PulseSegment::pulse(0.0, rabi_mhz, d));
    }
    const double p = population_p0(ensemble_evolve(rho0, seq, s, method));
    check_p0(p);
    p0.push_back(p);
  }
  r.curves.emplace_back("p0", std::move(p0));
  r.metadata["method"] = method.describe();
  std::ostringstream om;
  om << rabi_mhz;
  r.metadata["rabi_mhz"] = om.str();
  return r;
}

}  // namespace spinbath
