#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "spinbath/bath.hpp"
#include "spinbath/pulse.hpp"
#include "spinbath/quantum.hpp"
#include "spinbath/series.hpp"

namespace spinbath {

// The four single-qubit oracles: a phase gate U = (-pi/2)_X (phi)_Y (pi/2)_X
// with phi = 0, 2pi (constant) and 3pi, pi (balanced).
struct Oracle {
  enum class Id { U1, U2, U3, U4 };

  Id id = Id::U1;

  double phase_rad() const;
  bool balanced() const;
  std::string name() const;

  static Oracle from_name(std::string_view name);
  static std::array<Oracle, 4> all();

  bool operator==(const Oracle&) const = default;
};

// How protocol builders realise rotations: finite rectangular pulses at a
// given Rabi frequency, or ideal instantaneous rotations.
struct PulseStyle {
  bool instantaneous = false;
  double rabi_mhz = kDefaultRabiMhz;

  static PulseStyle finite(double rabi_mhz);
  static PulseStyle ideal();

  PulseSegment rotation(Axis axis, double angle_rad) const;
};

// Full algorithm sequence, time-ordered:
//   (pi/2)_X, (pi/2)_X, (phi)_Y, (-pi/2)_X, delay tau, (pi/2)_X.
// The oracle product acts rightmost-first, so its (pi/2)_X plays right after
// the opening rotation. Zero-angle phase pulses (U1) occupy no time.
PulseSequence build_rdja_sequence(Oracle o, double tau_ns,
                                  const PulseStyle& style);

// Echo-protected variant: gate block, delay t1, (pi)_X, delay t2, (pi/2)_X.
// The gate block is the algorithm's net rotation (constant -> (pi/2)_X,
// balanced -> (-pi/2)_X), i.e. the Pauli-algebra compilation the hardware
// sequences use; playing the uncompiled pulse train leaves gate errors the
// echo cannot refocus and caps the recovered contrast near 0.7.
PulseSequence build_echo_rdja_sequence(Oracle o, double t1_ns, double t2_ns,
                                       const PulseStyle& style);

// P0 for every oracle over the delay grid, plus contrast = P0(U3) - P0(U1).
ScanResult run_rdja_scan(const BathSpectrum& s, const PulseStyle& style,
                         const std::vector<double>& tau_grid,
                         const EnsembleMethod& method);

// Echo scan at fixed t1 over a t2 grid. Under the echo the constant class
// reads out bright and the balanced class dark, so pos = p0_constant -
// p0_balanced.
ScanResult run_echo_scan(const BathSpectrum& s, const PulseStyle& style,
                         double t1_ns, const std::vector<double>& t2_grid,
                         const EnsembleMethod& method);

// Prepare the optimal pair (|0> -+ i|1>)/sqrt(2) via (+-pi/2)_X, free-evolve
// each grid time under the ensemble, record the trace distance.
TraceDistanceSeries run_trace_distance_experiment(
    const BathSpectrum& s, double rabi_mhz, const std::vector<double>& t_grid,
    const EnsembleMethod& method, bool ideal_pulses);

// Single-qubit state tomography: z from direct P0, x from (pi/2)_Y-then-read,
// y from (-pi/2)_X-then-read.
DensityMatrix run_qst(const PulseSequence& prep, const BathSpectrum& s,
                      const EnsembleMethod& method,
                      const PulseStyle& readout_style = PulseStyle::ideal());

// P0 versus single-pulse duration.
ScanResult run_rabi_scan(const BathSpectrum& s, double rabi_mhz,
                         const std::vector<double>& duration_grid,
                         const EnsembleMethod& method);

}  // namespace spinbath
