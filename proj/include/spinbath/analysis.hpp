#pragma once

#include <cstddef>
#include <vector>

#include "spinbath/series.hpp"

namespace spinbath {

enum class ExtremumKind { Min, Max };

struct Extremum {
  std::size_t index = 0;
  double time_ns = 0;
  double value = 0;
  ExtremumKind kind = ExtremumKind::Min;
};

// Interior extrema with prominence >= min_prominence, endpoints included as
// boundary extrema. Adjacent extremum pairs whose value difference falls
// below the threshold are merged away (smallest first), so the result always
// alternates min/max. Needs at least 3 points.
std::vector<Extremum> find_local_extrema(const TraceDistanceSeries& series,
                                         double min_prominence);

struct NmResult {
  double n_value = 0;
  std::vector<Extremum> extrema;
};

// N = sum over rises of (local max - preceding local min), the discrete form
// of the trace-distance backflow measure restricted to dD/dt > 0 intervals.
NmResult non_markovianity_revival_sum(const TraceDistanceSeries& series,
                                      double min_prominence);

// sum_i max(0, D_{i+1} - D_i). Equals the revival sum at prominence 0 on
// noiseless data.
double non_markovianity_integral(const TraceDistanceSeries& series);

// Least-squares parameters of D(t) = |(a + b cos(2 pi Delta t)) exp(-t^2/T^2)|
// with a normalised to be >= 0.
struct FitParams {
  double a = 0;
  double b = 0;
  double delta_mhz = 0;
  double t_ns = 0;
  double residual_rms = 0;
  int iterations = 0;
};

double trace_distance_model(double t_ns, double a, double b, double delta_mhz,
                            double t_env_ns);

// Levenberg-Marquardt with a finite-difference Jacobian (the absolute value
// makes the model non-smooth at its zeros). Initial Delta from the dominant
// DFT bin, T from log-envelope regression, (a, b) from a linear solve.
// Throws InputError when the series spans < 1.5 oscillation periods and
// FitError (with the cost trace) on non-convergence.
FitParams fit_trace_distance(const TraceDistanceSeries& series);

struct DftPeak {
  double frequency_mhz = 0;
  double amplitude = 0;
  bool has_peak = false;  // false for constant input (amplitude 0)
};

// Dominant positive-frequency bin of the mean-subtracted series, refined by
// 3-point parabolic interpolation on the log magnitude (Hann window,
// zero-padded transform). Requires a uniform grid.
DftPeak dft_peak(const std::vector<double>& times_ns,
                 const std::vector<double>& values);

}  // namespace spinbath
