#include "spinbath/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "spinbath/bath.hpp"

namespace spinbath {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct RawExtremum {
  std::size_t index;
  double value;
  ExtremumKind kind;
};

// Interior turning points; plateaus are represented by their first sample.
std::vector<RawExtremum> interior_extrema(const std::vector<double>& v) {
  std::vector<std::size_t> kept;
  kept.push_back(0);
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (v[j] != v[kept.back()]) kept.push_back(j);
  }
  std::vector<RawExtremum> out;
  for (std::size_t k = 1; k + 1 < kept.size(); ++k) {
    const double prev = v[kept[k - 1]];
    const double cur = v[kept[k]];
    const double next = v[kept[k + 1]];
    if (cur > prev && cur > next) {
      out.push_back({kept[k], cur, ExtremumKind::Max});
    } else if (cur < prev && cur < next) {
      out.push_back({kept[k], cur, ExtremumKind::Min});
    }
  }
  return out;
}

// In-place iterative radix-2 FFT; size must be a power of two.
void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -kTwoPi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w =
            std::polar(1.0, ang * static_cast<double>(k));
        const std::complex<double> u = a[i + k];
        const std::complex<double> t = w * a[i + k + len / 2];
        a[i + k] = u + t;
        a[i + k + len / 2] = u - t;
      }
    }
  }
}

}  // namespace

std::vector<Extremum> find_local_extrema(const TraceDistanceSeries& series,
                                         double min_prominence) {
  if (min_prominence < 0) throw InputError("prominence must be >= 0");
  const std::vector<double>& v = series.values;
  const std::vector<double>& t = series.times_ns;
  if (v.size() < 3) throw InputError("need at least 3 points for extrema");

  std::vector<RawExtremum> interior = interior_extrema(v);

  // Merge sub-prominence oscillations, smallest value difference first.
  // A pair adjacent to a boundary merges into the boundary (one removal).
  while (!interior.empty()) {
    double best = std::numeric_limits<double>::infinity();
    // candidate: -1 = against start boundary, n-1 = against end boundary,
    // k in [0, n-2) = interior pair (k, k+1).
    std::ptrdiff_t which = -2;
    const double d0 = std::abs(interior.front().value - v.front());
    if (d0 < best) {
      best = d0;
      which = -1;
    }
    for (std::size_t k = 0; k + 1 < interior.size(); ++k) {
      const double d = std::abs(interior[k + 1].value - interior[k].value);
      if (d < best) {
        best = d;
        which = static_cast<std::ptrdiff_t>(k);
      }
    }
    const double dn = std::abs(interior.back().value - v.back());
    if (dn < best) {
      best = dn;
      which = static_cast<std::ptrdiff_t>(interior.size()) - 1;
    }
    if (best >= min_prominence) break;
    if (which == -1) {
      interior.erase(interior.begin());
    } else if (which == static_cast<std::ptrdiff_t>(interior.size()) - 1) {
      interior.pop_back();
    } else {
      interior.erase(interior.begin() + which, interior.begin() + which + 2);
    }
  }

  std::vector<Extremum> out;
  const std::size_t last = v.size() - 1;
  ExtremumKind first_kind;
  if (!interior.empty()) {
    first_kind = interior.front().kind == ExtremumKind::Min ? ExtremumKind::Max
                                                            : ExtremumKind::Min;
  } else {
    first_kind =
        v[last] >= v[0] ? ExtremumKind::Min : ExtremumKind::Max;
  }
  out.push_back({0, t[0], v[0], first_kind});
  for (const auto& e : interior) {
    out.push_back({e.index, t[e.index], e.value, e.kind});
  }
  const ExtremumKind last_kind = out.back().kind == ExtremumKind::Min
                                     ? ExtremumKind::Max
                                     : ExtremumKind::Min;
  out.push_back({last, t[last], v[last], last_kind});
  return out;
}

NmResult non_markovianity_revival_sum(const TraceDistanceSeries& series,
                                      double min_prominence) {
  NmResult r;
  r.extrema = find_local_extrema(series, min_prominence);
  for (std::size_t i = 0; i + 1 < r.extrema.size(); ++i) {
    if (r.extrema[i].kind == ExtremumKind::Min &&
        r.extrema[i + 1].kind == ExtremumKind::Max) {
      r.n_value += r.extrema[i + 1].value - r.extrema[i].value;
    }
  }
  return r;
}

double non_markovianity_integral(const TraceDistanceSeries& series) {
  double n = 0;
  for (std::size_t i = 0; i + 1 < series.values.size(); ++i) {
    n += std::max(0.0, series.values[i + 1] - series.values[i]);
  }
  return n;
}

double trace_distance_model(double t_ns, double a, double b, double delta_mhz,
                            double t_env_ns) {
  const double osc = a + b * std::cos(kTwoPi * delta_mhz * t_ns * kMHzNsCycles);
  const double x = t_ns / t_env_ns;
  return std::abs(osc) * std::exp(-x * x);
}

namespace {

double fit_cost(const TraceDistanceSeries& s, const Eigen::Vector4d& p) {
  double c = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double r =
        trace_distance_model(s.times_ns[i], p(0), p(1), p(2), p(3)) -
        s.values[i];
    c += r * r;
  }
  return c;
}

}  // namespace

FitParams fit_trace_distance(const TraceDistanceSeries& series) {
  const std::size_t n = series.values.size();
  if (n < 8) throw InputError("fit needs at least 8 samples");

  // Delta init: dominant spectral line of the detrended data.
  const DftPeak peak = dft_peak(series.times_ns, series.values);
  if (!peak.has_peak) {
    throw InputError("fit is under-determined: no oscillation found");
  }
  const double span = series.times_ns.back() - series.times_ns.front();
  if (span * peak.frequency_mhz * kMHzNsCycles < 1.5) {
    throw InputError("fit is under-determined: series spans < 1.5 periods");
  }
  double delta0 = peak.frequency_mhz;

  // T init: log-envelope regression over the local maxima (t=0 included).
  double t0 = span;
  {
    std::vector<double> xs, ys;
    const double vmax = *std::max_element(series.values.begin(), series.values.end());
    const auto ext = find_local_extrema(series, 0.02 * vmax);
    for (const auto& e : ext) {
      if (e.kind == ExtremumKind::Max && e.value > 1e-6) {
        xs.push_back(e.time_ns * e.time_ns);
        ys.push_back(std::log(e.value));
      }
    }
    if (xs.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      const double m = static_cast<double>(xs.size());
      const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      if (slope < 0) t0 = 1.0 / std::sqrt(-slope);
    }
  }

  // (a, b) init: weighted linear solve with iterated sign assignment.
  double a0 = 0.5, b0 = 0.5;
  for (int pass = 0; pass < 3; ++pass) {
    double saa = 0, sab = 0, sbb = 0, say = 0, sby = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ci =
          std::cos(kTwoPi * delta0 * series.times_ns[i] * kMHzNsCycles);
      const double x = series.times_ns[i] / t0;
      const double e = std::exp(-x * x);
      const double sign =
          (pass == 0 || a0 + b0 * ci >= 0) ? 1.0 : -1.0;
      const double y = sign * series.values[i];
      saa += e * e;
      sab += e * e * ci;
      sbb += e * e * ci * ci;
      say += e * y;
      sby += e * ci * y;
    }
    const double det = saa * sbb - sab * sab;
    if (std::abs(det) > 1e-12) {
      a0 = (say * sbb - sby * sab) / det;
      b0 = (saa * sby - sab * say) / det;
    }
  }

  Eigen::Vector4d p(a0, b0, delta0, t0);
  double cost = fit_cost(series, p);
  std::vector<double> trace{cost};
  double lambda = 1e-3;
  int iterations = 0;
  bool converged = false;

  for (int it = 0; it < 200 && !converged; ++it) {
    iterations = it + 1;
    Eigen::MatrixXd jac(n, 4);
    Eigen::VectorXd res(n);
    for (std::size_t i = 0; i < n; ++i) {
      res(i) = trace_distance_model(series.times_ns[i], p(0), p(1), p(2), p(3)) -
               series.values[i];
    }
    for (int j = 0; j < 4; ++j) {
      const double h = std::max(1e-7 * std::abs(p(j)), 1e-9);
      Eigen::Vector4d pp = p, pm = p;
      pp(j) += h;
      pm(j) -= h;
      for (std::size_t i = 0; i < n; ++i) {
        jac(i, j) =
            (trace_distance_model(series.times_ns[i], pp(0), pp(1), pp(2),
                                  pp(3)) -
             trace_distance_model(series.times_ns[i], pm(0), pm(1), pm(2),
                                  pm(3))) /
            (2.0 * h);
      }
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d g = jac.transpose() * res;
    bool stepped = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      Eigen::Matrix4d damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::Vector4d dp = damped.ldlt().solve(-g);
      const Eigen::Vector4d pn = p + dp;
      const double cn = fit_cost(series, pn);
      if (std::isfinite(cn) && cn < cost) {
        double rel = 0;
        for (int j = 0; j < 4; ++j) {
          rel = std::max(rel,
                         std::abs(dp(j)) / std::max(std::abs(p(j)), 1e-12));
        }
        p = pn;
        cost = cn;
        lambda = std::max(lambda / 3.0, 1e-14);
        stepped = true;
        if (rel < 1e-8) converged = true;
        break;
      }
      lambda *= 10.0;
    }
    trace.push_back(cost);
    if (!stepped) {
      converged = true;  // no downhill step left; treat as a stationary point
    }
  }
  if (!converged) {
    throw FitError("trace-distance fit did not converge in 200 iterations",
                   trace);
  }

  FitParams out;
  out.a = p(0);
  out.b = p(1);
  out.delta_mhz = std::abs(p(2));
  out.t_ns = std::abs(p(3));
  out.residual_rms = std::sqrt(cost / static_cast<double>(n));
  out.iterations = iterations;
  if (out.a < 0 || (out.a == 0 && out.b < 0)) {
    out.a = -out.a;
    out.b = -out.b;
  }
  if (!(out.t_ns > 0) || !(out.delta_mhz >= 0)) {
    throw FitError("fit produced invalid parameters", trace);
  }
  return out;
}

DftPeak dft_peak(const std::vector<double>& times_ns,
                 const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 4 || times_ns.size() != n) {
    throw InputError("dft_peak needs >= 4 uniformly spaced samples");
  }
  const double dt = times_ns[1] - times_ns[0];
  if (!(dt > 0)) throw InputError("dft_peak grid must be increasing");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((times_ns[i] - times_ns[i - 1]) - dt) > 1e-9 * dt) {
      throw InputError("dft_peak requires a uniform grid");
    }
  }

  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  // Hann window; zero-pad x8 so the parabolic refinement sits on a densely
  // sampled peak.
  std::size_t m = 1;
  while (m < 8 * n) m <<= 1;
  std::vector<std::complex<double>> buf(m, {0.0, 0.0});
  double wsum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w =
        0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) /
                             static_cast<double>(n - 1));
    wsum += w;
    buf[i] = (values[i] - mean) * w;
  }
  fft(buf);

  std::size_t kbest = 1;
  double best = -1;
  for (std::size_t k = 1; k < m / 2; ++k) {
    const double mag = std::abs(buf[k]);
    if (mag > best) {
      best = mag;
      kbest = k;
    }
  }
  if (!(best > 0)) {
    return DftPeak{0.0, 0.0, false};
  }

  const double m0 = std::abs(buf[kbest - 1]);
  const double m1 = std::abs(buf[kbest]);
  const double m2 = std::abs(buf[kbest + 1]);
  double dk = 0;
  double logpeak = std::log(m1);
  if (m0 > 0 && m2 > 0) {
    const double l0 = std::log(m0), l1 = std::log(m1), l2 = std::log(m2);
    const double denom = l0 - 2.0 * l1 + l2;
    if (denom != 0) {
      dk = 0.5 * (l0 - l2) / denom;
      dk = std::clamp(dk, -0.5, 0.5);
      logpeak = l1 - 0.25 * (l0 - l2) * dk;
    }
  }
  DftPeak out;
  out.frequency_mhz = (static_cast<double>(kbest) + dk) /
                      (static_cast<double>(m) * dt * kMHzNsCycles);
  out.amplitude = 2.0 * std::exp(logpeak) / wsum;
  out.has_peak = true;
  return out;
}

}  // namespace spinbath
