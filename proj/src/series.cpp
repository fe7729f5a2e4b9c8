#include "spinbath/series.hpp"

#include <cmath>
#include <sstream>

namespace spinbath {

TraceDistanceSeries TraceDistanceSeries::create(
    std::vector<double> times_ns, std::vector<double> values,
    std::map<std::string, std::string> metadata) {
  if (times_ns.size() != values.size()) {
    throw InputError("series times and values must have equal length");
  }
  for (std::size_t i = 0; i < times_ns.size(); ++i) {
    if (!std::isfinite(times_ns[i]) || !std::isfinite(values[i])) {
      throw InputError("series entries must be finite");
    }
    if (i > 0 && times_ns[i] <= times_ns[i - 1]) {
      throw InputError("series grid must be strictly increasing");
    }
    if (values[i] < 0.0 || values[i] > 1.0 + 1e-9) {
      std::ostringstream os;
      os << "trace distance value " << values[i] << " outside [0, 1]";
      throw InputError(os.str());
    }
  }
  TraceDistanceSeries s;
  s.times_ns = std::move(times_ns);
  s.values = std::move(values);
  s.metadata = std::move(metadata);
  return s;
}

const std::vector<double>& ScanResult::curve(const std::string& name) const {
  for (const auto& [n, v] : curves) {
    if (n == name) return v;
  }
  throw InputError("no curve named '" + name + "'");
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0)) throw ConfigError("grid step must be > 0");
  if (!(stop > start)) throw ConfigError("grid stop must exceed start");
  std::vector<double> g;
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5));
  g.reserve(n + 1);
  for (std::size_t i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + 0.5 * step) break;
    g.push_back(v);
  }
  return g;
}

}  // namespace spinbath
