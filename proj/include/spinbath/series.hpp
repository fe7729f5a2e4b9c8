#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spinbath/errors.hpp"

namespace spinbath {

// Sampled trace-distance curve D(t). Grid strictly increasing, values in
// [0, 1 + 1e-9].
struct TraceDistanceSeries {
  std::vector<double> times_ns;
  std::vector<double> values;
  std::map<std::string, std::string> metadata;

  static TraceDistanceSeries create(
      std::vector<double> times_ns, std::vector<double> values,
      std::map<std::string, std::string> metadata = {});
};

// Generic scan output: one grid, several named curves of equal length.
struct ScanResult {
  std::string grid_name;
  std::vector<double> grid;
  std::vector<std::pair<std::string, std::vector<double>>> curves;
  std::map<std::string, std::string> metadata;

  const std::vector<double>& curve(const std::string& name) const;
};

// start, start+step, ... up to stop (inclusive within half a step).
std::vector<double> make_grid(double start, double stop, double step);

}  // namespace spinbath
