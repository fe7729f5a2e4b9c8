#include "spinbath/run.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spinbath {

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::json spectrum_json(const BathSpectrum& s) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : s.modes()) {
    modes.push_back({{"weight", m.weight},
                     {"center_mhz", m.center_mhz},
                     {"sigma_mhz", m.sigma_mhz}});
  }
  return modes;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = experiment_kind_name(cfg.kind);
  j["spectrum_name"] = cfg.spectrum_name;
  j["spectrum"] = spectrum_json(cfg.spectrum);
  j["rabi_mhz"] = cfg.rabi_mhz;
  j["method"] = cfg.method.describe();
  j["ideal_pulses"] = cfg.ideal_pulses;
  j["seed"] = cfg.seed;
  if (cfg.kind != ExperimentKind::Fit && cfg.kind != ExperimentKind::RunSeq) {
    j["grid"] = {{"start", cfg.grid.start},
                 {"stop", cfg.grid.stop},
                 {"step", cfg.grid.step}};
  }
  if (cfg.kind == ExperimentKind::EchoScan) j["t1_ns"] = cfg.t1_ns;
  if (cfg.kind == ExperimentKind::NonMarkovianity ||
      cfg.kind == ExperimentKind::MarkovTransition) {
    j["min_prominence"] = cfg.min_prominence;
  }
  if (cfg.kind == ExperimentKind::MarkovTransition) {
    j["polarization"] = {{"saturation_field_mt", cfg.polarization.saturation_field_mt},
                         {"exponent", cfg.polarization.exponent}};
    j["nm_window"] = {{"start", cfg.nm_window.start},
                      {"stop", cfg.nm_window.stop},
                      {"step", cfg.nm_window.step}};
  }
  if (cfg.signal) {
    j["signal"] = {{"c_max", cfg.signal->c_max},
                   {"c_min", cfg.signal->c_min},
                   {"shots", cfg.signal->shots},
                   {"noisy", cfg.noisy_counts}};
  }
  if (cfg.kind == ExperimentKind::RunSeq) j["seq"] = cfg.seq_name;
  if (!cfg.input_path.empty()) j["input"] = cfg.input_path;
  return j;
}

void append_scan(ExperimentResult& out, const ScanResult& scan) {
  out.columns.push_back(scan.grid_name);
  for (const auto& [name, curve] : scan.curves) {
    (void)curve;
    out.columns.push_back(name);
  }
  out.rows.resize(scan.grid.size());
  for (std::size_t i = 0; i < scan.grid.size(); ++i) {
    out.rows[i].push_back(scan.grid[i]);
    for (const auto& [name, curve] : scan.curves) {
      (void)name;
      out.rows[i].push_back(curve[i]);
    }
  }
}

// Detector layer: companion count columns for every p0-like curve.
void append_counts(ExperimentResult& out, const ExperimentConfig& cfg) {
  if (!cfg.signal) return;
  const std::size_t ncols = out.columns.size();
  std::vector<std::size_t> p0_cols;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (out.columns[c].rfind("p0", 0) == 0) p0_cols.push_back(c);
  }
  std::uint64_t draw = 0;
  for (std::size_t c : p0_cols) {
    out.columns.push_back("counts_" + out.columns[c]);
    for (auto& row : out.rows) {
      row.push_back(counts_from_p0(row[c], *cfg.signal, cfg.noisy_counts,
                                   cfg.seed + 1000003 * draw++));
    }
  }
}

nlohmann::json extrema_json(const std::vector<Extremum>& extrema) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : extrema) {
    arr.push_back({{"time_ns", e.time_ns},
                   {"value", e.value},
                   {"kind", e.kind == ExtremumKind::Min ? "min" : "max"}});
  }
  return arr;
}

TraceDistanceSeries ideal_trace_distance(const BathSpectrum& s,
                                         const ExperimentConfig& cfg,
                                         const GridSpec& grid) {
  return run_trace_distance_experiment(s, cfg.rabi_mhz, grid.values(),
                                       cfg.method, /*ideal_pulses=*/true);
}

}  // namespace

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::RdjaScan:
      return "rdja-scan";
    case ExperimentKind::EchoScan:
      return "echo-scan";
    case ExperimentKind::TraceDistance:
      return "trace-distance";
    case ExperimentKind::NonMarkovianity:
      return "non-markovianity";
    case ExperimentKind::Fit:
      return "fit";
    case ExperimentKind::MarkovTransition:
      return "markov-transition";
    case ExperimentKind::Rabi:
      return "rabi";
    case ExperimentKind::RunSeq:
      return "run-seq";
  }
  return "unknown";
}

ExperimentResult compute_experiment(const ExperimentConfig& cfg) {
  ExperimentResult out;
  out.experiment = experiment_kind_name(cfg.kind);
  out.config_echo = config_json(cfg);

  const PulseStyle style = cfg.ideal_pulses ? PulseStyle::ideal()
                                            : PulseStyle::finite(cfg.rabi_mhz);

  switch (cfg.kind) {
    case ExperimentKind::RdjaScan: {
      append_scan(out, run_rdja_scan(cfg.spectrum, style, cfg.grid.values(),
                                     cfg.method));
      break;
    }
    case ExperimentKind::EchoScan: {
      append_scan(out, run_echo_scan(cfg.spectrum, style, cfg.t1_ns,
                                     cfg.grid.values(), cfg.method));
      break;
    }
    case ExperimentKind::TraceDistance: {
      const TraceDistanceSeries series = run_trace_distance_experiment(
          cfg.spectrum, cfg.rabi_mhz, cfg.grid.values(), cfg.method,
          cfg.ideal_pulses);
      out.columns = {"t_ns", "trace_distance"};
      for (std::size_t i = 0; i < series.times_ns.size(); ++i) {
        out.rows.push_back({series.times_ns[i], series.values[i]});
      }
      break;
    }
    case ExperimentKind::NonMarkovianity: {
      const TraceDistanceSeries series = run_trace_distance_experiment(
          cfg.spectrum, cfg.rabi_mhz, cfg.grid.values(), cfg.method,
          cfg.ideal_pulses);
      out.columns = {"t_ns", "trace_distance"};
      for (std::size_t i = 0; i < series.times_ns.size(); ++i) {
        out.rows.push_back({series.times_ns[i], series.values[i]});
      }
      const NmResult nm =
          non_markovianity_revival_sum(series, cfg.min_prominence);
      out.extras["n_value"] = nm.n_value;
      out.extras["n_integral"] = non_markovianity_integral(series);
      out.extras["extrema"] = extrema_json(nm.extrema);
      break;
    }
    case ExperimentKind::Fit: {
      TraceDistanceSeries series =
          cfg.input_path.empty()
              ? ideal_trace_distance(cfg.spectrum, cfg, cfg.grid)
              : read_series_csv(cfg.input_path);
      const FitParams fit = fit_trace_distance(series);
      out.columns = {"a", "b", "delta_mhz", "t_ns", "residual_rms"};
      out.rows.push_back(
          {fit.a, fit.b, fit.delta_mhz, fit.t_ns, fit.residual_rms});
      out.extras["fit"] = {{"a", fit.a},
                           {"b", fit.b},
                           {"delta_mhz", fit.delta_mhz},
                           {"t_ns", fit.t_ns},
                           {"residual_rms", fit.residual_rms},
                           {"iterations", fit.iterations}};
      break;
    }
    case ExperimentKind::MarkovTransition: {
      out.columns = {"b_mt", "n_value"};
      const std::vector<double> fields = cfg.grid.values();
      double previous = -1;
      for (double b : fields) {
        const BathSpectrum polarized =
            polarize_spectrum(cfg.spectrum, b, cfg.polarization);
        const TraceDistanceSeries series =
            ideal_trace_distance(polarized, cfg, cfg.nm_window);
        const double n =
            non_markovianity_revival_sum(series, cfg.min_prominence).n_value;
        out.rows.push_back({b, n});
        (void)previous;
        previous = n;
      }
      break;
    }
    case ExperimentKind::Rabi: {
      const ScanResult scan = run_rabi_scan(cfg.spectrum, cfg.rabi_mhz,
                                            cfg.grid.values(), cfg.method);
      append_scan(out, scan);
      const DftPeak peak = dft_peak(scan.grid, scan.curve("p0"));
      out.extras["dft_peak"] = {{"frequency_mhz", peak.frequency_mhz},
                                {"amplitude", peak.amplitude},
                                {"has_peak", peak.has_peak}};
      if (peak.has_peak && peak.frequency_mhz > 0) {
        out.extras["pi_time_ns"] = 1e3 / (2.0 * peak.frequency_mhz);
      }
      break;
    }
    case ExperimentKind::RunSeq: {
      if (!cfg.document) {
        throw ConfigError("run-seq needs a DSL document (--config)");
      }
      const DslSequence& dsl_seq = find_sequence(*cfg.document, cfg.seq_name);
      const PulseSequence seq =
          to_pulse_sequence(dsl_seq, cfg.rabi_mhz, cfg.seq_name);
      const DensityMatrix rho =
          ensemble_evolve(DensityMatrix::ground(), seq, cfg.spectrum,
                          cfg.method);
      const BlochVector v = bloch_from_density(rho);
      const double p0 = population_p0(rho);
      out.columns = {"p0", "x", "y", "z"};
      out.rows.push_back({p0, v.x, v.y, v.z});
      out.extras["total_duration_ns"] = seq.total_duration_ns();
      break;
    }
  }

  append_counts(out, cfg);
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result = compute_experiment(cfg);
  if (cfg.format == OutputFormat::Csv || cfg.format == OutputFormat::Both) {
    emit_plot_data(result, cfg.out_base + ".csv");
  }
  if (cfg.format == OutputFormat::Json || cfg.format == OutputFormat::Both) {
    emit_json(result, cfg.out_base + ".json");
  }
  return result;
}

std::string to_csv_string(const ExperimentResult& result) {
  std::ostringstream os;
  for (std::size_t c = 0; c < result.columns.size(); ++c) {
    if (c) os << ",";
    os << result.columns[c];
  }
  os << "\n";
  for (const auto& row : result.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ",";
      os << fmt12(row[c]);
    }
    os << "\n";
  }
  return os.str();
}

nlohmann::json to_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["experiment"] = result.experiment;
  j["config"] = result.config_echo;
  j["columns"] = result.columns;
  j["rows"] = result.rows;
  for (const auto& [key, value] : result.extras.items()) {
    j[key] = value;
  }
  return j;
}

void emit_plot_data(const ExperimentResult& result, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << to_csv_string(result);
  if (!f.good()) throw IoError("failed writing '" + path + "'");
}

void emit_json(const ExperimentResult& result, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << to_json(result).dump(2) << "\n";
  if (!f.good()) throw IoError("failed writing '" + path + "'");
}

TraceDistanceSeries read_series_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  std::vector<double> times, values;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && !line.empty() &&
        !(line[0] == '-' || line[0] == '.' || (line[0] >= '0' && line[0] <= '9'))) {
      continue;  // header row
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("'" + path + "' line " + std::to_string(lineno) +
                        ": expected two comma-separated columns");
    }
    try {
      times.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ConfigError("'" + path + "' line " + std::to_string(lineno) +
                        ": malformed number");
    }
  }
  return TraceDistanceSeries::create(std::move(times), std::move(values),
                                     {{"source", path}});
}

}  // namespace spinbath
