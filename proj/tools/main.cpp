#include <CLI11.hpp>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spinbath/run.hpp"

namespace {

using namespace spinbath;

GridSpec parse_grid_spec(const std::string& text) {
  GridSpec g;
  char extra = 0;
  std::istringstream is(text);
  char c1 = 0, c2 = 0;
  if (!(is >> g.start >> c1 >> g.stop >> c2 >> g.step) || c1 != ':' ||
      c2 != ':' || (is >> extra)) {
    throw ConfigError("grid must be start:stop:step, got '" + text + "'");
  }
  if (!(g.step > 0) || !(g.stop > g.start)) {
    throw ConfigError("grid needs step > 0 and stop > start");
  }
  return g;
}

EnsembleMethod parse_method_spec(const std::string& text,
                                 std::uint64_t default_seed) {
  auto parse_count = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad count in method '" + text + "'");
    }
    if (used != s.size() || v <= 0) {
      throw ConfigError("bad count in method '" + text + "'");
    }
    return v;
  };
  if (text.rfind("quadrature:", 0) == 0) {
    return EnsembleMethod::quadrature(
        static_cast<int>(parse_count(text.substr(11))));
  }
  if (text.rfind("mc:", 0) == 0) {
    const std::string rest = text.substr(3);
    const std::size_t colon = rest.find(':');
    if (colon == std::string::npos) {
      return EnsembleMethod::monte_carlo(
          static_cast<int>(parse_count(rest)), default_seed);
    }
    return EnsembleMethod::monte_carlo(
        static_cast<int>(parse_count(rest.substr(0, colon))),
        static_cast<std::uint64_t>(parse_count(rest.substr(colon + 1))));
  }
  throw ConfigError("method must be quadrature:N or mc:N[:seed], got '" +
                    text + "'");
}

SignalModel parse_signal_spec(const std::string& text) {
  double cmax = 0, cmin = 0;
  long long shots = 0;
  char c1 = 0, c2 = 0, extra = 0;
  std::istringstream is(text);
  if (!(is >> cmax >> c1 >> cmin >> c2 >> shots) || c1 != ':' || c2 != ':' ||
      (is >> extra)) {
    throw ConfigError("signal must be cmax:cmin:shots, got '" + text + "'");
  }
  return SignalModel::create(cmax, cmin, shots);
}

// Built-in spectra ("paper-default", "point-mass:<MHz>",
// "single-gaussian:<center>:<sigma>"), then named spectra from the config.
BathSpectrum resolve_spectrum(const std::string& name,
                              const std::optional<DslDocument>& doc) {
  if (name == "paper-default") return paper_default_spectrum();
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad number in spectrum '" + name + "'");
    }
    if (used != s.size()) {
      throw ConfigError("bad number in spectrum '" + name + "'");
    }
    return v;
  };
  if (name.rfind("point-mass:", 0) == 0) {
    return BathSpectrum::point_mass(number(name.substr(11)));
  }
  if (name.rfind("single-gaussian:", 0) == 0) {
    const std::string rest = name.substr(16);
    const std::size_t colon = rest.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("single-gaussian needs <center>:<sigma>");
    }
    return BathSpectrum::single_gaussian(number(rest.substr(0, colon)),
                                         number(rest.substr(colon + 1)));
  }
  if (!doc) {
    throw ConfigError("--spectrum '" + name +
                      "' is not built in and no --config was given");
  }
  return find_spectrum(*doc, name);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << f.rdbuf();
  if (f.bad()) throw IoError("failed reading '" + path + "'");
  return os.str();
}

struct CommonFlags {
  std::string config_path;
  std::string spectrum_name;
  double rabi = 0;
  std::string grid;
  std::string method;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "both";
  bool ideal_pulses = false;
  std::string signal;
  bool noisy = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path,
                  "DSL file providing spectra/sequences/defaults");
  cmd->add_option("--spectrum", f.spectrum_name,
                  "named spectrum from the config file");
  cmd->add_option("--rabi", f.rabi, "Rabi frequency in MHz");
  cmd->add_option("--grid", f.grid, "scan grid start:stop:step");
  cmd->add_option("--method", f.method,
                  "ensemble average: quadrature:N or mc:N[:seed]");
  cmd->add_option("--seed", f.seed, "seed for Monte Carlo / noisy counts");
  cmd->add_option("--out", f.out, "output base path (.csv/.json appended)");
  cmd->add_option("--format", f.format, "csv | json | both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  cmd->add_flag("--ideal-pulses", f.ideal_pulses,
                "instantaneous rotations instead of finite pulses");
  cmd->add_option("--signal", f.signal,
                  "photon-count model cmax:cmin:shots (adds count columns)");
  cmd->add_flag("--noisy", f.noisy, "Poisson noise on emitted counts");
}

// Flags override config-file values; defaults fill the rest.
ExperimentConfig build_config(ExperimentKind kind, const CommonFlags& f,
                              const CLI::App* cmd, const GridSpec& def_grid) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.grid = def_grid;
  cfg.seed = f.seed;

  if (!f.config_path.empty()) {
    cfg.document = parse_dsl(read_file(f.config_path));
    if (cfg.document->rabi_mhz) cfg.rabi_mhz = *cfg.document->rabi_mhz;
    if (cfg.document->default_method) cfg.method = *cfg.document->default_method;
  }
  if (!f.spectrum_name.empty()) {
    cfg.spectrum = resolve_spectrum(f.spectrum_name, cfg.document);
    cfg.spectrum_name = f.spectrum_name;
  }
  if (cmd->count("--rabi")) cfg.rabi_mhz = f.rabi;
  if (!(cfg.rabi_mhz > 0)) throw ConfigError("Rabi frequency must be > 0");
  if (cmd->count("--grid")) cfg.grid = parse_grid_spec(f.grid);
  if (cmd->count("--method")) cfg.method = parse_method_spec(f.method, f.seed);
  if (cmd->count("--seed") &&
      cfg.method.kind == EnsembleMethod::Kind::MonteCarlo &&
      !cmd->count("--method")) {
    cfg.method.seed = f.seed;
  }
  cfg.ideal_pulses = f.ideal_pulses;
  if (!f.signal.empty()) {
    cfg.signal = parse_signal_spec(f.signal);
    cfg.noisy_counts = f.noisy;
  }
  cfg.out_base = f.out.empty() ? experiment_kind_name(kind) : f.out;
  if (f.format == "csv") {
    cfg.format = OutputFormat::Csv;
  } else if (f.format == "json") {
    cfg.format = OutputFormat::Json;
  } else {
    cfg.format = OutputFormat::Both;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spinbath: spin-qubit dephasing-bath simulator (single-qubit "
      "algorithm scans, trace-distance backflow analysis, pulse DSL)"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd;
    ExperimentKind kind;
    CommonFlags flags;
    GridSpec def_grid;
  };
  // CLI11 keeps pointers into each Sub's flags; deque keeps them stable.
  std::deque<Sub> subs;
  auto add = [&](const std::string& name, const std::string& desc,
                 ExperimentKind kind, GridSpec def_grid) -> CLI::App* {
    CLI::App* cmd = app.add_subcommand(name, desc);
    subs.push_back({cmd, kind, {}, def_grid});
    add_common(cmd, subs.back().flags);
    return cmd;
  };

  add("rdja-scan", "single-qubit algorithm success vs readout delay",
      ExperimentKind::RdjaScan, GridSpec{0, 800, 10});
  double t1 = 170.0;
  CLI::App* echo = add("echo-scan", "echo-protected algorithm vs readout delay",
                       ExperimentKind::EchoScan, GridSpec{0, 400, 10});
  echo->add_option("--t1", t1, "gate-to-echo delay in ns");

  add("trace-distance", "optimal-pair trace distance vs free evolution time",
      ExperimentKind::TraceDistance, GridSpec{0, 2000, 10});

  double prominence = 0.0;
  CLI::App* nm = add("non-markovianity",
                     "trace-distance curve plus backflow measure N",
                     ExperimentKind::NonMarkovianity, GridSpec{0, 1400, 10});
  nm->add_option("--prominence", prominence,
                 "extremum prominence threshold (0 for noiseless data)");

  std::string fit_in;
  CLI::App* fit = add("fit", "least-squares |a + b cos|*Gaussian fit of D(t)",
                      ExperimentKind::Fit, GridSpec{0, 2000, 10});
  fit->add_option("--in", fit_in, "CSV of t_ns,trace_distance (default: "
                                  "fit the simulated ideal curve)");

  double b_sat = 35.0, pol_k = 1.0, prom_mt = 0.0;
  std::string nm_window = "0:1000:10";
  CLI::App* mt = add("markov-transition",
                     "backflow measure N versus magnetic field",
                     ExperimentKind::MarkovTransition, GridSpec{0, 50, 5});
  mt->add_option("--b-sat", b_sat, "polarisation saturation field in mT");
  mt->add_option("--k", pol_k, "polarisation exponent");
  mt->add_option("--window", nm_window, "D(t) window start:stop:step in ns");
  mt->add_option("--prominence", prom_mt, "extremum prominence threshold");

  add("rabi", "population vs single-pulse duration plus spectral peak",
      ExperimentKind::Rabi, GridSpec{0, 2000, 2});

  std::string seq_name;
  CLI::App* rs = add("run-seq", "run a named DSL sequence through the bath",
                     ExperimentKind::RunSeq, GridSpec{0, 1, 1});
  rs->add_option("--seq", seq_name, "sequence name from the config file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    for (Sub& sub : subs) {
      if (!sub.cmd->parsed()) continue;
      ExperimentConfig cfg =
          build_config(sub.kind, sub.flags, sub.cmd, sub.def_grid);
      if (sub.kind == ExperimentKind::EchoScan) cfg.t1_ns = t1;
      if (sub.kind == ExperimentKind::NonMarkovianity) {
        cfg.min_prominence = prominence;
        cfg.ideal_pulses = sub.flags.ideal_pulses;
      }
      if (sub.kind == ExperimentKind::Fit) cfg.input_path = fit_in;
      if (sub.kind == ExperimentKind::MarkovTransition) {
        cfg.polarization = PolarizationModel{b_sat, pol_k};
        cfg.nm_window = parse_grid_spec(nm_window);
        cfg.min_prominence = prom_mt;
      }
      if (sub.kind == ExperimentKind::RunSeq) {
        cfg.seq_name = seq_name;
        if (!cfg.document) {
          throw ConfigError("run-seq needs --config with the sequence");
        }
      }
      run_experiment(cfg);
      std::cout << cfg.out_base << ": done\n";
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
