#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinbath/analysis.hpp"
#include "spinbath/dsl.hpp"
#include "spinbath/protocols.hpp"

namespace spinbath {

enum class ExperimentKind {
  RdjaScan,
  EchoScan,
  TraceDistance,
  NonMarkovianity,
  Fit,
  MarkovTransition,
  Rabi,
  RunSeq,
};

std::string experiment_kind_name(ExperimentKind kind);

enum class OutputFormat { Csv, Json, Both };

struct GridSpec {
  double start = 0;
  double stop = 0;
  double step = 0;

  std::vector<double> values() const { return make_grid(start, stop, step); }
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::RdjaScan;
  BathSpectrum spectrum = paper_default_spectrum();
  std::string spectrum_name = "paper-default";
  double rabi_mhz = kDefaultRabiMhz;
  GridSpec grid;  // ns for time scans, mT for the transition sweep
  EnsembleMethod method = EnsembleMethod::quadrature(64);
  bool ideal_pulses = false;
  double t1_ns = 170.0;                        // echo-scan
  double min_prominence = 0.0;                 // non-markovianity
  PolarizationModel polarization;              // markov-transition
  GridSpec nm_window{0.0, 1000.0, 10.0};       // D(t) window for N(B)
  std::optional<SignalModel> signal;           // appends count columns
  bool noisy_counts = false;
  std::uint64_t seed = 1;
  std::string seq_name;                        // run-seq
  std::optional<DslDocument> document;         // run-seq / named spectra
  std::string input_path;                      // fit: CSV of t_ns,trace_distance
  std::string out_base = "result";             // writes <base>.csv / <base>.json
  OutputFormat format = OutputFormat::Both;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json extras;       // per-experiment scalars/structures
  nlohmann::json config_echo;  // full provenance
};

// Compute only (no file I/O).
ExperimentResult compute_experiment(const ExperimentConfig& cfg);

// Compute and write per cfg.out_base / cfg.format; returns the result.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Bit-stable CSV: header row, '\n' endings, 12 significant digits.
void emit_plot_data(const ExperimentResult& result, const std::string& path);

void emit_json(const ExperimentResult& result, const std::string& path);

std::string to_csv_string(const ExperimentResult& result);
nlohmann::json to_json(const ExperimentResult& result);

// Parse a two-column (t_ns, value) CSV written by emit_plot_data.
TraceDistanceSeries read_series_csv(const std::string& path);

}  // namespace spinbath
