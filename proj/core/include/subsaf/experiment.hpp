#pragma once

#include <string>
#include <vector>

#include "subsaf/config.hpp"

namespace subsaf {

/// Per-sample metric traces, averaged across Monte-Carlo runs in the linear
/// domain before dB conversion.
struct MetricSeries {
  std::vector<double> msd_db;
  std::vector<double> erle_db;  // empty unless ERLE was recorded; NaN = undefined yet
  // run diagnostics (GR-SAF engines only)
  double max_theoretical_decrement = -1e300;
  double min_phi = 1e300;
  bool has_diagnostics = false;
};

/// Runs the configured experiment. Run r uses seed = cfg.seed + r; results
/// are averaged in the linear domain in run-index order. Writes the CSV to
/// cfg.output when set (header: sample,msd_db[,erle_db]).
MetricSeries run_experiment(const ExperimentConfig& cfg);

/// CSV emission, exposed separately so callers can redirect the output.
void write_csv(const MetricSeries& series, const std::string& path);

}  // namespace subsaf
