#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "subsaf/adaptive.hpp"
#include "subsaf/signals.hpp"

namespace subsaf {

enum class Scenario { sysid, nec, aec };
enum class Algorithm { nsaf, mnsaf, grsaf_mh, grsaf_mcc };

enum class NearEndKind { none, bursts, speech_like, file };

struct NearEndSpec {
  NearEndKind kind = NearEndKind::none;
  std::string path;
  double amplitude = 1.0;
  long burst_start = 20000;
  long burst_len = 2000;
  long burst_period = 10000;
};

struct DtdConfig {
  bool enabled = false;
  double t_c = 0.45;
  int t_hold = 256;
};

/// Everything needed to reproduce one experiment; maps one-to-one onto the
/// sectioned key-value config file format.
struct ExperimentConfig {
  Scenario scenario = Scenario::sysid;
  Algorithm algorithm = Algorithm::grsaf_mh;
  int n_subbands = 4;
  int filter_len = 128;
  std::string channel = "sparse128";
  int runs = 20;
  long total_samples = 50000;
  std::uint64_t seed = 1;
  long flip_at = -1;  // sample index where w_true flips sign; < 0 disables
  std::string output;
  bool record_erle = false;
  std::string prototype_file;
  int bank_length = 0;  // 0 selects the 8N+1 preset
  double target_atten_db = 60.0;

  SignalSource input;
  NoiseSpec noise;
  NearEndSpec near_end;
  DtdConfig dtd;

  // algorithm parameters
  double mu = 1.0;
  double reg = 0.0;
  bool silence_guard = false;
  double kappa = 2.576;
  double kernel_width = 0.05;
  double tau = 2.0;
  int n_w = 20;
  double theta = -1.0;  // >= 0 overrides 1 - N/(tau*M)
  double gamma = 0.95;
  double varrho = 2.0;
  double eps1 = 1.0;
  double eps2 = 1e-5;
  CovarianceMode covariance = CovarianceMode::diagonal;
  bool track_max_avg = true;

  /// Throws std::invalid_argument with a descriptive message on bad values
  /// or missing referenced files.
  void validate() const;
};

/// Sectioned `key = value` text. Unknown keys are rejected.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

}  // namespace subsaf
