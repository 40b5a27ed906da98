#include "subsaf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace subsaf {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    bad("key '" + key + "': not a number: '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    bad("key '" + key + "': not an integer: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad("key '" + key + "': not a boolean: '" + v + "'");
}

bool file_readable(const std::string& path) {
  std::ifstream in(path);
  return static_cast<bool>(in);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (runs < 1) bad("runs must be >= 1");
  if (filter_len < 1) bad("filter_len must be >= 1");
  if (n_subbands < 1) bad("n_subbands must be >= 1");
  if (total_samples < filter_len) bad("total_samples must be >= filter_len");
  if (std::abs(input.pole) >= 1.0) bad("input pole must satisfy |pole| < 1");
  if (noise.p_r < 0.0 || noise.p_r > 1.0) bad("p_r must be in [0, 1]");
  if (noise.alpha <= 0.0 || noise.alpha > 2.0) bad("alpha must be in (0, 2]");
  if (noise.dispersion <= 0.0) bad("dispersion must be > 0");
  if (!std::isfinite(noise.snr_db)) bad("snr_db must be finite");
  if (dtd.enabled && (dtd.t_c <= 0.0 || dtd.t_c >= 1.0)) bad("T_c must be in (0, 1)");
  if ((algorithm == Algorithm::nsaf || algorithm == Algorithm::mnsaf) &&
      (mu <= 0.0 || mu >= 2.0))
    bad("mu must be in (0, 2)");
  bool builtin = false;
  for (const char* n : {"sparse128", "dispersive128", "sparse512", "dispersive512"})
    if (channel == n) builtin = true;
  if (!builtin && !file_readable(channel)) bad("channel file not readable: " + channel);
  if (input.kind == SourceKind::file && !file_readable(input.path))
    bad("input file not readable: " + input.path);
  if (near_end.kind == NearEndKind::file && !file_readable(near_end.path))
    bad("near-end file not readable: " + near_end.path);
  if (!prototype_file.empty() && !file_readable(prototype_file))
    bad("prototype file not readable: " + prototype_file);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad("line " + std::to_string(lineno) + ": malformed section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;

    if (full == "experiment.scenario") {
      if (val == "sysid") cfg.scenario = Scenario::sysid;
      else if (val == "nec") cfg.scenario = Scenario::nec;
      else if (val == "aec") cfg.scenario = Scenario::aec;
      else bad("unknown scenario: " + val);
    } else if (full == "experiment.algorithm") {
      if (val == "nsaf") cfg.algorithm = Algorithm::nsaf;
      else if (val == "mnsaf") cfg.algorithm = Algorithm::mnsaf;
      else if (val == "grsaf_mh") cfg.algorithm = Algorithm::grsaf_mh;
      else if (val == "grsaf_mcc") cfg.algorithm = Algorithm::grsaf_mcc;
      else bad("unknown algorithm: " + val);
    } else if (full == "experiment.n_subbands") cfg.n_subbands = static_cast<int>(to_long(full, val));
    else if (full == "experiment.filter_len") cfg.filter_len = static_cast<int>(to_long(full, val));
    else if (full == "experiment.channel") cfg.channel = val;
    else if (full == "experiment.runs") cfg.runs = static_cast<int>(to_long(full, val));
    else if (full == "experiment.total_samples") cfg.total_samples = to_long(full, val);
    else if (full == "experiment.seed") cfg.seed = static_cast<std::uint64_t>(to_long(full, val));
    else if (full == "experiment.flip_at") cfg.flip_at = to_long(full, val);
    else if (full == "experiment.output") cfg.output = val;
    else if (full == "experiment.record_erle") cfg.record_erle = to_bool(full, val);
    else if (full == "experiment.prototype_file") cfg.prototype_file = val;
    else if (full == "experiment.bank_length") cfg.bank_length = static_cast<int>(to_long(full, val));
    else if (full == "experiment.target_atten_db") cfg.target_atten_db = to_double(full, val);
    else if (full == "input.kind") {
      if (val == "ar1") cfg.input.kind = SourceKind::ar1;
      else if (val == "white") cfg.input.kind = SourceKind::white;
      else if (val == "file") cfg.input.kind = SourceKind::file;
      else if (val == "speech_like") cfg.input.kind = SourceKind::speech_like;
      else bad("unknown input kind: " + val);
    } else if (full == "input.pole") cfg.input.pole = to_double(full, val);
    else if (full == "input.file") cfg.input.path = val;
    else if (full == "noise.kind") {
      if (val == "gaussian") cfg.noise.kind = NoiseKind::gaussian;
      else if (val == "contaminated_gaussian") cfg.noise.kind = NoiseKind::contaminated_gaussian;
      else if (val == "alpha_stable") cfg.noise.kind = NoiseKind::alpha_stable;
      else bad("unknown noise kind: " + val);
    } else if (full == "noise.snr_db") cfg.noise.snr_db = to_double(full, val);
    else if (full == "noise.p_r") cfg.noise.p_r = to_double(full, val);
    else if (full == "noise.impulse_gain") cfg.noise.impulse_gain = to_double(full, val);
    else if (full == "noise.alpha") cfg.noise.alpha = to_double(full, val);
    else if (full == "noise.dispersion") cfg.noise.dispersion = to_double(full, val);
    else if (full == "algorithm.mu") cfg.mu = to_double(full, val);
    else if (full == "algorithm.reg") cfg.reg = to_double(full, val);
    else if (full == "algorithm.silence_guard") cfg.silence_guard = to_bool(full, val);
    else if (full == "algorithm.kappa") cfg.kappa = to_double(full, val);
    else if (full == "algorithm.kernel_width") cfg.kernel_width = to_double(full, val);
    else if (full == "algorithm.tau") cfg.tau = to_double(full, val);
    else if (full == "algorithm.N_w") cfg.n_w = static_cast<int>(to_long(full, val));
    else if (full == "algorithm.theta") cfg.theta = to_double(full, val);
    else if (full == "algorithm.gamma") cfg.gamma = to_double(full, val);
    else if (full == "algorithm.varrho") cfg.varrho = to_double(full, val);
    else if (full == "algorithm.eps1") cfg.eps1 = to_double(full, val);
    else if (full == "algorithm.eps2") cfg.eps2 = to_double(full, val);
    else if (full == "algorithm.covariance") {
      if (val == "diagonal") cfg.covariance = CovarianceMode::diagonal;
      else if (val == "dense") cfg.covariance = CovarianceMode::dense;
      else if (val == "scalar") cfg.covariance = CovarianceMode::scalar;
      else bad("unknown covariance mode: " + val);
    } else if (full == "algorithm.track_max_avg") cfg.track_max_avg = to_bool(full, val);
    else if (full == "near_end.kind") {
      if (val == "none") cfg.near_end.kind = NearEndKind::none;
      else if (val == "bursts") cfg.near_end.kind = NearEndKind::bursts;
      else if (val == "speech_like") cfg.near_end.kind = NearEndKind::speech_like;
      else if (val == "file") cfg.near_end.kind = NearEndKind::file;
      else bad("unknown near-end kind: " + val);
    } else if (full == "near_end.file") cfg.near_end.path = val;
    else if (full == "near_end.amplitude") cfg.near_end.amplitude = to_double(full, val);
    else if (full == "near_end.burst_start") cfg.near_end.burst_start = to_long(full, val);
    else if (full == "near_end.burst_len") cfg.near_end.burst_len = to_long(full, val);
    else if (full == "near_end.burst_period") cfg.near_end.burst_period = to_long(full, val);
    else if (full == "dtd.enabled") cfg.dtd.enabled = to_bool(full, val);
    else if (full == "dtd.T_c") cfg.dtd.t_c = to_double(full, val);
    else if (full == "dtd.T_hold") cfg.dtd.t_hold = static_cast<int>(to_long(full, val));
    else bad("unknown key: " + full);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str());
  cfg.validate();
  return cfg;
}

}  // namespace subsaf
