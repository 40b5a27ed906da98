#include "subsaf/signals.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include "subsaf/rng.hpp"

namespace subsaf {

std::vector<double> gen_ar1(double pole, std::size_t n, std::uint64_t seed) {
  if (std::abs(pole) >= 1.0) throw std::invalid_argument("AR(1) pole must satisfy |pole| < 1");
  if (n == 0) throw std::invalid_argument("sample count must be > 0");
  Rng rng(seed, /*stream=*/1);
  std::vector<double> x(n);
  double prev = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    prev = pole * prev + rng.gaussian();
    x[t] = prev;
  }
  return x;
}

std::vector<double> gen_noise(const NoiseSpec& spec, double system_output_power,
                              std::size_t n, std::uint64_t seed) {
  if (system_output_power <= 0.0) throw std::invalid_argument("system output power must be > 0");
  if (n == 0) throw std::invalid_argument("sample count must be > 0");
  std::vector<double> v(n);
  if (spec.kind == NoiseKind::alpha_stable) {
    if (spec.alpha <= 0.0 || spec.alpha > 2.0) throw std::invalid_argument("alpha must be in (0, 2]");
    if (spec.dispersion <= 0.0) throw std::invalid_argument("dispersion must be > 0");
    Rng rng(seed, /*stream=*/2);
    for (auto& s : v) s = rng.alpha_stable(spec.alpha, spec.dispersion);
    return v;
  }
  const double sigma_g = std::sqrt(system_output_power * std::pow(10.0, -spec.snr_db / 10.0));
  Rng rng(seed, /*stream=*/2);
  for (auto& s : v) s = sigma_g * rng.gaussian();
  if (spec.kind == NoiseKind::contaminated_gaussian && spec.p_r > 0.0) {
    if (spec.p_r > 1.0) throw std::invalid_argument("p_r must be in [0, 1]");
    const double sigma_eta = std::sqrt(spec.impulse_gain * system_output_power);
    Rng imp(seed, /*stream=*/3);
    for (auto& s : v)
      if (imp.uniform() < spec.p_r) s += sigma_eta * imp.gaussian();
  }
  return v;
}

std::vector<double> load_pcm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open PCM file: " + path);
  std::vector<double> out;
  char buf[2];
  while (in.read(buf, 2)) {
    const auto lo = static_cast<std::uint8_t>(buf[0]);
    const auto hi = static_cast<std::uint8_t>(buf[1]);
    const auto s = static_cast<std::int16_t>(static_cast<std::uint16_t>(lo) |
                                             (static_cast<std::uint16_t>(hi) << 8));
    out.push_back(static_cast<double>(s) / 32768.0);
  }
  if (out.empty()) throw std::runtime_error("PCM file is empty: " + path);
  return out;
}

std::vector<double> load_text_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file: " + path);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (out.empty()) throw std::runtime_error("sample file is empty or not parseable: " + path);
  return out;
}

std::vector<double> load_samples(const std::string& path) {
  auto ends_with = [&](const char* ext) {
    const std::string e(ext);
    return path.size() >= e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0;
  };
  std::vector<double> s = (ends_with(".pcm") || ends_with(".raw") || ends_with(".s16"))
                              ? load_pcm(path)
                              : load_text_samples(path);
  double peak = 0.0;
  for (double x : s) peak = std::max(peak, std::abs(x));
  if (peak > 1.0)
    for (double& x : s) x /= peak;
  return s;
}

std::vector<double> gen_speech_like(std::size_t n, std::uint64_t seed) {
  // AR(1) carrier with a slow random amplitude envelope and hard silence gaps.
  Rng env_rng(seed, /*stream=*/4);
  std::vector<double> x = gen_ar1(0.9, n == 0 ? 1 : n, seed);
  double env = 0.0, target = 0.0;
  std::size_t seg_left = 0;
  bool silent = false;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (seg_left == 0) {
      seg_left = 400 + static_cast<std::size_t>(env_rng.uniform() * 1600.0);
      silent = env_rng.uniform() < 0.3;
      target = silent ? 0.0 : 0.2 + env_rng.uniform();
    }
    --seg_left;
    env = 0.995 * env + 0.005 * target;
    x[t] *= env;
  }
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : x) v /= peak;
  return x;
}

std::vector<double> render_source(const SignalSource& src, std::size_t n,
                                  std::uint64_t seed) {
  switch (src.kind) {
    case SourceKind::ar1:
      return gen_ar1(src.pole, n, seed);
    case SourceKind::white:
      return gen_ar1(0.0, n, seed);
    case SourceKind::speech_like:
      return gen_speech_like(n, seed);
    case SourceKind::file: {
      std::vector<double> s = load_samples(src.path);
      s.resize(n, 0.0);  // truncate or zero-pad to the requested length
      return s;
    }
  }
  throw std::logic_error("unknown source kind");
}

double ar1_output_power(const std::vector<double>& w, double pole) {
  const double scale = 1.0 / (1.0 - pole * pole);
  const std::size_t m = w.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      row += std::pow(pole, static_cast<double>(i > j ? i - j : j - i)) * w[j];
    acc += w[i] * scale * row;
  }
  return acc;
}

}  // namespace subsaf
