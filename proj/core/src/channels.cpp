#include "subsaf/channels.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "subsaf/rng.hpp"
#include "subsaf/signals.hpp"

namespace subsaf {
namespace {

void normalize(std::vector<double>& h) {
  double e = 0.0;
  for (double v : h) e += v * v;
  if (e > 0.0) {
    const double s = 1.0 / std::sqrt(e);
    for (double& v : h) v *= s;
  }
}

// Few dominant taps after a flat delay, fast exponential decay.
std::vector<double> make_sparse(int len) {
  std::vector<double> h(len, 0.0);
  Rng rng(0x5eedc0de, 7);
  const int delay = len / 8;
  for (int i = 0; i < 12 && delay + i < len; ++i)
    h[delay + i] = rng.gaussian() * std::exp(-0.6 * i);
  normalize(h);
  return h;
}

// Noise-like taps with a slow decay so no short window dominates.
std::vector<double> make_dispersive(int len) {
  std::vector<double> h(len);
  Rng rng(0x5eedc0de, 11);
  for (int i = 0; i < len; ++i) h[i] = rng.gaussian() * std::exp(-0.012 * i);
  normalize(h);
  return h;
}

}  // namespace

std::vector<std::string> builtin_channel_names() {
  return {"sparse128", "dispersive128", "sparse512", "dispersive512"};
}

std::vector<double> builtin_channel(const std::string& name) {
  if (name == "sparse128") return make_sparse(128);
  if (name == "dispersive128") return make_dispersive(128);
  if (name == "sparse512") return make_sparse(512);
  if (name == "dispersive512") return make_dispersive(512);
  throw std::invalid_argument("unknown builtin channel: " + name);
}

std::vector<double> load_channel(const std::string& name_or_path, int filter_len) {
  if (filter_len < 1) throw std::invalid_argument("channel length must be >= 1");
  std::vector<double> h;
  bool builtin = false;
  for (const auto& n : builtin_channel_names())
    if (n == name_or_path) builtin = true;
  h = builtin ? builtin_channel(name_or_path) : load_text_samples(name_or_path);
  h.resize(static_cast<std::size_t>(filter_len), 0.0);
  return h;
}

}  // namespace subsaf
