#include "subsaf/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace subsaf {
namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Kaiser-windowed sinc lowpass, cutoff in rad/sample, unity DC gain.
std::vector<double> kaiser_lowpass(int length, double cutoff, double beta) {
  const double mid = 0.5 * (length - 1);
  const double i0b = std::cyl_bessel_i(0.0, beta);
  std::vector<double> h(length);
  double sum = 0.0;
  for (int l = 0; l < length; ++l) {
    const double x = (l - mid) / mid;  // in [-1, 1]
    const double win = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - x * x))) / i0b;
    h[l] = (cutoff / M_PI) * sinc(cutoff * (l - mid)) * win;
    sum += h[l];
  }
  for (double& v : h) v /= sum;
  return h;
}

}  // namespace

double measure_stopband_atten_db(const std::vector<double>& coeffs, int n_subbands,
                                 int n_freq) {
  if (coeffs.empty()) throw std::invalid_argument("empty filter");
  const double stop_edge = M_PI / n_subbands * 1.1;  // pi/N + 0.1*pi/N
  double peak = 0.0, stop_max = 0.0;
  for (int f = 0; f < n_freq; ++f) {
    const double w = M_PI * f / (n_freq - 1);
    double re = 0.0, im = 0.0;
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
      re += coeffs[l] * std::cos(w * static_cast<double>(l));
      im -= coeffs[l] * std::sin(w * static_cast<double>(l));
    }
    const double mag = std::hypot(re, im);
    peak = std::max(peak, mag);
    if (w >= stop_edge) stop_max = std::max(stop_max, mag);
  }
  if (stop_max == 0.0) return 320.0;
  return 20.0 * std::log10(peak / stop_max);
}

PrototypeFilter design_prototype(int n_subbands, int length, double target_atten_db) {
  if (n_subbands < 1) throw std::invalid_argument("n_subbands must be >= 1");
  if (length < n_subbands) throw std::invalid_argument("prototype length < n_subbands");
  if (target_atten_db <= 0) throw std::invalid_argument("target attenuation must be > 0");

  if (n_subbands == 1 && length == 1) {
    // Degenerate one-subband bank: the modulated tap is exactly 1.
    return PrototypeFilter{{1.0 / std::sqrt(2.0)}, 1, 320.0};
  }

  const double cutoff = M_PI / (2.0 * n_subbands);
  auto atten = [&](double beta) {
    return measure_stopband_atten_db(kaiser_lowpass(length, cutoff, beta), n_subbands);
  };

  // Coarse scan, then golden-section refinement around the best sample. The
  // attenuation-vs-beta curve has small ripples, so the scan picks the basin.
  double best_beta = 2.0, best_a = -1.0;
  for (double beta = 1.0; beta <= 16.0; beta += 0.25) {
    const double a = atten(beta);
    if (a > best_a) {
      best_a = a;
      best_beta = beta;
    }
  }
  double lo = std::max(0.5, best_beta - 0.25), hi = best_beta + 0.25;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = atten(x1), f2 = atten(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = atten(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = atten(x1);
    }
  }
  if (f1 > best_a) {
    best_a = f1;
    best_beta = x1;
  }
  if (f2 > best_a) {
    best_a = f2;
    best_beta = x2;
  }

  if (best_a < target_atten_db) {
    throw std::runtime_error("prototype design: target " + std::to_string(target_atten_db) +
                             " dB unreachable at length " + std::to_string(length) +
                             "; best achieved " + std::to_string(best_a) + " dB");
  }
  return PrototypeFilter{kaiser_lowpass(length, cutoff, best_beta), n_subbands, best_a};
}

PrototypeFilter load_prototype(const std::string& path, int n_subbands) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open prototype file: " + path);
  std::vector<double> coeffs;
  double v;
  while (in >> v) coeffs.push_back(v);
  if (coeffs.empty()) throw std::runtime_error("prototype file is empty: " + path);
  PrototypeFilter p{std::move(coeffs), n_subbands, 0.0};
  p.stopband_atten_db = measure_stopband_atten_db(p.coeffs, n_subbands);
  return p;
}

AnalysisBank modulate(const PrototypeFilter& prototype) {
  const int n = prototype.n_subbands;
  const int j = static_cast<int>(prototype.length());
  if (n < 1 || j < 1) throw std::invalid_argument("invalid prototype");
  AnalysisBank bank;
  bank.prototype = prototype;
  bank.filters.resize(n);
  for (int i = 0; i < n; ++i) {
    bank.filters[i].resize(j);
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    for (int l = 0; l < j; ++l) {
      const double phase =
          (2.0 * i + 1.0) * (2.0 * l - (j - 1.0)) * M_PI / (4.0 * n) + sign * M_PI / 4.0;
      bank.filters[i][l] = 2.0 * prototype.coeffs[l] * std::cos(phase);
    }
  }
  return bank;
}

SubbandDecomposer::SubbandDecomposer(AnalysisBank bank, int filter_len)
    : bank_(std::move(bank)), filter_len_(filter_len) {
  if (filter_len_ < 1) throw std::invalid_argument("filter_len must be >= 1");
  const std::size_t j = bank_.filter_length();
  u_line_.assign(j, 0.0);
  d_line_.assign(j, 0.0);
  u_reg_.assign(bank_.n_subbands(), std::vector<double>(filter_len_, 0.0));
}

void SubbandDecomposer::push_sample(double u, double d) {
  std::rotate(u_line_.rbegin(), u_line_.rbegin() + 1, u_line_.rend());
  std::rotate(d_line_.rbegin(), d_line_.rbegin() + 1, d_line_.rend());
  u_line_[0] = u;
  d_line_[0] = d;
  for (int i = 0; i < bank_.n_subbands(); ++i) {
    const auto& h = bank_.filters[i];
    double y = 0.0;
    for (std::size_t l = 0; l < h.size(); ++l) y += h[l] * u_line_[l];
    auto& reg = u_reg_[i];
    std::rotate(reg.rbegin(), reg.rbegin() + 1, reg.rend());
    reg[0] = y;
  }
}

SubbandTick SubbandDecomposer::step(const std::vector<double>& u_block,
                                    const std::vector<double>& d_block) {
  const int n = bank_.n_subbands();
  if (static_cast<int>(u_block.size()) != n || static_cast<int>(d_block.size()) != n)
    throw std::invalid_argument("block size must equal the subband count");
  for (int s = 0; s < n; ++s) push_sample(u_block[s], d_block[s]);

  SubbandTick tick;
  tick.regressors = u_reg_;
  tick.desired.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& h = bank_.filters[i];
    double y = 0.0;
    for (std::size_t l = 0; l < h.size(); ++l) y += h[l] * d_line_[l];
    tick.desired[i] = y;
  }
  return tick;
}

}  // namespace subsaf
