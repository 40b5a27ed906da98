#include "subsaf/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subsaf {

ThresholdState::ThresholdState(int n_subbands_total, int filter_len, double tau,
                               int window_len, double theta_override) {
  if (window_len < 2) throw std::invalid_argument("window length must be >= 2");
  if (tau < 1.0) throw std::invalid_argument("tau must be >= 1");
  window_.assign(static_cast<std::size_t>(window_len), 0.0);
  theta_ = theta_override >= 0.0
               ? theta_override
               : 1.0 - static_cast<double>(n_subbands_total) / (tau * filter_len);
  c_sigma_ = 1.483 * (1.0 + 5.0 / (window_len - 1));
}

void ThresholdState::push(double v) {
  window_[head_] = v;
  head_ = (head_ + 1) % window_.size();
  count_ = std::min(count_ + 1, window_.size());
}

double ThresholdState::median_of_window() const {
  // Until the window is full only the entries actually pushed participate;
  // the zero pre-fill would otherwise drag the startup threshold to zero.
  std::vector<double> v;
  v.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) v.push_back(window_[i]);
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + mid);
    m = 0.5 * (m + lower);
  }
  return m;
}

double ThresholdState::update(double e, double kappa) {
  push(e * e);
  const double med = median_of_window();
  const double th = first_ ? 0.0 : theta_;
  first_ = false;
  sigma_e2_ = th * sigma_e2_ + c_sigma_ * (1.0 - th) * med;
  return kappa * std::sqrt(sigma_e2_);
}

void ThresholdState::push_frozen() {
  push(0.0);
  const double med = median_of_window();
  const double th = first_ ? 0.0 : theta_;
  first_ = false;
  sigma_e2_ = th * sigma_e2_ + c_sigma_ * (1.0 - th) * med;
}

double scale(const ScalingRule& rule, double e, double xi) {
  switch (rule.variant) {
    case RobustVariant::none:
      return 1.0;
    case RobustVariant::modified_huber:
      return std::abs(e) < xi ? 1.0 : 0.0;
    case RobustVariant::correntropy:
      return std::exp(-e * e / (2.0 * rule.kernel_width * rule.kernel_width));
  }
  throw std::logic_error("unknown scaling variant");
}

double rho(double q) { return 2.0 * q - q * q; }

}  // namespace subsaf
