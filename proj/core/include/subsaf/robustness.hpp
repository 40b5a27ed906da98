#pragma once

#include <cstddef>
#include <vector>

namespace subsaf {

enum class RobustVariant { none, modified_huber, correntropy };

/// Robust criterion producing the multiplicative gate q(e) in [0, 1].
/// `none` forces q = 1 (plain NSAF behaviour).
struct ScalingRule {
  RobustVariant variant = RobustVariant::modified_huber;
  double kappa = 2.576;       // confidence multiplier, modified Huber
  double kernel_width = 1.0;  // kappa_sigma, correntropy
};

/// Per-subband impulse-free error-variance tracker (modified Huber only).
/// Threshold recursion: sigma^2 <- theta*sigma^2 + c_sigma*(1-theta)*median(window),
/// with theta forced to 0 at the first update.
class ThresholdState {
 public:
  ThresholdState(int n_subbands_total, int filter_len, double tau, int window_len,
                 double theta_override = -1.0);

  /// Pushes e^2 into the median window and returns the threshold xi = kappa*sigma.
  double update(double e, double kappa);

  /// Pushes a zero entry instead of e^2; used while a double-talk detector
  /// holds adaptation frozen.
  void push_frozen();

  double sigma_e2() const { return sigma_e2_; }
  double theta() const { return theta_; }
  double c_sigma() const { return c_sigma_; }

 private:
  double median_of_window() const;
  void push(double v);

  std::vector<double> window_;  // ring buffer of squared errors, a_{e,i}
  std::size_t head_ = 0;
  std::size_t count_ = 0;  // entries pushed so far, saturates at N_w
  double sigma_e2_ = 0.0;
  double theta_;
  double c_sigma_;
  bool first_ = true;
};

/// q(e) per the selected robust criterion; xi is used only by modified Huber.
double scale(const ScalingRule& rule, double e, double xi);

/// rho(q) = 2q - q^2, the probability-update factor of the covariance recursion.
double rho(double q);

}  // namespace subsaf
