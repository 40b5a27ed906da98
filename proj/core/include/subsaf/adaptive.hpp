#pragma once

#include <memory>
#include <vector>

#include "subsaf/robustness.hpp"
#include "subsaf/tick.hpp"

namespace subsaf {

/// Covariance propagation of the weight-error matrix.
///  diagonal - the default O(M) engine (off-diagonals forced to zero)
///  dense    - full matrix recursion, O(M^2), for small-M comparison runs
///  scalar   - all diagonal entries tied together, the variable-regularization
///             reduction used by the cross-check oracle
enum class CovarianceMode { diagonal, dense, scalar };

struct GrSafOptions {
  int n_subbands = 4;
  int filter_len = 128;
  double gamma = 0.95;    // weight-uncertainty smoothing
  double varrho = 2.0;    // subband statistics smoothing: lambda = 1 - 1/(varrho*M)
  double eps1 = 1.0;      // phi(0) = eps1/M
  double eps2 = 1e-5;     // division guard in the noise-variance estimate
  double phi_floor = 1e-12;
  CovarianceMode covariance = CovarianceMode::diagonal;
  bool track_max_avg = true;  // max-with-average amendment on the uncertainty
  bool freeze_cw = false;     // force C_w = 0 (oracle-equivalence runs)
};

/// Full state of the GR-SAF engine: weights, diagonal weight-error covariance,
/// per-coefficient uncertainty, and per-subband signal statistics.
struct GrSafState {
  GrSafOptions opts;
  std::vector<double> w;          // current weight estimate
  std::vector<double> prev_w;     // weights after the previous tick's update
  std::vector<double> phi_diag;   // diag of Phi-bar (diagonal/scalar modes)
  std::vector<double> phi_dense;  // row-major M*M (dense mode only)
  std::vector<double> cw_diag;    // sigma_hat^2_{wm}
  std::vector<double> sigma_e2;   // per subband
  std::vector<double> sigma_u2;
  std::vector<std::vector<double>> r_vec;
  std::vector<double> sigma_nu2;
  long tick_count = 0;

  static GrSafState init(const GrSafOptions& opts);
};

struct StepResult {
  std::vector<double> errors;  // e_{i,D}
  std::vector<double> q;       // scaling parameters
};

/// One GR-SAF tick. The rule supplies q; for the modified Huber rule the
/// per-subband threshold states must be passed (thresholds updated first,
/// with the raw squared error). Throws on non-finite inputs or dimension
/// mismatch; the state is left untouched in that case.
StepResult grsaf_step(GrSafState& st, const SubbandTick& tick, const ScalingRule& rule,
                      std::vector<ThresholdState>* thresholds);

/// Predicted per-tick MSD decrement (diagnostic): always <= 0, strictly
/// negative when any q_i > 0 with a nonzero regressor.
double theoretical_msd_decrement(const GrSafState& st, const SubbandTick& tick,
                                 const std::vector<double>& q);

struct MnsafOptions {
  int n_subbands = 4;
  int filter_len = 128;
  double mu = 1.0;
  double reg = 0.0;           // fixed regularization delta
  bool silence_guard = false; // delta = 20*sigma_hat^2_{u,i}/N instead
  double varrho = 2.0;        // smoothing for the silence-guard power tracker
};

struct MnsafState {
  MnsafOptions opts;
  std::vector<double> w;
  std::vector<double> sigma_u2;  // per subband, silence guard only
  long tick_count = 0;

  static MnsafState init(const MnsafOptions& opts);
};

/// One M-NSAF tick; with the rule forced to q = 1 this is plain NSAF.
StepResult mnsaf_step(MnsafState& st, const SubbandTick& tick, const ScalingRule& rule,
                      std::vector<ThresholdState>* thresholds);

/// 10*log10 ||w_true - w||^2, floored at -320 dB.
double msd_db(const std::vector<double>& w, const std::vector<double>& w_true);

/// Uniform engine surface so the echo-cancellation loop can drive any of the
/// adaptive cores interchangeably.
class SubbandEngine {
 public:
  virtual ~SubbandEngine() = default;
  virtual StepResult step(const SubbandTick& tick) = 0;
  /// A double-talk freeze: no weight update, a zero entry pushed into each
  /// modified-Huber median window.
  virtual void notify_frozen_tick() = 0;
  virtual const std::vector<double>& weights() const = 0;
};

struct ThresholdParams {
  double tau = 2.0;
  int window_len = 20;
  double theta_override = -1.0;  // >= 0 replaces 1 - N/(tau*M)
};

class GrSafEngine : public SubbandEngine {
 public:
  GrSafEngine(GrSafOptions opts, ScalingRule rule, ThresholdParams thr);
  StepResult step(const SubbandTick& tick) override;
  void notify_frozen_tick() override;
  const std::vector<double>& weights() const override { return st_.w; }

  const GrSafState& state() const { return st_; }
  GrSafState& state() { return st_; }
  /// Largest theoretical MSD decrement and smallest phi entry seen so far.
  double max_decrement() const { return max_decrement_; }
  double min_phi() const { return min_phi_; }

 private:
  GrSafState st_;
  ScalingRule rule_;
  std::vector<ThresholdState> thresholds_;
  double max_decrement_ = -1e300;
  double min_phi_ = 1e300;
};

class MnsafEngine : public SubbandEngine {
 public:
  MnsafEngine(MnsafOptions opts, ScalingRule rule, ThresholdParams thr);
  StepResult step(const SubbandTick& tick) override;
  void notify_frozen_tick() override;
  const std::vector<double>& weights() const override { return st_.w; }
  const MnsafState& state() const { return st_; }

 private:
  MnsafState st_;
  ScalingRule rule_;
  std::vector<ThresholdState> thresholds_;
};

}  // namespace subsaf
