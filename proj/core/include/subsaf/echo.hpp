#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "subsaf/adaptive.hpp"
#include "subsaf/filterbank.hpp"

namespace subsaf {

/// Geigel detector: double-talk is declared when
///   d(kN) >= T_c * max(|u(kN)|, ..., |u(kN-M+1)|),
/// after which adaptation freezes for the hangover period.
struct GeigelDtd {
  double t_c = 0.45;
  int t_hold = 256;  // hangover, counted in fullband samples (rounded up to blocks)
  int hold_counter = 0;
};

/// Smoothed-power ERLE tracker: avg <- 0.999*avg + 0.001*x^2.
class ErleTracker {
 public:
  /// Returns ERLE in dB once the error power is nonzero; +inf is capped at 320.
  std::optional<double> update(double d, double e);

  double avg_d2() const { return avg_d2_; }
  double avg_e2() const { return avg_e2_; }

 private:
  double avg_d2_ = 0.0;
  double avg_e2_ = 0.0;
};

struct BlockResult {
  std::vector<double> fullband_errors;  // e(n) for the N samples of the block
  std::vector<double> subband_errors;   // empty when the tick was frozen
  std::vector<double> q;
  bool dtd_frozen = false;
};

/// Delayless loop: subband adaptation plus an auxiliary fullband error path.
/// The fullband weights are a copy of the subband engine's weights refreshed
/// once per block of N input samples.
class EchoCanceler {
 public:
  EchoCanceler(AnalysisBank bank, std::unique_ptr<SubbandEngine> engine,
               std::optional<GeigelDtd> dtd = std::nullopt);

  /// Feeds one block of N fullband samples. The adaptive step runs at the
  /// decimated tick unless the detector declares double-talk (or a hold is
  /// pending), in which case the engine is frozen and its median windows
  /// receive zero entries.
  BlockResult process_block(const std::vector<double>& u_block,
                            const std::vector<double>& d_block);

  const std::vector<double>& copied_weights() const { return copied_w_; }
  const SubbandEngine& engine() const { return *engine_; }
  SubbandEngine& engine() { return *engine_; }
  int n_subbands() const { return decomposer_.n_subbands(); }

 private:
  SubbandDecomposer decomposer_;
  std::unique_ptr<SubbandEngine> engine_;
  std::optional<GeigelDtd> dtd_;
  std::vector<double> copied_w_;
  std::vector<double> u_window_;  // last M fullband samples, newest first
};

}  // namespace subsaf
