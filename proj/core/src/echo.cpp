#include "subsaf/echo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subsaf {

std::optional<double> ErleTracker::update(double d, double e) {
  if (!std::isfinite(d) || !std::isfinite(e))
    throw std::invalid_argument("non-finite ERLE input");
  avg_d2_ = 0.999 * avg_d2_ + 0.001 * d * d;
  avg_e2_ = 0.999 * avg_e2_ + 0.001 * e * e;
  if (avg_e2_ <= 0.0) return std::nullopt;
  return std::min(10.0 * std::log10(avg_d2_ / avg_e2_), 320.0);
}

EchoCanceler::EchoCanceler(AnalysisBank bank, std::unique_ptr<SubbandEngine> engine,
                           std::optional<GeigelDtd> dtd)
    : decomposer_(std::move(bank),
                  static_cast<int>(engine->weights().size())),
      engine_(std::move(engine)),
      dtd_(dtd),
      copied_w_(engine_->weights()),
      u_window_(copied_w_.size(), 0.0) {}

BlockResult EchoCanceler::process_block(const std::vector<double>& u_block,
                                        const std::vector<double>& d_block) {
  const int n = decomposer_.n_subbands();
  if (static_cast<int>(u_block.size()) != n || static_cast<int>(d_block.size()) != n)
    throw std::invalid_argument("block size must equal the subband count");

  BlockResult out;
  out.fullband_errors.resize(n);

  // Auxiliary fullband path: one fixed weight vector for the whole block.
  for (int s = 0; s < n; ++s) {
    std::rotate(u_window_.rbegin(), u_window_.rbegin() + 1, u_window_.rend());
    u_window_[0] = u_block[s];
    double y = 0.0;
    for (std::size_t j = 0; j < copied_w_.size(); ++j) y += copied_w_[j] * u_window_[j];
    out.fullband_errors[s] = d_block[s] - y;
  }

  SubbandTick tick = decomposer_.step(u_block, d_block);

  bool frozen = false;
  if (dtd_.has_value()) {
    if (dtd_->hold_counter > 0) {
      frozen = true;
      dtd_->hold_counter -= n;  // one evaluation per block, sample-scaled hold
      if (dtd_->hold_counter < 0) dtd_->hold_counter = 0;
    }
    // Detector runs at the decimated tick on d(kN) vs the input window
    // (which already includes the current sample).
    double umax = 0.0;
    for (double u : u_window_) umax = std::max(umax, std::abs(u));
    if (d_block.back() >= dtd_->t_c * umax) {
      frozen = true;
      dtd_->hold_counter = dtd_->t_hold;
    }
  }

  if (frozen) {
    engine_->notify_frozen_tick();
    out.dtd_frozen = true;
  } else {
    StepResult r = engine_->step(tick);
    out.subband_errors = std::move(r.errors);
    out.q = std::move(r.q);
  }
  copied_w_ = engine_->weights();
  return out;
}

}  // namespace subsaf
