#include "subsaf/adaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace subsaf {
namespace {

void validate_tick(const SubbandTick& tick, int n, int m) {
  if (tick.n_subbands() != n || static_cast<int>(tick.desired.size()) != n)
    throw std::invalid_argument("tick subband count mismatch");
  for (const auto& reg : tick.regressors)
    if (static_cast<int>(reg.size()) != m)
      throw std::invalid_argument("tick regressor length mismatch");
  for (double d : tick.desired)
    if (!std::isfinite(d)) throw std::invalid_argument("non-finite desired sample");
  for (const auto& reg : tick.regressors)
    for (double u : reg)
      if (!std::isfinite(u)) throw std::invalid_argument("non-finite input sample");
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// q per rule, updating the MH threshold (raw squared error) first.
double gate(const ScalingRule& rule, std::vector<ThresholdState>* thresholds, int i,
            double e) {
  double xi = 0.0;
  if (rule.variant == RobustVariant::modified_huber) {
    if (thresholds == nullptr)
      throw std::invalid_argument("modified Huber rule requires threshold state");
    xi = (*thresholds)[i].update(e, rule.kappa);
  }
  return scale(rule, e, xi);
}

}  // namespace

GrSafState GrSafState::init(const GrSafOptions& opts) {
  if (opts.n_subbands < 1 || opts.filter_len < 1)
    throw std::invalid_argument("invalid GR-SAF dimensions");
  if (opts.eps1 < 1.0) throw std::invalid_argument("eps1 must be >= 1");
  GrSafState st;
  st.opts = opts;
  const int m = opts.filter_len;
  st.w.assign(m, 0.0);
  st.prev_w.assign(m, 0.0);
  st.phi_diag.assign(m, opts.eps1 / m);
  if (opts.covariance == CovarianceMode::dense) {
    st.phi_dense.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) st.phi_dense[static_cast<std::size_t>(i) * m + i] = opts.eps1 / m;
  }
  st.cw_diag.assign(m, 0.0);
  st.sigma_e2.assign(opts.n_subbands, 0.0);
  st.sigma_u2.assign(opts.n_subbands, 0.0);
  st.r_vec.assign(opts.n_subbands, std::vector<double>(m, 0.0));
  st.sigma_nu2.assign(opts.n_subbands, 0.0);
  return st;
}

StepResult grsaf_step(GrSafState& st, const SubbandTick& tick, const ScalingRule& rule,
                      std::vector<ThresholdState>* thresholds) {
  const int n = st.opts.n_subbands;
  const int m = st.opts.filter_len;
  validate_tick(tick, n, m);

  const double lambda = 1.0 - 1.0 / (st.opts.varrho * m);
  StepResult res;
  res.errors.resize(n);
  res.q.resize(n);

  std::vector<std::vector<double>> gains(n, std::vector<double>(m, 0.0));
  std::vector<double> delta_w(m, 0.0);

  for (int i = 0; i < n; ++i) {
    const auto& u = tick.regressors[i];
    const double e = tick.desired[i] - dot(u, st.w);
    const double q = gate(rule, thresholds, i, e);
    res.errors[i] = e;
    res.q[i] = q;

    st.sigma_e2[i] = lambda * st.sigma_e2[i] + (1.0 - lambda) * q * q * e * e;
    st.sigma_u2[i] = lambda * st.sigma_u2[i] + (1.0 - lambda) * u[0] * u[0];
    auto& r = st.r_vec[i];
    for (int j = 0; j < m; ++j) r[j] = lambda * r[j] + (1.0 - lambda) * q * u[j] * e;
    const double cand = st.sigma_e2[i] - dot(r, r) / (st.sigma_u2[i] + st.opts.eps2);
    if (cand > 0.0) st.sigma_nu2[i] = cand;

    auto& g = gains[i];
    switch (st.opts.covariance) {
      case CovarianceMode::diagonal: {
        double den = st.sigma_nu2[i];
        for (int j = 0; j < m; ++j) den += u[j] * u[j] * (st.phi_diag[j] + st.cw_diag[j]);
        for (int j = 0; j < m; ++j) g[j] = st.phi_diag[j] * u[j] / den;
        break;
      }
      case CovarianceMode::scalar: {
        const double phi = st.phi_diag[0];
        double u2 = dot(u, u);
        double cw_term = 0.0;
        for (int j = 0; j < m; ++j) cw_term += u[j] * u[j] * st.cw_diag[j];
        const double den = u2 + (cw_term + st.sigma_nu2[i]) / phi;
        for (int j = 0; j < m; ++j) g[j] = u[j] / den;
        break;
      }
      case CovarianceMode::dense: {
        std::vector<double> pu(m, 0.0);  // Phi * u
        for (int r2 = 0; r2 < m; ++r2) {
          const double* row = &st.phi_dense[static_cast<std::size_t>(r2) * m];
          double s = 0.0;
          for (int j = 0; j < m; ++j) s += row[j] * u[j];
          pu[r2] = s;
        }
        double den = dot(u, pu) + st.sigma_nu2[i];
        for (int j = 0; j < m; ++j) den += u[j] * u[j] * st.cw_diag[j];
        for (int j = 0; j < m; ++j) g[j] = pu[j] / den;
        break;
      }
    }
    for (int j = 0; j < m; ++j) delta_w[j] += q * g[j] * res.errors[i];
  }

  std::vector<double> w_new(m);
  for (int j = 0; j < m; ++j) w_new[j] = st.w[j] + delta_w[j];

  // the covariance shrink below must see the same C_w the gains were built
  // from, not the one refreshed for the next tick
  const std::vector<double> cw_old = st.cw_diag;

  if (!st.opts.freeze_cw) {
    double avg = 0.0;
    for (int j = 0; j < m; ++j) {
      const double d2 = delta_w[j] * delta_w[j];
      st.cw_diag[j] = st.opts.gamma * st.cw_diag[j] + (1.0 - st.opts.gamma) * d2;
      avg += d2;
    }
    avg /= m;
    if (st.opts.track_max_avg)
      for (int j = 0; j < m; ++j) st.cw_diag[j] = std::max(st.cw_diag[j], avg);
  }

  switch (st.opts.covariance) {
    case CovarianceMode::diagonal: {
      for (int j = 0; j < m; ++j) {
        double shrink = 0.0;
        for (int i = 0; i < n; ++i)
          shrink += rho(res.q[i]) * gains[i][j] * tick.regressors[i][j];
        const double v = st.phi_diag[j] * (1.0 - shrink) + st.cw_diag[j];
        st.phi_diag[j] = std::max(v, st.opts.phi_floor);
      }
      break;
    }
    case CovarianceMode::scalar: {
      const double phi = st.phi_diag[0];
      double phi_new = phi;
      for (int i = 0; i < n; ++i) {
        const auto& u = tick.regressors[i];
        const double den = dot(u, u) + st.sigma_nu2[i] / phi;
        phi_new -= rho(res.q[i]) * st.sigma_u2[i] * phi / den;
      }
      double cw_avg = 0.0;
      for (int j = 0; j < m; ++j) cw_avg += st.cw_diag[j];
      phi_new += cw_avg / m;
      phi_new = std::max(phi_new, st.opts.phi_floor);
      for (int j = 0; j < m; ++j) st.phi_diag[j] = phi_new;
      break;
    }
    case CovarianceMode::dense: {
      // Per-subband rank-one shrink applied sequentially; each step subtracts
      // (Phi u)(Phi u)^T / den with den >= u^T Phi u, which keeps the matrix
      // positive semidefinite (the summed form does not).
      std::vector<double> pu(m);
      for (int i = 0; i < n; ++i) {
        const auto& u = tick.regressors[i];
        for (int r2 = 0; r2 < m; ++r2) {
          const double* row = &st.phi_dense[static_cast<std::size_t>(r2) * m];
          double s = 0.0;
          for (int c = 0; c < m; ++c) s += row[c] * u[c];
          pu[r2] = s;
        }
        double den = dot(u, pu) + st.sigma_nu2[i];
        for (int j = 0; j < m; ++j) den += u[j] * u[j] * cw_old[j];
        if (den <= 0.0) continue;
        const double f = rho(res.q[i]) / den;
        for (int r2 = 0; r2 < m; ++r2) {
          const double fr = f * pu[r2];
          double* row = &st.phi_dense[static_cast<std::size_t>(r2) * m];
          for (int c = 0; c < m; ++c) row[c] -= fr * pu[c];
        }
      }
      for (int j = 0; j < m; ++j)
        st.phi_dense[static_cast<std::size_t>(j) * m + j] += st.cw_diag[j];
      for (int r2 = 0; r2 < m; ++r2)
        for (int c = r2 + 1; c < m; ++c) {
          const std::size_t a = static_cast<std::size_t>(r2) * m + c;
          const std::size_t b = static_cast<std::size_t>(c) * m + r2;
          const double s = 0.5 * (st.phi_dense[a] + st.phi_dense[b]);
          st.phi_dense[a] = st.phi_dense[b] = s;
        }
      for (int j = 0; j < m; ++j) {
        auto& d = st.phi_dense[static_cast<std::size_t>(j) * m + j];
        d = std::max(d, st.opts.phi_floor);
        st.phi_diag[j] = d;
      }
      break;
    }
  }

  st.prev_w = st.w;
  st.w = std::move(w_new);
  ++st.tick_count;
  return res;
}

double theoretical_msd_decrement(const GrSafState& st, const SubbandTick& tick,
                                 const std::vector<double>& q) {
  const int n = st.opts.n_subbands;
  const int m = st.opts.filter_len;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& u = tick.regressors[i];
    double num = 0.0, den = st.sigma_nu2[i];
    for (int j = 0; j < m; ++j) {
      const double u2 = u[j] * u[j];
      num += u2 * st.phi_diag[j] * st.phi_diag[j];
      den += u2 * st.phi_diag[j];
    }
    if (den > 0.0) total -= rho(q[i]) * num / den;
  }
  return total;
}

MnsafState MnsafState::init(const MnsafOptions& opts) {
  if (opts.n_subbands < 1 || opts.filter_len < 1)
    throw std::invalid_argument("invalid M-NSAF dimensions");
  if (opts.mu <= 0.0 || opts.mu >= 2.0)
    throw std::invalid_argument("step size must be in (0, 2)");
  if (opts.reg < 0.0) throw std::invalid_argument("regularization must be >= 0");
  MnsafState st;
  st.opts = opts;
  st.w.assign(opts.filter_len, 0.0);
  st.sigma_u2.assign(opts.n_subbands, 0.0);
  return st;
}

StepResult mnsaf_step(MnsafState& st, const SubbandTick& tick, const ScalingRule& rule,
                      std::vector<ThresholdState>* thresholds) {
  const int n = st.opts.n_subbands;
  const int m = st.opts.filter_len;
  validate_tick(tick, n, m);
  const double lambda = 1.0 - 1.0 / (st.opts.varrho * m);

  StepResult res;
  res.errors.resize(n);
  res.q.resize(n);
  std::vector<double> delta_w(m, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto& u = tick.regressors[i];
    const double e = tick.desired[i] - dot(u, st.w);
    const double q = gate(rule, thresholds, i, e);
    res.errors[i] = e;
    res.q[i] = q;
    st.sigma_u2[i] = lambda * st.sigma_u2[i] + (1.0 - lambda) * u[0] * u[0];
    const double delta =
        st.opts.silence_guard ? 20.0 * st.sigma_u2[i] / n : st.opts.reg;
    const double den = dot(u, u) + delta;
    if (den > 0.0) {
      const double f = st.opts.mu * q * e / den;
      for (int j = 0; j < m; ++j) delta_w[j] += f * u[j];
    }
  }
  for (int j = 0; j < m; ++j) st.w[j] += delta_w[j];
  ++st.tick_count;
  return res;
}

double msd_db(const std::vector<double>& w, const std::vector<double>& w_true) {
  if (w.size() != w_true.size()) throw std::invalid_argument("weight length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = w_true[i] - w[i];
    s += d * d;
  }
  const double db = 10.0 * std::log10(s);
  return std::isfinite(db) ? std::max(db, -320.0) : -320.0;
}

GrSafEngine::GrSafEngine(GrSafOptions opts, ScalingRule rule, ThresholdParams thr)
    : st_(GrSafState::init(opts)), rule_(rule) {
  if (rule_.variant == RobustVariant::modified_huber)
    for (int i = 0; i < opts.n_subbands; ++i)
      thresholds_.emplace_back(opts.n_subbands, opts.filter_len, thr.tau, thr.window_len,
                               thr.theta_override);
}

StepResult GrSafEngine::step(const SubbandTick& tick) {
  StepResult res = grsaf_step(st_, tick, rule_, thresholds_.empty() ? nullptr : &thresholds_);
  max_decrement_ = std::max(max_decrement_, theoretical_msd_decrement(st_, tick, res.q));
  for (double p : st_.phi_diag) min_phi_ = std::min(min_phi_, p);
  return res;
}

void GrSafEngine::notify_frozen_tick() {
  for (auto& t : thresholds_) t.push_frozen();
}

MnsafEngine::MnsafEngine(MnsafOptions opts, ScalingRule rule, ThresholdParams thr)
    : st_(MnsafState::init(opts)), rule_(rule) {
  if (rule_.variant == RobustVariant::modified_huber)
    for (int i = 0; i < opts.n_subbands; ++i)
      thresholds_.emplace_back(opts.n_subbands, opts.filter_len, thr.tau, thr.window_len,
                               thr.theta_override);
}

StepResult MnsafEngine::step(const SubbandTick& tick) {
  return mnsaf_step(st_, tick, rule_, thresholds_.empty() ? nullptr : &thresholds_);
}

void MnsafEngine::notify_frozen_tick() {
  for (auto& t : thresholds_) t.push_frozen();
}

}  // namespace subsaf
