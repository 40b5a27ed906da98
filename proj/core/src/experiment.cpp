#include "subsaf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "subsaf/channels.hpp"
#include "subsaf/echo.hpp"
#include "subsaf/filterbank.hpp"

namespace subsaf {
namespace {

struct RunTrace {
  std::vector<double> msd_lin;   // ||w_true - w||^2 per fullband sample
  std::vector<double> erle_lin;  // power ratio, NaN while undefined
  double max_dec = -1e300;
  double min_phi = 1e300;
  bool has_diag = false;
};

AnalysisBank build_bank(const ExperimentConfig& cfg) {
  PrototypeFilter proto;
  if (!cfg.prototype_file.empty()) {
    proto = load_prototype(cfg.prototype_file, cfg.n_subbands);
  } else {
    const int j = cfg.bank_length > 0 ? cfg.bank_length
                  : cfg.n_subbands == 1 ? 1
                                        : 8 * cfg.n_subbands + 1;
    proto = design_prototype(cfg.n_subbands, j, cfg.target_atten_db);
  }
  return modulate(proto);
}

std::unique_ptr<SubbandEngine> build_engine(const ExperimentConfig& cfg) {
  const ThresholdParams thr{cfg.tau, cfg.n_w, cfg.theta};
  switch (cfg.algorithm) {
    case Algorithm::nsaf: {
      MnsafOptions o;
      o.n_subbands = cfg.n_subbands;
      o.filter_len = cfg.filter_len;
      o.mu = cfg.mu;
      o.reg = cfg.reg;
      o.silence_guard = cfg.silence_guard;
      o.varrho = cfg.varrho;
      return std::make_unique<MnsafEngine>(o, ScalingRule{RobustVariant::none}, thr);
    }
    case Algorithm::mnsaf: {
      MnsafOptions o;
      o.n_subbands = cfg.n_subbands;
      o.filter_len = cfg.filter_len;
      o.mu = cfg.mu;
      o.reg = cfg.reg;
      o.silence_guard = cfg.silence_guard;
      o.varrho = cfg.varrho;
      return std::make_unique<MnsafEngine>(
          o, ScalingRule{RobustVariant::modified_huber, cfg.kappa}, thr);
    }
    case Algorithm::grsaf_mh:
    case Algorithm::grsaf_mcc: {
      GrSafOptions o;
      o.n_subbands = cfg.n_subbands;
      o.filter_len = cfg.filter_len;
      o.gamma = cfg.gamma;
      o.varrho = cfg.varrho;
      o.eps1 = cfg.eps1;
      o.eps2 = cfg.eps2;
      o.covariance = cfg.covariance;
      o.track_max_avg = cfg.track_max_avg;
      ScalingRule rule = cfg.algorithm == Algorithm::grsaf_mh
                             ? ScalingRule{RobustVariant::modified_huber, cfg.kappa}
                             : ScalingRule{RobustVariant::correntropy, cfg.kappa,
                                           cfg.kernel_width};
      return std::make_unique<GrSafEngine>(o, rule, thr);
    }
  }
  throw std::logic_error("unknown algorithm");
}

std::vector<double> build_near_end(const ExperimentConfig& cfg, std::size_t n,
                                   std::uint64_t seed, double sigma_d) {
  std::vector<double> z(n, 0.0);
  const auto& ne = cfg.near_end;
  if (ne.kind == NearEndKind::none) return z;
  std::vector<double> s;
  if (ne.kind == NearEndKind::file) {
    s = load_samples(ne.path);
    s.resize(n, 0.0);
  } else {
    s = gen_speech_like(n, seed + 0xabcdef);
  }
  for (std::size_t t = 0; t < n; ++t) {
    double gate = 1.0;
    if (ne.kind == NearEndKind::bursts) {
      const long tl = static_cast<long>(t);
      gate = 0.0;
      if (tl >= ne.burst_start && ne.burst_period > 0 &&
          (tl - ne.burst_start) % ne.burst_period < ne.burst_len)
        gate = 1.0;
    }
    z[t] = ne.amplitude * sigma_d * gate * s[t];
  }
  return z;
}

RunTrace single_run(const ExperimentConfig& cfg, const AnalysisBank& bank, int run_index) {
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(run_index);
  const int n = cfg.n_subbands;
  const int m = cfg.filter_len;
  const long blocks = cfg.total_samples / n;
  const long total = blocks * n;

  const std::vector<double> channel = load_channel(cfg.channel, m);
  std::vector<double> u = render_source(cfg.input, static_cast<std::size_t>(total), seed);

  // Echo path output with the instantaneous true channel (sign flip applied).
  std::vector<double> d_bar(total, 0.0);
  {
    std::vector<double> line(m, 0.0);
    for (long t = 0; t < total; ++t) {
      for (int j = m - 1; j > 0; --j) line[j] = line[j - 1];
      line[0] = u[t];
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += channel[j] * line[j];
      const double sign = (cfg.flip_at >= 0 && t >= cfg.flip_at) ? -1.0 : 1.0;
      d_bar[t] = sign * acc;
    }
  }

  double sigma_d2;
  if (cfg.input.kind == SourceKind::ar1 || cfg.input.kind == SourceKind::white) {
    const double pole = cfg.input.kind == SourceKind::ar1 ? cfg.input.pole : 0.0;
    sigma_d2 = ar1_output_power(channel, pole);
  } else {
    sigma_d2 = 0.0;
    for (double v : d_bar) sigma_d2 += v * v;
    sigma_d2 /= static_cast<double>(total);
  }
  if (sigma_d2 <= 0.0) throw std::runtime_error("system output power is zero");

  const std::vector<double> noise =
      gen_noise(cfg.noise, sigma_d2, static_cast<std::size_t>(total), seed);
  const std::vector<double> z =
      build_near_end(cfg, static_cast<std::size_t>(total), seed, std::sqrt(sigma_d2));

  auto engine = build_engine(cfg);
  std::optional<GeigelDtd> dtd;
  if (cfg.dtd.enabled) dtd = GeigelDtd{cfg.dtd.t_c, cfg.dtd.t_hold, 0};
  EchoCanceler ec(bank, std::move(engine), dtd);

  const bool want_erle = cfg.record_erle || cfg.scenario != Scenario::sysid;
  ErleTracker erle;

  RunTrace tr;
  tr.msd_lin.resize(total);
  if (want_erle) tr.erle_lin.assign(total, std::numeric_limits<double>::quiet_NaN());

  std::vector<double> u_block(n), d_block(n);
  for (long b = 0; b < blocks; ++b) {
    for (int s = 0; s < n; ++s) {
      const long t = b * n + s;
      u_block[s] = u[t];
      d_block[s] = d_bar[t] + z[t] + noise[t];
    }
    const BlockResult res = ec.process_block(u_block, d_block);

    double cached = -1.0;
    double cached_sign = 0.0;
    const auto& w = ec.copied_weights();
    for (int s = 0; s < n; ++s) {
      const long t = b * n + s;
      const double sign = (cfg.flip_at >= 0 && t >= cfg.flip_at) ? -1.0 : 1.0;
      if (cached < 0.0 || sign != cached_sign) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
          const double diff = sign * channel[j] - w[j];
          acc += diff * diff;
        }
        cached = acc;
        cached_sign = sign;
      }
      if (!std::isfinite(cached))
        throw std::runtime_error("non-finite MSD at run " + std::to_string(run_index) +
                                 ", sample " + std::to_string(t));
      tr.msd_lin[t] = cached;
      if (want_erle) {
        const auto v = erle.update(d_block[s], res.fullband_errors[s]);
        if (v.has_value()) tr.erle_lin[t] = std::pow(10.0, *v / 10.0);
      }
    }
  }

  if (auto* g = dynamic_cast<const GrSafEngine*>(&ec.engine())) {
    tr.has_diag = true;
    tr.max_dec = g->max_decrement();
    tr.min_phi = g->min_phi();
  }
  return tr;
}

}  // namespace

MetricSeries run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const AnalysisBank bank = build_bank(cfg);

  std::vector<RunTrace> traces(cfg.runs);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(cfg.runs));
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (unsigned wi = 0; wi < workers; ++wi) {
    pool.emplace_back([&] {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= cfg.runs) return;
        try {
          traces[r] = single_run(cfg, bank, r);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  MetricSeries out;
  const std::size_t len = traces[0].msd_lin.size();
  out.msd_db.resize(len);
  const bool want_erle = !traces[0].erle_lin.empty();
  if (want_erle) out.erle_db.resize(len);

  for (std::size_t t = 0; t < len; ++t) {
    double acc = 0.0;
    for (const auto& tr : traces) acc += tr.msd_lin[t];
    acc /= static_cast<double>(cfg.runs);
    const double db = 10.0 * std::log10(acc);
    out.msd_db[t] = std::isfinite(db) ? std::max(db, -320.0) : -320.0;
    if (want_erle) {
      double eacc = 0.0;
      int cnt = 0;
      for (const auto& tr : traces)
        if (std::isfinite(tr.erle_lin[t])) {
          eacc += tr.erle_lin[t];
          ++cnt;
        }
      out.erle_db[t] = cnt == cfg.runs
                           ? std::min(10.0 * std::log10(eacc / cnt), 320.0)
                           : std::numeric_limits<double>::quiet_NaN();
    }
  }
  for (const auto& tr : traces)
    if (tr.has_diag) {
      out.has_diagnostics = true;
      out.max_theoretical_decrement = std::max(out.max_theoretical_decrement, tr.max_dec);
      out.min_phi = std::min(out.min_phi, tr.min_phi);
    }

  if (!cfg.output.empty()) write_csv(out, cfg.output);
  return out;
}

void write_csv(const MetricSeries& series, const std::string& path) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot open output file: " + path);
  const bool erle = !series.erle_db.empty();
  outf << (erle ? "sample,msd_db,erle_db\n" : "sample,msd_db\n");
  char buf[64];
  for (std::size_t t = 0; t < series.msd_db.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "%zu,%.10g", t, series.msd_db[t]);
    outf << buf;
    if (erle) {
      if (std::isfinite(series.erle_db[t])) {
        std::snprintf(buf, sizeof(buf), ",%.10g", series.erle_db[t]);
        outf << buf;
      } else {
        outf << ",";
      }
    }
    outf << "\n";
  }
}

}  // namespace subsaf
