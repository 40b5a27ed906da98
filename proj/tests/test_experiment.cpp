#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <doctest.h>
#include <stdexcept>

#include "subsaf/channels.hpp"
#include "subsaf/experiment.hpp"

using namespace subsaf;

namespace {

const char* channel_path() {
  static const char* path = [] {
    const char* p = "/tmp/subsaf_test_chan16.txt";
    FILE* f = fopen(p, "w");
    for (int j = 0; j < 16; ++j)
      fprintf(f, "%.17g\n", std::cos(0.7 * j) * std::exp(-0.2 * j));
    fclose(f);
    return p;
  }();
  return path;
}

ExperimentConfig base_cfg() {
  ExperimentConfig cfg;
  cfg.n_subbands = 2;
  cfg.filter_len = 16;
  cfg.channel = channel_path();
  cfg.runs = 2;
  cfg.total_samples = 4000;
  cfg.seed = 7;
  cfg.input.kind = SourceKind::ar1;
  cfg.input.pole = 0.9;
  cfg.noise.kind = NoiseKind::contaminated_gaussian;
  cfg.noise.snr_db = 30.0;
  cfg.noise.p_r = 0.001;
  return cfg;
}

}  // namespace

TEST_CASE("built-in channels are unit norm and distinct") {
  CHECK(builtin_channel_names().size() == 4);
  for (const auto& name : builtin_channel_names()) {
    const int m = name.find("512") != std::string::npos ? 512 : 128;
    const auto h = load_channel(name, m);
    REQUIRE(static_cast<int>(h.size()) == m);
    double norm = 0.0;
    for (double v : h) norm += v * v;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(load_channel("sparse128", 128) != load_channel("dispersive128", 128));
  CHECK_THROWS_AS(load_channel("/nonexistent/chan.txt", 16), std::runtime_error);
  CHECK_THROWS_AS(load_channel("sparse128", 0), std::invalid_argument);
}

TEST_CASE("channel shapes: sparse concentrates energy, dispersive spreads it") {
  const auto sp = builtin_channel("sparse128");
  std::vector<double> e;
  for (double v : sp) e.push_back(v * v);
  std::sort(e.rbegin(), e.rend());
  double top16 = 0.0;
  for (int j = 0; j < 16; ++j) top16 += e[j];
  CHECK(top16 >= 0.9);

  const auto di = builtin_channel("dispersive128");
  double win = 0.0;
  for (int j = 0; j < 16; ++j) win += di[j] * di[j];
  double worst = win;
  for (std::size_t j = 16; j < di.size(); ++j) {
    win += di[j] * di[j] - di[j - 16] * di[j - 16];
    worst = std::max(worst, win);
  }
  CHECK(worst <= 0.5);

  CHECK_THROWS_AS(builtin_channel("sparse64"), std::invalid_argument);
}

TEST_CASE("the misalignment trace converges") {
  const MetricSeries s = run_experiment(base_cfg());
  REQUIRE(s.msd_db.size() == 4000);
  CHECK(s.erle_db.empty());
  CHECK(s.msd_db.back() < s.msd_db.front() - 20.0);
  for (double v : s.msd_db) CHECK(std::isfinite(v));
  CHECK(s.has_diagnostics);
  CHECK(s.max_theoretical_decrement <= 0.0);
  CHECK(s.min_phi > 0.0);
}

TEST_CASE("runs are reproducible across invocations") {
  ExperimentConfig cfg = base_cfg();
  cfg.runs = 4;  // exercise the worker pool
  cfg.total_samples = 2000;
  const MetricSeries a = run_experiment(cfg);
  const MetricSeries b = run_experiment(cfg);
  CHECK(a.msd_db == b.msd_db);
  cfg.seed = 8;
  const MetricSeries c = run_experiment(cfg);
  CHECK(a.msd_db != c.msd_db);
}

TEST_CASE("a channel sign flip resets the misalignment") {
  ExperimentConfig cfg = base_cfg();
  cfg.flip_at = 2000;
  const MetricSeries s = run_experiment(cfg);
  CHECK(s.msd_db[2000] > s.msd_db[1999] + 10.0);
  CHECK(s.msd_db.back() < s.msd_db[2000] - 10.0);
}

TEST_CASE("ERLE trace is recorded on request") {
  ExperimentConfig cfg = base_cfg();
  cfg.record_erle = true;
  const MetricSeries s = run_experiment(cfg);
  REQUIRE(s.erle_db.size() == s.msd_db.size());
  CHECK(std::isfinite(s.erle_db.back()));
  CHECK(s.erle_db.back() > 10.0);
}

TEST_CASE("CSV output format") {
  ExperimentConfig cfg = base_cfg();
  cfg.total_samples = 1000;
  cfg.runs = 1;
  cfg.output = "/tmp/subsaf_test_out.csv";
  run_experiment(cfg);

  std::ifstream in(cfg.output);
  REQUIRE(static_cast<bool>(in));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "sample,msd_db");
  long rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string a, b;
    REQUIRE(std::getline(ls, a, ','));
    REQUIRE(std::getline(ls, b, ','));
    CHECK(std::stol(a) == rows);
    CHECK(std::isfinite(std::stod(b)));
    ++rows;
  }
  CHECK(rows == 1000);
}

TEST_CASE("CSV with ERLE column leaves undefined entries empty") {
  MetricSeries s;
  s.msd_db = {-1.5, -2.5};
  s.erle_db = {std::nan(""), 12.25};
  const char* path = "/tmp/subsaf_test_erle.csv";
  write_csv(s, path);
  std::ifstream in(path);
  std::string l0, l1, l2;
  std::getline(in, l0);
  std::getline(in, l1);
  std::getline(in, l2);
  CHECK(l0 == "sample,msd_db,erle_db");
  CHECK(l1 == "0,-1.5,");
  CHECK(l2 == "1,-2.5,12.25");
}

TEST_CASE("experiments reject invalid configurations") {
  ExperimentConfig cfg = base_cfg();
  cfg.runs = 0;
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  cfg = base_cfg();
  cfg.output = "/nonexistent/dir/out.csv";
  CHECK_THROWS_AS(run_experiment(cfg), std::runtime_error);
}

TEST_CASE("every algorithm choice runs end to end") {
  for (auto alg : {Algorithm::nsaf, Algorithm::mnsaf, Algorithm::grsaf_mh,
                   Algorithm::grsaf_mcc}) {
    ExperimentConfig cfg = base_cfg();
    cfg.algorithm = alg;
    cfg.runs = 1;
    cfg.total_samples = 1500;
    cfg.kernel_width = 0.5;
    const MetricSeries s = run_experiment(cfg);
    REQUIRE(s.msd_db.size() == 1500);
    CHECK(s.msd_db.back() < s.msd_db.front());
  }
}
