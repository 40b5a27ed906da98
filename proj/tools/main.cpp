// Simulation CLI for the robust subband adaptive filtering library.
//
//   subsaf run <config> [--seed S] [--runs R] [--out PATH]
//   subsaf design-bank --subbands N --length J [--atten DB] --out PATH
//   subsaf channels list
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "subsaf/channels.hpp"
#include "subsaf/config.hpp"
#include "subsaf/experiment.hpp"
#include "subsaf/filterbank.hpp"

namespace {

int cmd_run(const std::string& config_path, long seed, long runs, const std::string& out) {
  subsaf::ExperimentConfig cfg;
  try {
    cfg = subsaf::load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (runs > 0) cfg.runs = static_cast<int>(runs);
    if (!out.empty()) cfg.output = out;
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    const subsaf::MetricSeries series = subsaf::run_experiment(cfg);
    std::fprintf(stderr, "runs=%d samples=%zu final_msd=%.2f dB\n", cfg.runs,
                 series.msd_db.size(), series.msd_db.empty() ? 0.0 : series.msd_db.back());
    if (!cfg.output.empty()) std::fprintf(stderr, "wrote %s\n", cfg.output.c_str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_design_bank(int subbands, int length, double atten, const std::string& out) {
  try {
    const subsaf::PrototypeFilter proto =
        subsaf::design_prototype(subbands, length, atten);
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open output file: " + out);
    char buf[64];
    for (double c : proto.coeffs) {
      std::snprintf(buf, sizeof(buf), "%.17g\n", c);
      f << buf;
    }
    std::fprintf(stderr, "N=%d J=%d measured stopband attenuation %.2f dB -> %s\n",
                 subbands, length, proto.stopband_atten_db, out.c_str());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust subband adaptive filtering simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  std::string config_path, out;
  long seed = -1, runs = -1;
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--seed", seed, "override the base seed");
  run->add_option("--runs", runs, "override the Monte-Carlo run count");
  run->add_option("--out", out, "override the CSV output path");

  auto* design = app.add_subcommand("design-bank", "design a prototype filter");
  int subbands = 4, length = 33;
  double atten = 60.0;
  std::string bank_out;
  design->add_option("--subbands", subbands, "number of subbands N")->required();
  design->add_option("--length", length, "prototype length J")->required();
  design->add_option("--atten", atten, "target stopband attenuation in dB");
  design->add_option("--out", bank_out, "coefficient output file")->required();

  auto* channels = app.add_subcommand("channels", "builtin channel operations");
  auto* channels_list = channels->add_subcommand("list", "list builtin channels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (run->parsed()) return cmd_run(config_path, seed, runs, out);
  if (design->parsed()) return cmd_design_bank(subbands, length, atten, bank_out);
  if (channels->parsed() && channels_list->parsed()) {
    for (const auto& n : subsaf::builtin_channel_names()) std::cout << n << "\n";
    return 0;
  }
  std::cerr << "error: missing subcommand\n";
  return 1;
}
