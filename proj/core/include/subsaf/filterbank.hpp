#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "subsaf/tick.hpp"

namespace subsaf {

/// Linear-phase lowpass prototype p(l) of a cosine-modulated analysis bank.
struct PrototypeFilter {
  std::vector<double> coeffs;   // p(l), l = 0..J-1
  int n_subbands = 1;           // N
  double stopband_atten_db = 0; // measured by frequency scan at design time

  std::size_t length() const { return coeffs.size(); }
};

/// N modulated analysis filters h_i derived from one prototype.
struct AnalysisBank {
  std::vector<std::vector<double>> filters;  // h_i, each of length J
  PrototypeFilter prototype;

  int n_subbands() const { return static_cast<int>(filters.size()); }
  std::size_t filter_length() const { return filters.empty() ? 0 : filters[0].size(); }
};

/// Max stopband magnitude relative to the peak response, in dB.
/// Stopband starts at w = pi/N plus a transition margin of 0.1*pi/N.
double measure_stopband_atten_db(const std::vector<double>& coeffs, int n_subbands,
                                 int n_freq = 4096);

/// Kaiser-window lowpass with cutoff pi/(2N); the window shape parameter is
/// found by a coarse scan plus golden-section refinement on the measured
/// attenuation. Throws if the target cannot be met at the given length
/// (the message reports the best achieved value).
PrototypeFilter design_prototype(int n_subbands, int length, double target_atten_db);

/// Load prototype coefficients from a float-per-line text file.
PrototypeFilter load_prototype(const std::string& path, int n_subbands);

/// h_i(l) = 2 p(l) cos[(2i+1)(2l-(J-1))pi/(4N) + (-1)^i pi/4].
AnalysisBank modulate(const PrototypeFilter& prototype);

/// Streams fullband (u, d) pairs through the analysis bank and emits one
/// critically sampled tick per N input samples. Single-writer mutable state.
class SubbandDecomposer {
 public:
  SubbandDecomposer(AnalysisBank bank, int filter_len);

  /// Consumes exactly N fullband samples of u and d; advances all delay
  /// lines and returns the tick. Cold start is zero-padded.
  SubbandTick step(const std::vector<double>& u_block,
                   const std::vector<double>& d_block);

  int n_subbands() const { return bank_.n_subbands(); }
  int filter_len() const { return filter_len_; }
  const AnalysisBank& bank() const { return bank_; }

 private:
  void push_sample(double u, double d);

  AnalysisBank bank_;
  int filter_len_;                          // M
  std::vector<double> u_line_, d_line_;     // fullband FIR state, length J, newest first
  std::vector<std::vector<double>> u_reg_;  // per-subband regressor, length M, newest first
};

}  // namespace subsaf
