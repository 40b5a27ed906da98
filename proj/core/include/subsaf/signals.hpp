#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace subsaf {

enum class NoiseKind { gaussian, contaminated_gaussian, alpha_stable };

/// Additive-noise description. The Gaussian floor is defined against the
/// system-output power sigma_dbar^2; impulses are Bernoulli-gated Gaussians
/// of variance impulse_gain * sigma_dbar^2.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::gaussian;
  double snr_db = 30.0;
  double p_r = 0.0;             // impulse probability per sample
  double impulse_gain = 1000.0; // sigma_eta^2 / sigma_dbar^2
  double alpha = 1.6;           // characteristic exponent in (0, 2]
  double dispersion = 1.0 / 30.0;
};

enum class SourceKind { ar1, white, file, speech_like };

struct SignalSource {
  SourceKind kind = SourceKind::ar1;
  double pole = 0.95;
  std::uint64_t seed = 0;
  std::string path;  // for SourceKind::file
};

/// AR(1): x(t) = pole*x(t-1) + w(t) with unit-variance Gaussian drive,
/// zero initial state. Deterministic per seed.
std::vector<double> gen_ar1(double pole, std::size_t n, std::uint64_t seed);

/// Additive noise per spec; system_output_power is sigma_dbar^2.
std::vector<double> gen_noise(const NoiseSpec& spec, double system_output_power,
                              std::size_t n, std::uint64_t seed);

/// 16-bit little-endian mono PCM, scaled to [-1, 1].
std::vector<double> load_pcm(const std::string& path);

/// Float-per-line text samples.
std::vector<double> load_text_samples(const std::string& path);

/// Dispatch on extension: .pcm/.raw/.s16 are read as PCM, anything else as text.
/// File sources are normalized to peak |x| <= 1.
std::vector<double> load_samples(const std::string& path);

/// Amplitude-modulated AR(1) with silence gaps; a bundled speech-like test
/// signal so echo-cancellation scenarios run without external audio.
std::vector<double> gen_speech_like(std::size_t n, std::uint64_t seed);

std::vector<double> render_source(const SignalSource& src, std::size_t n,
                                  std::uint64_t seed);

/// Analytic AR(1) autocorrelation r(tau) = pole^|tau| / (1 - pole^2);
/// returns w^T R w, used to calibrate SNR without Monte-Carlo noise.
double ar1_output_power(const std::vector<double>& w, double pole);

}  // namespace subsaf
