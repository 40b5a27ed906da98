#pragma once

#include <cmath>
#include <cstdint>

namespace subsaf {

/// Deterministic splitmix64-based generator. Output sequences depend only on
/// (seed, stream), which keeps Monte-Carlo runs reproducible bit-for-bit
/// regardless of platform or standard-library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(seed + stream * 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  /// Standard normal via Box-Muller, one spare cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double t = 2.0 * M_PI * uniform();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  /// Exponential with unit mean.
  double exponential() { return -std::log(uniform_pos()); }

  /// Symmetric alpha-stable sample with characteristic function
  /// exp(-dispersion * |t|^alpha), via the Chambers-Mallows-Stuck transform.
  double alpha_stable(double alpha, double dispersion) {
    const double u = M_PI * (uniform() - 0.5);  // uniform angle in (-pi/2, pi/2)
    const double w = exponential();
    double x;
    if (alpha == 1.0) {
      x = std::tan(u);
    } else {
      x = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha) *
          std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
    }
    return std::pow(dispersion, 1.0 / alpha) * x;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace subsaf
