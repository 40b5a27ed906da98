#include <cmath>
#include <doctest.h>
#include <stdexcept>

#include "subsaf/robustness.hpp"
#include "subsaf/rng.hpp"

using namespace subsaf;

TEST_CASE("first-tick threshold uses theta = 0") {
  // single window entry e^2 = 4.0, N_w = 20, kappa = 2.576
  ThresholdState st(4, 128, 2.0, 20);
  const double xi = st.update(2.0, 2.576);
  const double c_sigma = 1.483 * (1.0 + 5.0 / 19.0);
  CHECK(c_sigma == doctest::Approx(1.87326).epsilon(1e-5));
  CHECK(st.sigma_e2() == doctest::Approx(c_sigma * 4.0).epsilon(1e-12));
  CHECK(xi == doctest::Approx(2.576 * std::sqrt(7.49305)).epsilon(1e-4));
  CHECK(xi == doctest::Approx(7.0517).epsilon(1e-3));
}

TEST_CASE("constant window is a fixed point at c_sigma * v") {
  ThresholdState st(4, 128, 2.0, 20);
  const double v = 3.0;
  for (int k = 0; k < 5000; ++k) st.update(std::sqrt(v), 2.576);
  CHECK(st.sigma_e2() == doctest::Approx(st.c_sigma() * v).epsilon(1e-6));
}

TEST_CASE("median ignores a single outlier") {
  ThresholdState st(4, 128, 2.0, 20);
  for (int k = 0; k < 19; ++k) st.update(1.0, 2.576);
  const double before = st.sigma_e2();
  st.update(1000.0, 2.576);  // e^2 = 10^6 lands in the window
  // the median stays at 1, so the recursion barely moves
  CHECK(st.sigma_e2() == doctest::Approx(before).epsilon(0.01));
}

TEST_CASE("threshold recursion is scale equivariant") {
  ThresholdState a(4, 64, 2.0, 20), b(4, 64, 2.0, 20);
  Rng rng(5);
  const double c = 4.0;  // power of two keeps the scaling exact in binary
  for (int k = 0; k < 200; ++k) {
    const double e = rng.gaussian();
    const double xa = a.update(e, 2.576);
    const double xb = b.update(c * e, 2.576);
    CHECK(xb == c * xa);
  }
  CHECK(b.sigma_e2() == c * c * a.sigma_e2());
}

TEST_CASE("modified Huber gate is a hard cut") {
  const ScalingRule mh{RobustVariant::modified_huber, 2.576};
  CHECK(scale(mh, 0.5, 1.0) == 1.0);
  CHECK(scale(mh, 1.5, 1.0) == 0.0);
  CHECK(scale(mh, -1.5, 1.0) == 0.0);
  CHECK(scale(mh, 1.0, 1.0) == 0.0);  // |e| >= xi
}

TEST_CASE("correntropy gate values") {
  ScalingRule mcc{RobustVariant::correntropy};
  mcc.kernel_width = 0.7;
  CHECK(scale(mcc, 0.0, 0.0) == 1.0);
  CHECK(scale(mcc, 0.7, 0.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(scale(mcc, 0.7, 0.0) == doctest::Approx(0.60653).epsilon(1e-4));
}

TEST_CASE("rho values") {
  CHECK(rho(1.0) == 1.0);
  CHECK(rho(0.0) == 0.0);
  CHECK(rho(0.5) == doctest::Approx(0.75));
}

TEST_CASE("q stays in [0, 1] for any finite error") {
  Rng rng(17);
  const ScalingRule mh{RobustVariant::modified_huber, 2.576};
  ScalingRule mcc{RobustVariant::correntropy};
  mcc.kernel_width = 0.3;
  for (int k = 0; k < 10000; ++k) {
    const double e = rng.gaussian() * std::exp(5.0 * rng.uniform());
    for (const auto& rule : {mh, mcc}) {
      const double q = scale(rule, e, 1.0);
      CHECK(q >= 0.0);
      CHECK(q <= 1.0);
      CHECK(rho(q) >= 0.0);
      CHECK(rho(q) <= 1.0);
    }
  }
}

TEST_CASE("kappa = 2.576 accepts about 99% of Gaussian errors") {
  Rng rng(23);
  const ScalingRule mh{RobustVariant::modified_huber, 2.576};
  const double sigma = 1.7;
  const double xi = 2.576 * sigma;
  long accepted = 0;
  const long n = 1000000;
  for (long k = 0; k < n; ++k)
    if (scale(mh, sigma * rng.gaussian(), xi) == 1.0) ++accepted;
  const double frac = static_cast<double>(accepted) / n;
  CHECK(frac == doctest::Approx(0.99002).epsilon(0.0031));
  CHECK(frac >= 0.989 - 0.003);
}

TEST_CASE("frozen pushes enter the window as zeros") {
  ThresholdState st(4, 128, 2.0, 4);
  for (int k = 0; k < 4; ++k) st.update(2.0, 2.576);
  for (int k = 0; k < 3; ++k) st.push_frozen();
  // window is now [4, 0, 0, 0]; median of {0,0,0,4} = 0
  for (int k = 0; k < 2000; ++k) st.push_frozen();
  CHECK(st.sigma_e2() == doctest::Approx(0.0).epsilon(1e-12));
}
