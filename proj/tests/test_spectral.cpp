#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bubbles/error.hpp"
#include "bubbles/spectral.hpp"

using namespace bubbles;
using spectral::cplx;

TEST_SUITE("spectral") {

TEST_CASE("conjugate maps cos to -sin and sin to cos") {
  const std::size_t n = 64;
  std::vector<double> c(n), s(n), k(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n);
    c[p] = std::cos(3.0 * t);
    s[p] = std::sin(3.0 * t);
    k[p] = 2.5;
  }
  const auto hc = spectral::conjugate(c);
  const auto hs = spectral::conjugate(s);
  const auto hk = spectral::conjugate(k);
  for (std::size_t p = 0; p < n; ++p) {
    CHECK(hc[p] == doctest::Approx(-s[p]).epsilon(1e-13));
    CHECK(std::abs(hs[p] - c[p]) < 1e-13);
    CHECK(std::abs(hk[p]) < 1e-14);
  }
}

TEST_CASE("conjugate zeroes the Nyquist mode") {
  std::vector<double> v(8);
  for (std::size_t p = 0; p < 8; ++p) v[p] = p % 2 ? -1.0 : 1.0;
  for (double x : spectral::conjugate(v)) CHECK(std::abs(x) < 1e-15);
}

TEST_CASE("derivative and interpolation") {
  const std::size_t n = 32;
  std::vector<cplx> v(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n);
    v[p] = std::exp(cplx{0.0, -2.0 * t}) + 0.5 * std::exp(cplx{0.0, 5.0 * t});
  }
  const auto d = spectral::derivative(v);
  for (std::size_t p = 0; p < n; ++p) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n);
    const cplx exact = cplx{0.0, -2.0} * std::exp(cplx{0.0, -2.0 * t}) +
                       cplx{0.0, 2.5} * std::exp(cplx{0.0, 5.0 * t});
    CHECK(std::abs(d[p] - exact) < 1e-13);
  }
  const double t = 0.731;
  const cplx exact = std::exp(cplx{0.0, -2.0 * t}) + 0.5 * std::exp(cplx{0.0, 5.0 * t});
  CHECK(std::abs(spectral::interpolate(v, t) - exact) < 1e-14);
}

TEST_CASE("odd lengths are rejected") {
  std::vector<double> v(7, 1.0);
  CHECK_THROWS_AS(spectral::conjugate(v), Error);
}

}  // TEST_SUITE
