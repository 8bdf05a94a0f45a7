#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bubbles/bie.hpp"
#include "bubbles/error.hpp"
#include "oracles.hpp"

using namespace bubbles;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kAlpha{0.0, std::sqrt(0.4)};

CircularDomain two_bubble_domain() { return make_domain({0.0}, {0.4}); }

KernelContext two_bubble(std::size_t n) {
  return make_context(discretize(two_bubble_domain(), n), ThetaSpec::uniform(2, kPi / 2), kAlpha);
}

// Free-space right-hand side Im[e^{-i theta} / (zeta - alpha)] with theta = pi/2.
double free_gamma(cplx zeta) { return (cplx{0.0, -1.0} / (zeta - kAlpha)).imag(); }

std::vector<double> free_gamma(const KernelContext& ctx) {
  std::vector<double> g(ctx.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = free_gamma(ctx.sampling().zeta[k]);
  return g;
}

}  // namespace

TEST_SUITE("bie_solver") {

TEST_CASE("unit disk closed-form chain") {
  const auto ctx = make_context(discretize(make_domain({}, {}), 64), ThetaSpec::uniform(1, kPi / 2), 0.0);
  std::vector<double> gamma(64);
  for (std::size_t p = 0; p < 64; ++p) gamma[p] = -std::cos(ctx.sampling().t[p]);
  const auto sol = solve_bie(ctx, gamma);
  CHECK(sol.converged);
  CHECK(std::abs(sol.h[0]) < 1e-14);
  for (std::size_t p = 0; p < 64; ++p) {
    CHECK(std::abs(sol.mu[p] + std::sin(ctx.sampling().t[p])) < 1e-14);
    CHECK(std::abs(sol.f_boundary[p] + 1.0) < 1e-14);
  }
}

TEST_CASE("homogeneous problem") {
  const auto ctx = two_bubble(32);
  const auto sol = solve_bie(ctx, std::vector<double>(64, 0.0));
  for (double x : sol.mu) CHECK(x == 0.0);
  for (double x : sol.h) CHECK(x == 0.0);
  for (cplx x : sol.f_boundary) CHECK(x == cplx{});
}

TEST_CASE("GMRES solution agrees with a dense direct solve") {
  const std::size_t n = 128;
  const auto ctx = two_bubble(n);
  const auto c = oracle::circles(two_bubble_domain(), {kPi / 2, kPi / 2}, kAlpha);
  const auto rhs = oracle::shifted_M(c, n, [&](std::size_t j, double t) { return free_gamma(c.zeta(j, t)); });
  Eigen::VectorXd b(rhs.size());
  for (std::size_t k = 0; k < rhs.size(); ++k) b[k] = -rhs[k];
  const Eigen::VectorXd mu = oracle::dense_I_minus_N(c, n).partialPivLu().solve(b);
  const auto sol = solve_bie(ctx, free_gamma(ctx));
  double worst = 0.0;
  for (std::size_t k = 0; k < sol.mu.size(); ++k) worst = std::max(worst, std::abs(sol.mu[k] - mu[k]));
  CHECK(worst < 1e-10);
}

TEST_CASE("raw h samples are piecewise constant at n = 1024") {
  const auto ctx = two_bubble(1024);
  const auto sol = solve_bie(ctx, free_gamma(ctx));
  for (std::size_t j = 0; j < 2; ++j) {
    double var = 0.0;
    for (std::size_t p = 0; p < 1024; ++p) var += std::pow(sol.h_raw[j * 1024 + p] - sol.h[j], 2);
    CHECK(std::sqrt(var / 1024.0) < 1e-12);
    CHECK(sol.h_deviation[j] < 1e-11);
  }
}

TEST_CASE("cauchy_eval reproduces constants and polynomials") {
  const auto s = discretize(two_bubble_domain(), 256);
  std::vector<cplx> one(s.size(), 1.0), sq(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) sq[k] = s.zeta[k] * s.zeta[k];
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  std::vector<cplx> pts;
  while (pts.size() < 20) {
    const cplx z{u(rng), u(rng)};
    if (locate(s.domain, z, 0.02) == Location::Inside) pts.push_back(z);
  }
  const auto a = cauchy_eval(s, one, pts);
  const auto b = cauchy_eval(s, sq, pts);
  double worst = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK(std::abs(a[k] - 1.0) < 1e-15);
    worst = std::max(worst, std::abs(b[k] - pts[k] * pts[k]));
  }
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(cauchy_eval(s, one, std::vector<cplx>{0.1}), Error);
  CHECK_THROWS_AS(cauchy_eval(s, one, std::vector<cplx>{1.5}), Error);
}

TEST_CASE("quotient form stays accurate next to the boundary") {
  const auto s = discretize(two_bubble_domain(), 512);
  std::vector<cplx> g(s.zeta.begin(), s.zeta.end());
  const cplx z = std::polar(1.0 - 1e-3, 0.3 + kPi / 512.0);
  const cplx q = cauchy_eval(s, g, std::vector<cplx>{z})[0];
  CHECK(std::abs(q - z) < 1e-8);
  cplx plain{};
  for (std::size_t k = 0; k < s.size(); ++k) plain += g[k] * s.dzeta[k] / (s.zeta[k] - z);
  plain *= (2.0 * kPi / 512.0) / (2.0 * kPi * cplx{0.0, 1.0});
  CHECK(std::abs(plain - z) > 1e-8);
}

TEST_CASE("solve is deterministic") {
  const auto ctx = two_bubble(256);
  const auto a = solve_bie(ctx, free_gamma(ctx));
  const auto b = solve_bie(ctx, free_gamma(ctx));
  CHECK(a.mu == b.mu);
  CHECK(a.h == b.h);
}

TEST_CASE("interior values continue the boundary values analytically") {
  const std::size_t n = 512;
  const auto ctx = two_bubble(n);
  const auto sol = solve_bie(ctx, free_gamma(ctx));
  const auto& s = ctx.sampling();
  for (std::size_t j = 0; j < 2; ++j) {
    const std::vector<cplx> fb(sol.f_boundary.begin() + long(j * n), sol.f_boundary.begin() + long((j + 1) * n));
    const double rho = s.domain.radius(j);
    const double rho_in = j == 0 ? rho - 1e-2 : rho + 1e-2;
    for (std::size_t p : {std::size_t{0}, n / 5, n / 2 + 3}) {
      const double t = s.t[j * n + p];
      const cplx point = j == 0 ? std::polar(rho_in, t) : s.domain.center(j) + std::polar(rho_in, -t);
      // parametrization at complex parameter tau reaches the point
      const cplx tau = j == 0 ? cplx{t, -std::log(rho_in)} : cplx{t, std::log(rho_in / rho)};
      const cplx expected = oracle::continue_series(fb, tau);
      const cplx got = cauchy_eval(s, sol.f_boundary, std::vector<cplx>{point})[0];
      CHECK(std::abs(got - expected) < 1e-6);
      CHECK(std::abs(got - fb[p]) > 0.0);
    }
  }
}

TEST_CASE("residual certificate") {
  const auto ctx = two_bubble(512);
  const auto gamma = free_gamma(ctx);
  const auto sol = solve_bie(ctx, gamma);
  const auto lhs = ctx.apply_I_minus_N(sol.mu);
  const auto mg = ctx.apply_M(gamma);
  double res = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    res = std::max(res, std::abs(lhs[k] + mg[k]));
    scale = std::max(scale, std::abs(mg[k]));
  }
  CHECK(res <= 10.0 * 1e-14 * scale);
}

TEST_CASE("iteration count is nearly independent of n") {
  int lo = 1000, hi = 0;
  for (std::size_t n : {256, 512, 1024, 2048}) {
    const auto ctx = two_bubble(n);
    const auto sol = solve_bie(ctx, free_gamma(ctx));
    CHECK(sol.converged);
    lo = std::min(lo, sol.gmres_iterations);
    hi = std::max(hi, sol.gmres_iterations);
  }
  CHECK(double(hi) <= 1.5 * double(lo));
}

}  // TEST_SUITE
