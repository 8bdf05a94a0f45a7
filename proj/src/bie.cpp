#include "bubbles/bie.hpp"

#include <algorithm>
#include <cmath>

#include "bubbles/error.hpp"
#include "bubbles/parallel.hpp"

namespace bubbles {

BieSolution solve_bie(const KernelContext& ctx, std::span<const double> gamma,
                      const GmresSettings& settings) {
  const std::size_t total = ctx.size();
  if (gamma.size() != total) {
    throw Error(ErrorCode::LengthMismatch, "gamma must be sampled at every boundary node");
  }
  BieSolution sol;

  std::vector<double> rhs = ctx.apply_M(gamma);
  for (double& r : rhs) r = -r;
  GmresResult g = gmres_solve(ctx.i_minus_n_operator(), rhs, settings);
  sol.mu = std::move(g.solution);
  sol.gmres_iterations = g.iterations;
  sol.residual_norm = g.residual;
  sol.converged = g.converged;

  const std::vector<double> m_mu = ctx.apply_M(sol.mu);
  const std::vector<double> n_gamma = ctx.apply_I_minus_N(gamma);
  sol.h_raw.resize(total);
  for (std::size_t k = 0; k < total; ++k) sol.h_raw[k] = 0.5 * (m_mu[k] - n_gamma[k]);

  const std::size_t n = ctx.sampling().n;
  const std::size_t comps = ctx.sampling().component_count();
  sol.h.assign(comps, 0.0);
  sol.h_deviation.assign(comps, 0.0);
  for (std::size_t c = 0; c < comps; ++c) {
    double sum = 0.0;
    for (std::size_t p = 0; p < n; ++p) sum += sol.h_raw[c * n + p];
    sol.h[c] = sum / static_cast<double>(n);
    for (std::size_t p = 0; p < n; ++p) {
      sol.h_deviation[c] = std::max(sol.h_deviation[c], std::abs(sol.h_raw[c * n + p] - sol.h[c]));
    }
  }

  sol.f_boundary.resize(total);
  const auto& comp = ctx.sampling().component;
  for (std::size_t k = 0; k < total; ++k) {
    sol.f_boundary[k] = cplx{gamma[k] + sol.h[comp[k]], sol.mu[k]} / ctx.A()[k];
  }
  return sol;
}

std::vector<cplx> cauchy_eval(const BoundarySampling& sampling, std::span<const cplx> boundary_values,
                              std::span<const cplx> points) {
  const std::size_t total = sampling.size();
  if (boundary_values.size() != total) {
    throw Error(ErrorCode::LengthMismatch, "boundary values must be given at every node");
  }
  for (const cplx& z : points) {
    if (locate(sampling.domain, z, 0.0) != Location::Inside) {
      throw Error(ErrorCode::PointOutside, "Cauchy evaluation point is not strictly interior");
    }
  }
  // Common trapezoidal weight 2pi/n cancels in the quotient.
  std::vector<double> x(total), y(total), dr(total), di(total), nr(total), ni(total);
  for (std::size_t q = 0; q < total; ++q) {
    x[q] = sampling.zeta[q].real();
    y[q] = sampling.zeta[q].imag();
    dr[q] = sampling.dzeta[q].real();
    di[q] = sampling.dzeta[q].imag();
    const cplx gw = boundary_values[q] * sampling.dzeta[q];
    nr[q] = gw.real();
    ni[q] = gw.imag();
  }
  std::vector<cplx> out(points.size());
  parallel_for(
      points.size(),
      [&](std::size_t k) {
        const double x0 = points[k].real();
        const double y0 = points[k].imag();
        double num_r = 0.0, num_i = 0.0, den_r = 0.0, den_i = 0.0;
#pragma omp simd reduction(+ : num_r, num_i, den_r, den_i)
        for (std::size_t q = 0; q < total; ++q) {
          const double dx = x[q] - x0;
          const double dy = y[q] - y0;
          const double inv = 1.0 / (dx * dx + dy * dy);
          num_r += (nr[q] * dx + ni[q] * dy) * inv;
          num_i += (ni[q] * dx - nr[q] * dy) * inv;
          den_r += (dr[q] * dx + di[q] * dy) * inv;
          den_i += (di[q] * dx - dr[q] * dy) * inv;
        }
        out[k] = cplx{num_r, num_i} / cplx{den_r, den_i};
      },
      16);
  return out;
}

}  // namespace bubbles
