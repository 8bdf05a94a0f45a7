#pragma once

#include <span>
#include <vector>

#include "bubbles/gmres.hpp"
#include "bubbles/neumann_kernel.hpp"

namespace bubbles {

struct BieSolution {
  std::vector<double> mu;
  /// Per-component constants h_j (mean of the raw samples).
  std::vector<double> h;
  /// Raw samples of h(t) = [M mu - (I - N) gamma] / 2 at every node.
  std::vector<double> h_raw;
  /// max_t |h(t) - h_j| over each component.
  std::vector<double> h_deviation;
  /// f(zeta(t)) = (gamma + h + i mu) / A at every node.
  std::vector<cplx> f_boundary;
  int gmres_iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
};

/// Solves (I - N) mu = -M gamma by GMRES and forms h and the boundary values of f.
/// Non-convergence is not an error: the result has converged = false.
BieSolution solve_bie(const KernelContext& ctx, std::span<const double> gamma,
                      const GmresSettings& settings = {});

/// Interior values of an analytic function from its boundary values using the
/// normalized (quotient) trapezoidal Cauchy formula. Throws PointOutside for
/// points not strictly inside the domain.
std::vector<cplx> cauchy_eval(const BoundarySampling& sampling, std::span<const cplx> boundary_values,
                              std::span<const cplx> points);

}  // namespace bubbles
