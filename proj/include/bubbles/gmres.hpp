#pragma once

#include <span>
#include <vector>

#include "bubbles/neumann_kernel.hpp"

namespace bubbles {

struct GmresSettings {
  double tol = 1e-14;
  int max_iterations = 100;
};

struct GmresResult {
  std::vector<double> solution;
  int iterations = 0;
  /// True relative residual ||b - L x|| / ||b|| of the returned iterate.
  double residual = 0.0;
  bool converged = false;
};

/// Full (unrestarted) GMRES with modified Gram-Schmidt Arnoldi and Givens
/// rotations, zero initial guess. Stops once the least-squares residual drops
/// below tol*||b||, or when that estimate stalls within 10*tol and the true
/// residual of the current iterate is already below tol. After max_iterations
/// the best iterate is returned with converged = false. Throws ZeroDimension or
/// BreakdownError.
GmresResult gmres_solve(const LinearMap& op, std::span<const double> rhs,
                        const GmresSettings& settings = {});

}  // namespace bubbles
