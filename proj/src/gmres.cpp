#include "bubbles/gmres.hpp"

#include <cmath>
#include <sstream>

#include "bubbles/error.hpp"

namespace bubbles {

namespace {

// Compensated dot product: TwoProduct via fma plus TwoSum.
double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = a[i] * b[i];
    const double ep = std::fma(a[i], b[i], -p);
    const double t = s + p;
    const double z = t - s;
    c += ((s - (t - z)) + (p - z)) + ep;
    s = t;
  }
  return s + c;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

GmresResult gmres_solve(const LinearMap& op, std::span<const double> rhs,
                        const GmresSettings& settings) {
  const std::size_t dim = op.dimension;
  if (dim == 0) throw Error(ErrorCode::ZeroDimension, "operator has dimension zero");
  if (rhs.size() != dim) {
    throw Error(ErrorCode::LengthMismatch, "right-hand side length does not match operator");
  }
  if (!(settings.tol > 0.0) || settings.max_iterations < 1) {
    throw Error(ErrorCode::InvalidArgument, "GMRES needs tol > 0 and max_iterations >= 1");
  }

  GmresResult result;
  result.solution.assign(dim, 0.0);
  const double beta = norm2(rhs);
  if (beta == 0.0) {
    result.converged = true;
    return result;
  }

  const auto max_it = static_cast<std::size_t>(settings.max_iterations);
  std::vector<std::vector<double>> basis;
  basis.reserve(max_it + 1);
  basis.emplace_back(rhs.begin(), rhs.end());
  for (double& x : basis[0]) x /= beta;

  // Hessenberg columns after rotation (upper triangular R), stored column-wise.
  std::vector<std::vector<double>> r_cols;
  std::vector<double> cs, sn;
  std::vector<double> g{beta};
  std::vector<double> w(dim);

  // Least-squares solve R y = g on the first k columns and x = V y.
  auto form_solution = [&](std::size_t k) {
    std::vector<double> y(k, 0.0);
    for (std::size_t ii = k; ii-- > 0;) {
      double s = g[ii];
      for (std::size_t j = ii + 1; j < k; ++j) s -= r_cols[j][ii] * y[j];
      if (r_cols[ii][ii] == 0.0) {
        std::ostringstream os;
        os << "singular Hessenberg at step " << ii + 1 << " of " << k;
        throw Error(ErrorCode::BreakdownError, os.str());
      }
      y[ii] = s / r_cols[ii][ii];
    }
    std::vector<double> x(dim, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < dim; ++j) x[j] += y[i] * basis[i][j];
    }
    return x;
  };
  std::vector<double> r(dim);
  auto true_residual = [&](const std::vector<double>& x) {
    op.apply(x, r);
    for (std::size_t j = 0; j < dim; ++j) r[j] = rhs[j] - r[j];
    return norm2(r) / beta;
  };

  double estimate = beta;
  bool breakdown = false;
  bool verified = false;
  std::size_t k = 0;
  std::size_t last_check = 0;
  while (k < max_it) {
    op.apply(basis[k], w);
    std::vector<double> h(k + 2, 0.0);
    for (std::size_t i = 0; i <= k; ++i) {
      h[i] = dot(w, basis[i]);
      for (std::size_t j = 0; j < dim; ++j) w[j] -= h[i] * basis[i][j];
    }
    h[k + 1] = norm2(w);

    for (std::size_t i = 0; i < k; ++i) {
      const double tmp = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = tmp;
    }
    const double denom = std::hypot(h[k], h[k + 1]);
    const double lucky = h[k + 1];
    double c = 1.0, s = 0.0;
    if (denom != 0.0) {
      c = h[k] / denom;
      s = h[k + 1] / denom;
    }
    cs.push_back(c);
    sn.push_back(s);
    h[k] = denom;
    h[k + 1] = 0.0;
    g.push_back(-s * g[k]);
    g[k] = c * g[k];
    r_cols.push_back(std::move(h));
    const double previous = estimate;
    ++k;
    estimate = std::abs(g[k]);

    if (estimate <= settings.tol * beta) break;
    if (lucky <= 1e-14 * denom || denom == 0.0) {
      breakdown = true;
      break;
    }
    // Estimate stalled near the target: check the true residual.
    if (estimate <= 10.0 * settings.tol * beta && estimate > 0.5 * previous && k >= last_check + 5) {
      last_check = k;
      if (true_residual(form_solution(k)) <= settings.tol) {
        verified = true;
        break;
      }
    }
    basis.emplace_back(w);
    for (double& x : basis.back()) x /= lucky;
  }

  result.solution = form_solution(k);
  result.iterations = static_cast<int>(k);

  result.residual = true_residual(result.solution);

  if (breakdown && estimate > settings.tol * beta && result.residual > settings.tol) {
    // An invariant Krylov subspace without a small residual means the operator
    // is singular on it.
    std::ostringstream os;
    os << "Arnoldi breakdown after " << k << " iterations with residual estimate "
       << estimate / beta;
    throw Error(ErrorCode::BreakdownError, os.str());
  }
  result.converged = verified || estimate <= settings.tol * beta || result.residual <= settings.tol || breakdown;
  return result;
}

}  // namespace bubbles
