#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "bubbles/circdomain.hpp"

namespace bubbles {

/// Slit inclination per boundary component: 0 for horizontal, pi/2 for vertical.
struct ThetaSpec {
  std::vector<double> theta;

  static ThetaSpec uniform(std::size_t components, double angle) {
    return ThetaSpec{std::vector<double>(components, angle)};
  }
};

/// Square real linear map y = L x, applied matrix-free.
struct LinearMap {
  std::size_t dimension = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
};

/// Row-major dense matrix, only used to cross-check the matrix-free operators.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Tabulates A(t) = e^{i(pi/2 - theta(t))} (zeta(t) - alpha) and its derivative
/// on a boundary sampling, and applies the Nystrom-discretized generalized
/// Neumann kernel N and its singular companion M.
class KernelContext {
public:
  KernelContext(BoundarySampling sampling, ThetaSpec theta, cplx alpha);

  [[nodiscard]] const BoundarySampling& sampling() const noexcept { return sampling_; }
  [[nodiscard]] const ThetaSpec& theta() const noexcept { return theta_; }
  [[nodiscard]] cplx alpha() const noexcept { return alpha_; }
  [[nodiscard]] const std::vector<cplx>& A() const noexcept { return A_; }
  [[nodiscard]] const std::vector<cplx>& dA() const noexcept { return dA_; }
  [[nodiscard]] std::size_t size() const noexcept { return sampling_.size(); }

  /// N(t_p, t_q); the diagonal uses the continuous limit.
  [[nodiscard]] double kernel_N(std::size_t p, std::size_t q) const;
  /// Smooth remainder M + (1/2pi) cot((s-t)/2); p and q on the same component.
  [[nodiscard]] double kernel_M1(std::size_t p, std::size_t q) const;
  /// Full M(t_p, t_q) for p != q (singular as q -> p on one component).
  [[nodiscard]] double kernel_M(std::size_t p, std::size_t q) const;

  [[nodiscard]] std::vector<double> apply_I_minus_N(std::span<const double> v) const;
  [[nodiscard]] std::vector<double> apply_M(std::span<const double> v) const;

  /// Matrix-free (I - N_h); the context must outlive the returned map.
  [[nodiscard]] LinearMap i_minus_n_operator() const;

  [[nodiscard]] DenseMatrix dense_I_minus_N() const;

private:
  void check_length(std::span<const double> v) const;
  // K(p, q) for nodes on one circle; N = Im K / pi and M1 = Re K / pi.
  [[nodiscard]] cplx circle_kernel(std::size_t p, std::size_t q) const;
  // sum_q K(p, q) v_q over the component of p, for every p.
  [[nodiscard]] std::vector<cplx> circle_sums(std::span<const double> v) const;
  // A_p * sum_{q on other components} w_q / (zeta_q - zeta_p), w_q = zeta'_q v_q / A_q.
  [[nodiscard]] std::vector<cplx> cross_sums(std::span<const double> v) const;

  BoundarySampling sampling_;
  ThetaSpec theta_;
  cplx alpha_;
  std::vector<cplx> A_;
  std::vector<cplx> dA_;
  std::vector<double> re_zeta_;
  std::vector<double> im_zeta_;
  // Separable factors of the circle kernel, see circle_kernel().
  std::vector<cplx> half_turn_;  // e^{i t/2}
  std::vector<cplx> lead_;
  std::vector<cplx> trail_;
  std::vector<cplx> inv_shift_;  // 1 / (zeta - alpha)
};

KernelContext make_context(BoundarySampling sampling, ThetaSpec theta, cplx alpha);

}  // namespace bubbles
