#include "bubbles/neumann_kernel.hpp"

#include <cmath>
#include <numbers>

#include "bubbles/error.hpp"
#include "bubbles/parallel.hpp"
#include "bubbles/spectral.hpp"

namespace bubbles {

namespace {

constexpr double kPi = std::numbers::pi;

// Accumulates sum_q (wr + i wi)_q / ((x_q - x0) + i (y_q - y0)) over [lo, hi).
inline void accumulate(const double* x, const double* y, const double* wr, const double* wi,
                       std::size_t lo, std::size_t hi, double x0, double y0, double& sr,
                       double& si) {
  double ar = 0.0, ai = 0.0;
#pragma omp simd reduction(+ : ar, ai)
  for (std::size_t q = lo; q < hi; ++q) {
    const double dx = x[q] - x0;
    const double dy = y[q] - y0;
    const double inv = 1.0 / (dx * dx + dy * dy);
    ar += (wr[q] * dx + wi[q] * dy) * inv;
    ai += (wi[q] * dx - wr[q] * dy) * inv;
  }
  sr += ar;
  si += ai;
}

}  // namespace

KernelContext::KernelContext(BoundarySampling sampling, ThetaSpec theta, cplx alpha)
    : sampling_(std::move(sampling)), theta_(std::move(theta)), alpha_(alpha) {
  const std::size_t comps = sampling_.component_count();
  if (theta_.theta.size() != comps) {
    throw Error(ErrorCode::LengthMismatch, "theta has " + std::to_string(theta_.theta.size()) +
                                               " entries, domain has " + std::to_string(comps) +
                                               " boundary components");
  }
  if (locate(sampling_.domain, alpha_, 0.0) != Location::Inside) {
    throw Error(ErrorCode::AlphaOutside, "base point alpha is not strictly inside the domain");
  }
  constexpr cplx i{0.0, 1.0};
  const std::size_t total = sampling_.size();
  A_.resize(total);
  dA_.resize(total);
  re_zeta_.resize(total);
  im_zeta_.resize(total);
  half_turn_.resize(total);
  lead_.resize(total);
  trail_.resize(total);
  inv_shift_.resize(total);
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t c = sampling_.component[k];
    const cplx rot = std::polar(1.0, kPi / 2.0 - theta_.theta[c]);
    A_[k] = rot * (sampling_.zeta[k] - alpha_);
    dA_[k] = rot * sampling_.dzeta[k];
    re_zeta_[k] = sampling_.zeta[k].real();
    im_zeta_[k] = sampling_.zeta[k].imag();
    half_turn_[k] = std::polar(1.0, sampling_.t[k] / 2.0);
    inv_shift_[k] = 1.0 / (sampling_.zeta[k] - alpha_);
    if (c == 0) {
      lead_[k] = -i * half_turn_[k];
      trail_[k] = half_turn_[k] * inv_shift_[k];
    } else {
      lead_[k] = i * sampling_.domain.radius(c) * std::conj(half_turn_[k]);
      trail_[k] = std::conj(half_turn_[k]) * inv_shift_[k];
    }
  }
}

KernelContext make_context(BoundarySampling sampling, ThetaSpec theta, cplx alpha) {
  return KernelContext(std::move(sampling), std::move(theta), alpha);
}

// On one circle zeta'(t) / (zeta(t) - zeta(s)) = -cot((s-t)/2)/2 + sigma i/2 with
// sigma = +1 on C_0 and -1 on C_j, and zeta(t) - zeta(s) factors through
// sin((s-t)/2). Removing the real cotangent term leaves
//   K(s,t) = cos((s-t)/2) lead(s) trail(t) + sigma (i/2) (zeta(s)-alpha)/(zeta(t)-alpha),
// smooth and free of cancellation, with N = Im K / pi and
// M = Re K / pi - cot((s-t)/2) / (2 pi).
cplx KernelContext::circle_kernel(std::size_t p, std::size_t q) const {
  const double sigma = sampling_.component[p] == 0 ? 1.0 : -1.0;
  const double c = std::cos(0.5 * (sampling_.t[p] - sampling_.t[q]));
  return c * lead_[p] * trail_[q] +
         cplx{0.0, 0.5 * sigma} * (sampling_.zeta[p] - alpha_) * inv_shift_[q];
}

double KernelContext::kernel_N(std::size_t p, std::size_t q) const {
  if (sampling_.component[p] == sampling_.component[q]) return circle_kernel(p, q).imag() / kPi;
  const auto& z = sampling_.zeta;
  const cplx g = A_[p] / A_[q] * sampling_.dzeta[q] / (z[q] - z[p]);
  return g.imag() / kPi;
}

double KernelContext::kernel_M(std::size_t p, std::size_t q) const {
  if (p == q) {
    throw Error(ErrorCode::InvalidArgument, "M is singular on the diagonal; use kernel_M1");
  }
  if (sampling_.component[p] == sampling_.component[q]) {
    const double half = 0.5 * (sampling_.t[p] - sampling_.t[q]);
    return circle_kernel(p, q).real() / kPi - 1.0 / (2.0 * kPi * std::tan(half));
  }
  const auto& z = sampling_.zeta;
  const cplx g = A_[p] / A_[q] * sampling_.dzeta[q] / (z[q] - z[p]);
  return g.real() / kPi;
}

double KernelContext::kernel_M1(std::size_t p, std::size_t q) const {
  if (sampling_.component[p] != sampling_.component[q]) {
    throw Error(ErrorCode::DifferentComponent,
                "cotangent remainder is only defined for nodes on the same component");
  }
  return circle_kernel(p, q).real() / kPi;
}

void KernelContext::check_length(std::span<const double> v) const {
  if (v.size() != size()) {
    throw Error(ErrorCode::LengthMismatch, "vector has length " + std::to_string(v.size()) +
                                               ", sampling has " + std::to_string(size()) + " nodes");
  }
}

std::vector<cplx> KernelContext::circle_sums(std::span<const double> v) const {
  // cos((s-t)/2) = (e^{is/2} e^{-it/2} + e^{-is/2} e^{it/2}) / 2 makes each block rank 3.
  const std::size_t n = sampling_.n;
  std::vector<cplx> out(size());
  for (std::size_t c = 0; c < sampling_.component_count(); ++c) {
    cplx minus{}, plus{}, shift{};
    for (std::size_t q = c * n; q < (c + 1) * n; ++q) {
      minus += std::conj(half_turn_[q]) * trail_[q] * v[q];
      plus += half_turn_[q] * trail_[q] * v[q];
      shift += inv_shift_[q] * v[q];
    }
    const cplx spin{0.0, c == 0 ? 0.5 : -0.5};
    for (std::size_t p = c * n; p < (c + 1) * n; ++p) {
      out[p] = 0.5 * lead_[p] * (half_turn_[p] * minus + std::conj(half_turn_[p]) * plus) +
               spin * (sampling_.zeta[p] - alpha_) * shift;
    }
  }
  return out;
}

std::vector<cplx> KernelContext::cross_sums(std::span<const double> v) const {
  const std::size_t total = size();
  const std::size_t n = sampling_.n;
  std::vector<double> wr(total), wi(total);
  for (std::size_t q = 0; q < total; ++q) {
    const cplx w = sampling_.dzeta[q] * v[q] / A_[q];
    wr[q] = w.real();
    wi[q] = w.imag();
  }
  std::vector<cplx> sums(total);
  if (sampling_.component_count() == 1) return sums;
  const double* x = re_zeta_.data();
  const double* y = im_zeta_.data();
  parallel_for(total, [&](std::size_t p) {
    const std::size_t lo = sampling_.component[p] * n;
    double sr = 0.0, si = 0.0;
    accumulate(x, y, wr.data(), wi.data(), 0, lo, x[p], y[p], sr, si);
    accumulate(x, y, wr.data(), wi.data(), lo + n, total, x[p], y[p], sr, si);
    sums[p] = A_[p] * cplx{sr, si};
  });
  return sums;
}

std::vector<double> KernelContext::apply_I_minus_N(std::span<const double> v) const {
  check_length(v);
  const std::vector<cplx> own = circle_sums(v);
  const std::vector<cplx> cross = cross_sums(v);
  const double weight = 2.0 / static_cast<double>(sampling_.n);
  std::vector<double> out(size());
  for (std::size_t p = 0; p < size(); ++p) {
    out[p] = v[p] - weight * (own[p].imag() + cross[p].imag());
  }
  return out;
}

std::vector<double> KernelContext::apply_M(std::span<const double> v) const {
  check_length(v);
  const std::size_t n = sampling_.n;
  if (n % 2 != 0) throw Error(ErrorCode::OddN, "apply_M needs an even node count");
  const std::vector<cplx> own = circle_sums(v);
  const std::vector<cplx> cross = cross_sums(v);
  const double weight = 2.0 / static_cast<double>(n);
  std::vector<double> out(size());
  for (std::size_t c = 0; c < sampling_.component_count(); ++c) {
    const std::vector<double> singular = spectral::conjugate(v.subspan(c * n, n));
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t k = c * n + p;
      out[k] = weight * (own[k].real() + cross[k].real()) + singular[p];
    }
  }
  return out;
}

LinearMap KernelContext::i_minus_n_operator() const {
  return LinearMap{size(), [this](std::span<const double> x, std::span<double> y) {
                     const std::vector<double> r = apply_I_minus_N(x);
                     std::copy(r.begin(), r.end(), y.begin());
                   }};
}

DenseMatrix KernelContext::dense_I_minus_N() const {
  const std::size_t total = size();
  const double weight = 2.0 * kPi / static_cast<double>(sampling_.n);
  DenseMatrix mat{total, total, std::vector<double>(total * total)};
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t q = 0; q < total; ++q) {
      mat(p, q) = (p == q ? 1.0 : 0.0) - weight * kernel_N(p, q);
    }
  }
  return mat;
}

}  // namespace bubbles
