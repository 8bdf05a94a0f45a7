#pragma once

#include <complex>
#include <span>
#include <vector>

// Fourier-multiplier operations on one period of equispaced samples
// t_p = 2*pi*p/n. The Nyquist mode (n even) is always zeroed.
namespace bubbles::spectral {

using cplx = std::complex<double>;

/// Applies the multiplier i*sgn(k), i.e. the operator with kernel
/// (1/2pi) cot((t-s)/2): cos t -> -sin s, sin t -> cos s.
std::vector<double> conjugate(std::span<const double> v);

/// Spectral derivative d/dt of a periodic complex sample vector.
std::vector<cplx> derivative(std::span<const cplx> v);

/// Value at t of the trigonometric interpolant (Nyquist mode split evenly).
cplx interpolate(std::span<const cplx> v, double t);

}  // namespace bubbles::spectral
