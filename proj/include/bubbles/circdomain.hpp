#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bubbles {

using cplx = std::complex<double>;

inline constexpr double kDefaultMinGap = 1e-3;

/// Bounded circular domain: the unit disk with m disjoint closed disks removed.
/// Component 0 is the unit circle, components 1..m are the inner circles.
class CircularDomain {
public:
  CircularDomain() = default;

  [[nodiscard]] std::size_t inner_count() const noexcept { return centers_.size(); }
  [[nodiscard]] std::size_t component_count() const noexcept { return centers_.size() + 1; }
  [[nodiscard]] const std::vector<cplx>& centers() const noexcept { return centers_; }
  [[nodiscard]] const std::vector<double>& radii() const noexcept { return radii_; }
  [[nodiscard]] double min_gap() const noexcept { return min_gap_; }

  /// Center/radius of boundary component j (j = 0 is the unit circle).
  [[nodiscard]] cplx center(std::size_t j) const { return j == 0 ? cplx{} : centers_.at(j - 1); }
  [[nodiscard]] double radius(std::size_t j) const { return j == 0 ? 1.0 : radii_.at(j - 1); }

  friend CircularDomain make_domain(std::vector<cplx> centers, std::vector<double> radii,
                                    double min_gap);

private:
  std::vector<cplx> centers_;
  std::vector<double> radii_;
  double min_gap_ = 0.0;
};

/// Validates the circle layout. Throws Error with OverlapError, OutsideError or
/// BadRadius; the message names the offending circle(s) (1-based, like C_j).
CircularDomain make_domain(std::vector<cplx> centers, std::vector<double> radii,
                           double min_gap = kDefaultMinGap);

/// Equispaced boundary sampling, n nodes per component, stored component-major:
/// node index = component * n + p with parameter t_p = 2*pi*p/n.
struct BoundarySampling {
  CircularDomain domain;
  std::size_t n = 0;
  std::vector<double> t;
  std::vector<cplx> zeta;
  std::vector<cplx> dzeta;
  std::vector<cplx> ddzeta;
  std::vector<std::size_t> component;

  [[nodiscard]] std::size_t size() const noexcept { return zeta.size(); }
  [[nodiscard]] std::size_t component_count() const noexcept { return domain.component_count(); }
  [[nodiscard]] std::size_t index(std::size_t comp, std::size_t p) const noexcept { return comp * n + p; }
};

/// Closed-form parametrization: e^{it} on C_0 (counterclockwise) and
/// z_j + r_j e^{-it} on C_j (clockwise). Requires n even and n >= 4.
BoundarySampling discretize(const CircularDomain& domain, std::size_t n);

/// Parametrization of component j at an arbitrary parameter value.
cplx boundary_point(const CircularDomain& domain, std::size_t j, double t);
cplx boundary_derivative(const CircularDomain& domain, std::size_t j, double t);
cplx boundary_second_derivative(const CircularDomain& domain, std::size_t j, double t);

enum class Location { Inside, Outside, NearBoundary };

Location locate(const CircularDomain& domain, cplx point, double margin);

}  // namespace bubbles
