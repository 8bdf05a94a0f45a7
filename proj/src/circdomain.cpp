#include "bubbles/circdomain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bubbles/error.hpp"

namespace bubbles {

namespace {

std::string describe_circle(std::size_t j, cplx c, double r) {
  std::ostringstream os;
  os << "C_" << j << " (center " << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
     << "i, radius " << r << ")";
  return os.str();
}

}  // namespace

CircularDomain make_domain(std::vector<cplx> centers, std::vector<double> radii, double min_gap) {
  if (centers.size() != radii.size()) {
    throw Error(ErrorCode::InvalidArgument, "centers and radii lists differ in length");
  }
  if (!(min_gap >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "min_gap must be non-negative");
  }
  const std::size_t m = centers.size();
  for (std::size_t j = 0; j < m; ++j) {
    if (!(radii[j] > 0.0) || !std::isfinite(radii[j])) {
      throw Error(ErrorCode::BadRadius, describe_circle(j + 1, centers[j], radii[j]) +
                                            " must have a positive radius");
    }
    const double gap = 1.0 - std::abs(centers[j]) - radii[j];
    if (!(gap > 0.0)) {
      throw Error(ErrorCode::OutsideError,
                  describe_circle(j + 1, centers[j], radii[j]) + " is not strictly inside the unit disk");
    }
    if (gap < min_gap) {
      std::ostringstream os;
      os << "gap " << gap << " between C_0 and " << describe_circle(j + 1, centers[j], radii[j])
         << " is below min_gap " << min_gap;
      throw Error(ErrorCode::OverlapError, os.str());
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      const double gap = std::abs(centers[j] - centers[k]) - radii[j] - radii[k];
      if (!(gap > 0.0) || gap < min_gap) {
        std::ostringstream os;
        os << describe_circle(j + 1, centers[j], radii[j]) << " and "
           << describe_circle(k + 1, centers[k], radii[k]);
        if (gap > 0.0) {
          os << " are separated by " << gap << " < min_gap " << min_gap;
        } else {
          os << " intersect";
        }
        throw Error(ErrorCode::OverlapError, os.str());
      }
    }
  }
  CircularDomain d;
  d.centers_ = std::move(centers);
  d.radii_ = std::move(radii);
  d.min_gap_ = min_gap;
  return d;
}

cplx boundary_point(const CircularDomain& domain, std::size_t j, double t) {
  if (j == 0) return std::polar(1.0, t);
  return domain.center(j) + std::polar(domain.radius(j), -t);
}

cplx boundary_derivative(const CircularDomain& domain, std::size_t j, double t) {
  constexpr cplx i{0.0, 1.0};
  if (j == 0) return i * std::polar(1.0, t);
  return -i * std::polar(domain.radius(j), -t);
}

cplx boundary_second_derivative(const CircularDomain& domain, std::size_t j, double t) {
  if (j == 0) return -std::polar(1.0, t);
  return -std::polar(domain.radius(j), -t);
}

BoundarySampling discretize(const CircularDomain& domain, std::size_t n) {
  if (n < 4 || n % 2 != 0) {
    throw Error(ErrorCode::BadN, "nodes per component must be even and at least 4, got " +
                                     std::to_string(n));
  }
  BoundarySampling s;
  s.domain = domain;
  s.n = n;
  const std::size_t total = domain.component_count() * n;
  s.t.resize(total);
  s.zeta.resize(total);
  s.dzeta.resize(total);
  s.ddzeta.resize(total);
  s.component.resize(total);
  for (std::size_t j = 0; j < domain.component_count(); ++j) {
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t k = s.index(j, p);
      const double t = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n);
      s.t[k] = t;
      s.zeta[k] = boundary_point(domain, j, t);
      s.dzeta[k] = boundary_derivative(domain, j, t);
      s.ddzeta[k] = boundary_second_derivative(domain, j, t);
      s.component[k] = j;
    }
  }
  return s;
}

Location locate(const CircularDomain& domain, cplx point, double margin) {
  const double rho = std::abs(point);
  bool inside = rho < 1.0 - margin;
  double nearest = std::abs(rho - 1.0);
  for (std::size_t j = 0; j < domain.inner_count(); ++j) {
    const double d = std::abs(point - domain.centers()[j]);
    inside = inside && d > domain.radii()[j] + margin;
    nearest = std::min(nearest, std::abs(d - domain.radii()[j]));
  }
  if (inside) return Location::Inside;
  if (nearest <= margin) return Location::NearBoundary;
  return Location::Outside;
}

}  // namespace bubbles
