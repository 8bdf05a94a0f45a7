#include "bubbles/slitmaps.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bubbles/error.hpp"
#include "bubbles/spectral.hpp"

namespace bubbles {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kPoleGuard = 1e-8;

void check_theta(const ThetaSpec& theta, std::size_t components, bool horizontal_outer) {
  if (theta.theta.size() != components) {
    throw Error(ErrorCode::LengthMismatch, "theta needs one angle per boundary component");
  }
  for (double a : theta.theta) {
    if (a != 0.0 && a != kPi / 2.0) {
      throw Error(ErrorCode::InvalidArgument, "slit angles must be 0 or pi/2");
    }
  }
  if (horizontal_outer && theta.theta[0] != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "the outer circle must map to a horizontal line (theta_0 = 0)");
  }
}

void check_quarter_node(std::size_t n, const MapOptions& options) {
  if (n % 4 != 0 && !options.allow_interpolation) {
    throw Error(ErrorCode::BadN, "n must be divisible by 4 so that zeta = i is a node, got " +
                                     std::to_string(n));
  }
}

// Im[e^{-i theta_j} Psi(zeta_j(t))] on the inner circles, 0 on the unit circle.
std::vector<double> gamma_from_psi(const KernelContext& ctx, cplx (*psi)(cplx)) {
  const auto& s = ctx.sampling();
  std::vector<double> gamma(s.size(), 0.0);
  for (std::size_t k = s.n; k < s.size(); ++k) {
    const double th = ctx.theta().theta[s.component[k]];
    gamma[k] = (std::polar(1.0, -th) * psi(s.zeta[k])).imag();
  }
  return gamma;
}

SlitMap assemble(Geometry geometry, KernelContext ctx, std::vector<double> gamma,
                 const MapOptions& options) {
  BieSolution bie = solve_bie(ctx, gamma, options.gmres);
  SlitMap map{geometry, std::move(ctx), std::move(gamma), std::move(bie), {}, {}, {}};
  const auto& s = map.ctx.sampling();
  const std::size_t n = s.n;
  const cplx alpha = map.ctx.alpha();
  map.boundary_phi.resize(s.size());
  map.singular.assign(s.size(), false);
  const auto& f = map.bie.f_boundary;
  const double inf = std::numeric_limits<double>::infinity();

  switch (geometry) {
    case Geometry::FreeSpace:
      for (std::size_t k = 0; k < s.size(); ++k) {
        const cplx d = s.zeta[k] - alpha;
        map.boundary_phi[k] = 1.0 / d + d * f[k];
      }
      break;
    case Geometry::HalfPlane: {
      map.normalization = kI * map.bie.h[0];
      for (std::size_t k = 0; k < s.size(); ++k) {
        const cplx d = s.zeta[k] - alpha;
        if (k < n) {
          // Psi is real on the unit circle: cot(pi/4 - t/2).
          if (4 * k == n) {
            map.singular[k] = true;
            map.boundary_phi[k] = {inf, 0.0};
            continue;
          }
          const double psi = 1.0 / std::tan(kPi / 4.0 - s.t[k] / 2.0);
          map.boundary_phi[k] = psi + d * f[k] + map.normalization;
        } else {
          map.boundary_phi[k] = psi_half_plane(s.zeta[k]) + d * f[k] + map.normalization;
        }
      }
      break;
    }
    case Geometry::Channel: {
      cplx f_at_i;
      if (n % 4 == 0) {
        f_at_i = f[n / 4];
      } else {
        f_at_i = spectral::interpolate(std::span<const cplx>(f).first(n), kPi / 2.0);
      }
      map.normalization = -(kI - alpha) * f_at_i;
      for (std::size_t k = 0; k < s.size(); ++k) {
        const cplx d = s.zeta[k] - alpha;
        if (k < n) {
          // On the unit circle (1+zeta)/(1-zeta) = i cot(t/2).
          if (k == 0 || 2 * k == n) {
            map.singular[k] = true;
            map.boundary_phi[k] = {k == 0 ? inf : -inf, 0.0};
            continue;
          }
          const double cot = 1.0 / std::tan(s.t[k] / 2.0);
          const cplx psi{2.0 / kPi * std::log(std::abs(cot)), cot > 0.0 ? 1.0 : -1.0};
          map.boundary_phi[k] = psi + d * f[k] + map.normalization;
        } else {
          map.boundary_phi[k] = psi_channel(s.zeta[k]) + d * f[k] + map.normalization;
        }
      }
      break;
    }
  }
  return map;
}

}  // namespace

std::string_view to_string(Geometry g) noexcept {
  switch (g) {
    case Geometry::FreeSpace: return "free_space";
    case Geometry::HalfPlane: return "half_plane";
    case Geometry::Channel: return "channel";
  }
  return "unknown";
}

std::optional<Geometry> parse_geometry(std::string_view name) noexcept {
  if (name == "free_space") return Geometry::FreeSpace;
  if (name == "half_plane") return Geometry::HalfPlane;
  if (name == "channel") return Geometry::Channel;
  return std::nullopt;
}

cplx psi_half_plane(cplx zeta) { return kI * (kI + zeta) / (kI - zeta); }

cplx psi_channel(cplx zeta) { return 2.0 / kPi * std::log((1.0 + zeta) / (1.0 - zeta)); }

SlitMap map_free_space(const CircularDomain& domain, std::size_t n, cplx alpha, const ThetaSpec& theta,
                       const MapOptions& options) {
  check_theta(theta, domain.component_count(), false);
  KernelContext ctx(discretize(domain, n), theta, alpha);
  const auto& s = ctx.sampling();
  std::vector<double> gamma(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double th = theta.theta[s.component[k]];
    gamma[k] = (std::polar(1.0, -th) / (s.zeta[k] - alpha)).imag();
  }
  return assemble(Geometry::FreeSpace, std::move(ctx), std::move(gamma), options);
}

SlitMap map_half_plane(const CircularDomain& domain, std::size_t n, cplx alpha, const ThetaSpec& theta,
                       const MapOptions& options) {
  check_theta(theta, domain.component_count(), true);
  check_quarter_node(n, options);
  KernelContext ctx(discretize(domain, n), theta, alpha);
  std::vector<double> gamma = gamma_from_psi(ctx, psi_half_plane);
  return assemble(Geometry::HalfPlane, std::move(ctx), std::move(gamma), options);
}

SlitMap map_channel(const CircularDomain& domain, std::size_t n, cplx alpha, const ThetaSpec& theta,
                    const MapOptions& options) {
  check_theta(theta, domain.component_count(), true);
  check_quarter_node(n, options);
  KernelContext ctx(discretize(domain, n), theta, alpha);
  std::vector<double> gamma = gamma_from_psi(ctx, psi_channel);
  return assemble(Geometry::Channel, std::move(ctx), std::move(gamma), options);
}

SlitMap build_map(Geometry geometry, const CircularDomain& domain, std::size_t n, cplx alpha,
                  const ThetaSpec& theta, const MapOptions& options) {
  switch (geometry) {
    case Geometry::FreeSpace: return map_free_space(domain, n, alpha, theta, options);
    case Geometry::HalfPlane: return map_half_plane(domain, n, alpha, theta, options);
    case Geometry::Channel: return map_channel(domain, n, alpha, theta, options);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown geometry");
}

std::vector<cplx> eval_map(const SlitMap& map, std::span<const cplx> points) {
  const cplx alpha = map.ctx.alpha();
  if (map.geometry == Geometry::FreeSpace) {
    for (const cplx& z : points) {
      if (std::abs(z - alpha) < kPoleGuard) {
        throw Error(ErrorCode::PoleProximity, "evaluation point coincides with the pole alpha");
      }
    }
  }
  const std::vector<cplx> f = cauchy_eval(map.ctx.sampling(), map.bie.f_boundary, points);
  std::vector<cplx> out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const cplx d = points[k] - alpha;
    switch (map.geometry) {
      case Geometry::FreeSpace: out[k] = 1.0 / d + d * f[k]; break;
      case Geometry::HalfPlane: out[k] = psi_half_plane(points[k]) + d * f[k] + map.normalization; break;
      case Geometry::Channel: out[k] = psi_channel(points[k]) + d * f[k] + map.normalization; break;
    }
  }
  return out;
}

}  // namespace bubbles
