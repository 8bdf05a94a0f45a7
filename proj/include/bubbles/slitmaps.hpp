#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bubbles/bie.hpp"

namespace bubbles {

enum class Geometry { FreeSpace, HalfPlane, Channel };

std::string_view to_string(Geometry g) noexcept;
std::optional<Geometry> parse_geometry(std::string_view name) noexcept;

struct MapOptions {
  GmresSettings gmres;
  /// Read f(i) from the trigonometric interpolant when i is not a node
  /// (channel map with n not divisible by 4).
  bool allow_interpolation = false;
};

/// Canonical conformal map of the circular domain onto a slit domain:
///   FreeSpace  Phi = 1/(zeta-alpha) + (zeta-alpha) f
///   HalfPlane  Phi = Psi + (zeta-alpha) f + i h_0,        Psi = i(i+zeta)/(i-zeta)
///   Channel    Phi = Psi + (zeta-alpha) f - (i-alpha) f(i), Psi = (2/pi) log((1+zeta)/(1-zeta))
struct SlitMap {
  Geometry geometry = Geometry::FreeSpace;
  KernelContext ctx;
  std::vector<double> gamma;
  BieSolution bie;
  /// Additive constant of the formula above (0, i h_0 or -(i-alpha) f(i)).
  cplx normalization{};
  std::vector<cplx> boundary_phi;
  /// Nodes mapped to infinity (zeta = i on C_0 for HalfPlane, zeta = +-1 for
  /// Channel); boundary_phi holds a non-finite value there.
  std::vector<bool> singular;
};

SlitMap map_free_space(const CircularDomain& domain, std::size_t n, cplx alpha, const ThetaSpec& theta,
                       const MapOptions& options = {});
SlitMap map_half_plane(const CircularDomain& domain, std::size_t n, cplx alpha, const ThetaSpec& theta,
                       const MapOptions& options = {});
SlitMap map_channel(const CircularDomain& domain, std::size_t n, cplx alpha, const ThetaSpec& theta,
                    const MapOptions& options = {});

SlitMap build_map(Geometry geometry, const CircularDomain& domain, std::size_t n, cplx alpha,
                  const ThetaSpec& theta, const MapOptions& options = {});

/// Phi at interior points (Cauchy formula for f). Throws PointOutside, PoleProximity.
std::vector<cplx> eval_map(const SlitMap& map, std::span<const cplx> points);

/// Closed-form parts of the half-plane and channel maps.
cplx psi_half_plane(cplx zeta);
cplx psi_channel(cplx zeta);

}  // namespace bubbles
