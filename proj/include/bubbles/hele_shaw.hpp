#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bubbles/slitmaps.hpp"

namespace bubbles {

struct ScaleTarget {
  std::size_t bubble = 0;
  double area = 0.0;
};

/// Steadily translating bubbles with speed U (far-field speed 1).
/// FreeSpace has m+1 bubbles (component 0 included); HalfPlane and Channel have
/// m bubbles, the images of components 1..m.
struct BubbleProblem {
  Geometry geometry = Geometry::FreeSpace;
  CircularDomain domain;
  double U = 2.0;
  cplx alpha{};
  std::size_t n = 256;
  std::optional<ScaleTarget> scale;
};

struct SolveOptions {
  GmresSettings gmres;
  bool allow_interpolation = false;
  /// Replaces the factor 1 - U in T = (1 - U) Phi_h. Debug only.
  std::optional<double> t_scale;
};

struct MapStats {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> h;
  std::vector<double> h_deviation;
};

struct Diagnostics {
  /// Per bubble: std of Re W and of Im T over the bubble's boundary nodes.
  std::vector<double> std_re_w;
  std::vector<double> std_im_t;
  /// Channel: max |Im z - 1| on the upper half of C_0 and max |Im z + 1| on the lower half.
  std::optional<double> wall_upper;
  std::optional<double> wall_lower;
  /// HalfPlane: max |Im z| on C_0.
  std::optional<double> wall;
  MapStats w_stats;
  MapStats t_stats;
  std::vector<std::string> warnings;
};

struct BubbleSolution {
  BubbleProblem problem;
  SlitMap W;
  /// Horizontal-slit map Phi_h; T = t_scale * Phi_h.
  SlitMap Phi_h;
  double t_scale = 0.0;
  /// Boundary component of each bubble.
  std::vector<std::size_t> components;
  /// z(zeta_j(t_p)) per bubble, already multiplied by scale_factor.
  std::vector<std::vector<cplx>> z_boundary;
  std::vector<double> areas;
  double scale_factor = 1.0;
  Diagnostics diagnostics;

  [[nodiscard]] std::size_t bubble_count() const noexcept { return components.size(); }
  [[nodiscard]] bool converged() const noexcept {
    return diagnostics.w_stats.converged && diagnostics.t_stats.converged;
  }
};

/// Throws InvalidArgument (U <= 1), ScaleNotAllowed, BadIndex.
void check_problem(const BubbleProblem& problem);

BubbleSolution solve_bubbles(const BubbleProblem& problem, const SolveOptions& options = {});

/// z, W and T at every boundary node (unscaled by scale_factor for W and T).
/// Nodes where the maps are singular hold non-finite values.
std::vector<cplx> boundary_z(const BubbleSolution& solution);
std::vector<cplx> boundary_w(const BubbleSolution& solution);
std::vector<cplx> boundary_t(const BubbleSolution& solution);

/// Interior evaluation; z includes scale_factor.
std::vector<cplx> eval_z(const BubbleSolution& solution, std::span<const cplx> points);
std::vector<cplx> eval_t(const BubbleSolution& solution, std::span<const cplx> points);

/// Green's theorem area of one closed curve sampled at t_p = 2 pi p / n.
double curve_area(std::span<const cplx> curve);
std::vector<double> bubble_areas(const BubbleSolution& solution);

BubbleSolution rescale_to_area(const BubbleSolution& solution, std::size_t bubble, double target_area);

Diagnostics residual_report(const BubbleSolution& solution);

/// Pairs (segment a, segment b) of a closed polyline that cross.
std::vector<std::pair<std::size_t, std::size_t>> self_intersections(std::span<const cplx> curve);

struct Window {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  [[nodiscard]] bool contains(cplx z) const noexcept {
    return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin && z.imag() <= ymax;
  }
};

struct StreamlineOptions {
  std::size_t grid = 400;
  /// Explicit levels of Im T; when empty, `count` equispaced levels are used.
  std::vector<double> levels;
  std::size_t count = 24;
  double margin = 0.02;
  std::optional<Window> window;
};

struct Streamline {
  double level = 0.0;
  std::vector<cplx> zeta;
  std::vector<cplx> z;
};

/// Default viewing window around the bubbles.
Window default_window(const BubbleSolution& solution);

/// Levels actually used for the given options.
std::vector<double> streamline_levels(const BubbleSolution& solution, const StreamlineOptions& options);

/// Level curves of Im T traced in the zeta-plane by marching squares and mapped
/// through z. Throws EmptyGrid when no grid node is interior.
std::vector<Streamline> streamlines(const BubbleSolution& solution, const StreamlineOptions& options = {});

}  // namespace bubbles
