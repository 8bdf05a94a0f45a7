#include "bubbles/hele_shaw.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "bubbles/error.hpp"
#include "bubbles/parallel.hpp"
#include "bubbles/spectral.hpp"

namespace bubbles {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double population_std(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

MapStats stats_of(const SlitMap& map) {
  return MapStats{map.bie.gmres_iterations, map.bie.residual_norm, map.bie.converged, map.bie.h,
                  map.bie.h_deviation};
}

std::vector<double> component_values(const SlitMap& map, std::size_t comp, double scale, bool imag) {
  const std::size_t n = map.ctx.sampling().n;
  std::vector<double> out(n);
  for (std::size_t p = 0; p < n; ++p) {
    const cplx v = scale * map.boundary_phi[comp * n + p];
    out[p] = imag ? v.imag() : v.real();
  }
  return out;
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

std::vector<std::size_t> bubble_components(const BubbleProblem& problem) {
  std::vector<std::size_t> comps;
  const std::size_t first = problem.geometry == Geometry::FreeSpace ? 0 : 1;
  for (std::size_t c = first; c < problem.domain.component_count(); ++c) comps.push_back(c);
  return comps;
}

void fill_curves(BubbleSolution& sol) {
  const std::vector<cplx> z = boundary_z(sol);
  const std::size_t n = sol.problem.n;
  sol.z_boundary.clear();
  for (std::size_t c : sol.components) {
    sol.z_boundary.emplace_back(z.begin() + static_cast<std::ptrdiff_t>(c * n),
                                z.begin() + static_cast<std::ptrdiff_t>((c + 1) * n));
  }
}

}  // namespace

void check_problem(const BubbleProblem& problem) {
  if (!(problem.U > 1.0) || !std::isfinite(problem.U)) {
    throw Error(ErrorCode::InvalidArgument, "bubble speed U must be a finite number greater than 1");
  }
  if (problem.scale) {
    if (problem.geometry == Geometry::Channel) {
      throw Error(ErrorCode::ScaleNotAllowed,
                  "channel bubbles cannot be rescaled: the channel width fixes the length scale");
    }
    const std::size_t count = bubble_components(problem).size();
    if (problem.scale->bubble >= count) {
      throw Error(ErrorCode::BadIndex, "scale bubble index " + std::to_string(problem.scale->bubble) +
                                           " is out of range (" + std::to_string(count) + " bubbles)");
    }
    if (!(problem.scale->area > 0.0) || !std::isfinite(problem.scale->area)) {
      throw Error(ErrorCode::InvalidArgument, "scale area must be positive");
    }
  }
}

BubbleSolution solve_bubbles(const BubbleProblem& problem, const SolveOptions& options) {
  check_problem(problem);
  const std::size_t comps = problem.domain.component_count();
  ThetaSpec vertical = ThetaSpec::uniform(comps, kPi / 2.0);
  if (problem.geometry != Geometry::FreeSpace) vertical.theta[0] = 0.0;
  const ThetaSpec horizontal = ThetaSpec::uniform(comps, 0.0);
  const MapOptions map_options{options.gmres, options.allow_interpolation};

  SlitMap w = build_map(problem.geometry, problem.domain, problem.n, problem.alpha, vertical, map_options);
  SlitMap h = build_map(problem.geometry, problem.domain, problem.n, problem.alpha, horizontal, map_options);
  BubbleSolution sol{problem, std::move(w), std::move(h), options.t_scale.value_or(1.0 - problem.U),
                     bubble_components(problem), {}, {}, 1.0, {}};
  sol.problem.scale.reset();
  fill_curves(sol);
  sol.areas = bubble_areas(sol);
  sol.diagnostics = residual_report(sol);
  if (problem.scale) {
    sol = rescale_to_area(sol, problem.scale->bubble, problem.scale->area);
    sol.problem.scale = problem.scale;
  }
  return sol;
}

std::vector<cplx> boundary_w(const BubbleSolution& solution) { return solution.W.boundary_phi; }

std::vector<cplx> boundary_t(const BubbleSolution& solution) {
  std::vector<cplx> t(solution.Phi_h.boundary_phi.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = solution.t_scale * solution.Phi_h.boundary_phi[k];
  return t;
}

std::vector<cplx> boundary_z(const BubbleSolution& solution) {
  const auto& w = solution.W.boundary_phi;
  const auto& h = solution.Phi_h.boundary_phi;
  const double s = solution.scale_factor / solution.problem.U;
  std::vector<cplx> z(w.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (solution.W.singular[k] || solution.Phi_h.singular[k]) {
      z[k] = {kInf, kInf};
    } else {
      z[k] = s * (w[k] - solution.t_scale * h[k]);
    }
  }
  return z;
}

std::vector<cplx> eval_t(const BubbleSolution& solution, std::span<const cplx> points) {
  std::vector<cplx> t = eval_map(solution.Phi_h, points);
  for (cplx& v : t) v *= solution.t_scale;
  return t;
}

std::vector<cplx> eval_z(const BubbleSolution& solution, std::span<const cplx> points) {
  const std::vector<cplx> w = eval_map(solution.W, points);
  const std::vector<cplx> t = eval_t(solution, points);
  const double s = solution.scale_factor / solution.problem.U;
  std::vector<cplx> z(points.size());
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = s * (w[k] - t[k]);
  return z;
}

double curve_area(std::span<const cplx> curve) {
  const std::vector<cplx> dz = spectral::derivative(curve);
  cplx sum{};
  for (std::size_t p = 0; p < curve.size(); ++p) sum += std::conj(curve[p]) * dz[p];
  const double weight = 2.0 * kPi / static_cast<double>(curve.size());
  return (cplx{0.0, 0.5} * sum * weight).real();
}

std::vector<double> bubble_areas(const BubbleSolution& solution) {
  std::vector<double> areas;
  areas.reserve(solution.z_boundary.size());
  for (const auto& curve : solution.z_boundary) areas.push_back(curve_area(curve));
  return areas;
}

BubbleSolution rescale_to_area(const BubbleSolution& solution, std::size_t bubble, double target_area) {
  if (solution.problem.geometry == Geometry::Channel) {
    throw Error(ErrorCode::ScaleNotAllowed,
                "channel bubbles cannot be rescaled: the channel width fixes the length scale");
  }
  if (bubble >= solution.bubble_count()) {
    throw Error(ErrorCode::BadIndex, "bubble index " + std::to_string(bubble) + " is out of range (" +
                                         std::to_string(solution.bubble_count()) + " bubbles)");
  }
  if (!(target_area > 0.0) || !(solution.areas[bubble] > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "rescaling needs positive current and target areas");
  }
  BubbleSolution out = solution;
  const double s = std::sqrt(target_area / solution.areas[bubble]);
  if (s == 1.0) return out;
  out.scale_factor *= s;
  for (auto& curve : out.z_boundary) {
    for (cplx& z : curve) z *= s;
  }
  for (double& a : out.areas) a *= s * s;
  out.diagnostics = residual_report(out);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> self_intersections(std::span<const cplx> curve) {
  const std::size_t n = curve.size();
  std::vector<std::pair<std::size_t, std::size_t>> hits;
  if (n < 4) return hits;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto lo = [&](std::size_t i) { return std::min(curve[i].real(), curve[(i + 1) % n].real()); };
  auto hi = [&](std::size_t i) { return std::max(curve[i].real(), curve[(i + 1) % n].real()); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lo(a) < lo(b); });
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = order[a];
    const double reach = hi(i);
    for (std::size_t b = a + 1; b < n && lo(order[b]) <= reach; ++b) {
      const std::size_t j = order[b];
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap <= 1 || gap == n - 1) continue;
      if (segments_cross(curve[i], curve[(i + 1) % n], curve[j], curve[(j + 1) % n])) {
        hits.emplace_back(std::min(i, j), std::max(i, j));
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

Diagnostics residual_report(const BubbleSolution& solution) {
  Diagnostics d;
  const std::size_t n = solution.problem.n;
  for (std::size_t c : solution.components) {
    d.std_re_w.push_back(population_std(component_values(solution.W, c, 1.0, false)));
    d.std_im_t.push_back(population_std(component_values(solution.Phi_h, c, solution.t_scale, true)));
  }
  const std::vector<cplx> z = boundary_z(solution);
  if (solution.problem.geometry == Geometry::Channel) {
    double up = 0.0, down = 0.0;
    for (std::size_t p = 1; p < n; ++p) {
      if (2 * p == n || !std::isfinite(z[p].imag())) continue;
      if (2 * p < n) {
        up = std::max(up, std::abs(z[p].imag() - 1.0));
      } else {
        down = std::max(down, std::abs(z[p].imag() + 1.0));
      }
    }
    d.wall_upper = up;
    d.wall_lower = down;
  } else if (solution.problem.geometry == Geometry::HalfPlane) {
    double wall = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      if (!std::isfinite(z[p].imag())) continue;
      wall = std::max(wall, std::abs(z[p].imag()));
    }
    d.wall = wall;
  }
  d.w_stats = stats_of(solution.W);
  d.t_stats = stats_of(solution.Phi_h);

  if (!d.w_stats.converged) d.warnings.push_back("vertical-slit map: GMRES did not converge");
  if (!d.t_stats.converged) d.warnings.push_back("horizontal-slit map: GMRES did not converge");
  for (std::size_t b = 0; b < solution.z_boundary.size(); ++b) {
    const auto& curve = solution.z_boundary[b];
    const auto hits = self_intersections(curve);
    if (!hits.empty()) {
      std::ostringstream os;
      os << "SelfIntersection: bubble " << b << " crosses itself (" << hits.size()
         << " segment pairs, first at segments " << hits.front().first << " and " << hits.front().second
         << ")";
      d.warnings.push_back(os.str());
    }
    const auto geometry = solution.problem.geometry;
    for (const cplx& z : curve) {
      if (geometry == Geometry::Channel && !(std::abs(z.imag()) < 1.0)) {
        d.warnings.push_back("bubble " + std::to_string(b) + " leaves the channel");
        break;
      }
      if (geometry == Geometry::HalfPlane && !(z.imag() > 0.0)) {
        d.warnings.push_back("bubble " + std::to_string(b) + " leaves the upper half-plane");
        break;
      }
    }
  }
  return d;
}

Window default_window(const BubbleSolution& solution) {
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const auto& curve : solution.z_boundary) {
    for (const cplx& z : curve) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
      xmin = std::min(xmin, z.real());
      xmax = std::max(xmax, z.real());
      ymin = std::min(ymin, z.imag());
      ymax = std::max(ymax, z.imag());
    }
  }
  if (xmin > xmax) xmin = xmax = ymin = ymax = 0.0;
  const double pad = std::max({xmax - xmin, ymax - ymin, 0.5});
  Window w{xmin - pad, xmax + pad, ymin - pad, ymax + pad};
  if (solution.problem.geometry == Geometry::Channel) {
    w.ymin = -1.0;
    w.ymax = 1.0;
  } else if (solution.problem.geometry == Geometry::HalfPlane) {
    w.ymin = 0.0;
  }
  return w;
}

namespace {

struct GridField {
  std::size_t size = 0;
  std::vector<cplx> zeta;
  std::vector<double> value;
  std::vector<char> valid;
  double lo = 0.0, hi = 0.0;
};

GridField sample_grid(const BubbleSolution& sol, const StreamlineOptions& options, const Window& window) {
  if (options.grid < 2) throw Error(ErrorCode::InvalidArgument, "streamline grid needs at least 2 points");
  if (!(options.margin > 0.0)) throw Error(ErrorCode::InvalidArgument, "streamline margin must be positive");
  GridField g;
  const std::size_t N = options.grid;
  g.size = N;
  g.zeta.resize(N * N);
  g.value.assign(N * N, 0.0);
  g.valid.assign(N * N, 0);
  const double step = 2.0 / static_cast<double>(N - 1);
  std::vector<cplx> inside;
  std::vector<std::size_t> where;
  const auto& domain = sol.problem.domain;
  const bool free_space = sol.problem.geometry == Geometry::FreeSpace;
  const cplx alpha = sol.problem.alpha;
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t i = 0; i < N; ++i) {
      const cplx z{-1.0 + step * static_cast<double>(i), -1.0 + step * static_cast<double>(j)};
      const std::size_t k = j * N + i;
      g.zeta[k] = z;
      if (locate(domain, z, options.margin) != Location::Inside) continue;
      if (free_space && std::abs(z - alpha) <= options.margin) continue;
      inside.push_back(z);
      where.push_back(k);
    }
  }
  if (inside.empty()) {
    throw Error(ErrorCode::EmptyGrid, "no streamline grid node lies inside the domain with the given margin");
  }
  // Nodes whose image is far outside the window (near the pole of z) would only
  // stretch the level range; keep a band of 25% around the window.
  const double cx = 0.5 * (window.xmin + window.xmax), hx = 0.625 * (window.xmax - window.xmin);
  const double cy = 0.5 * (window.ymin + window.ymax), hy = 0.625 * (window.ymax - window.ymin);
  const Window band{cx - hx, cx + hx, cy - hy, cy + hy};
  const std::vector<cplx> w = eval_map(sol.W, inside);
  const std::vector<cplx> t = eval_t(sol, inside);
  const double s = sol.scale_factor / sol.problem.U;
  g.lo = kInf;
  g.hi = -kInf;
  for (std::size_t q = 0; q < inside.size(); ++q) {
    if (!band.contains(s * (w[q] - t[q]))) continue;
    g.valid[where[q]] = 1;
    g.value[where[q]] = t[q].imag();
    g.lo = std::min(g.lo, t[q].imag());
    g.hi = std::max(g.hi, t[q].imag());
  }
  if (g.lo > g.hi) {
    throw Error(ErrorCode::EmptyGrid, "no interior streamline grid node maps into the viewing window");
  }
  return g;
}

std::vector<double> levels_for(const BubbleSolution& sol, const StreamlineOptions& options,
                               const GridField& g) {
  if (!options.levels.empty()) return options.levels;
  std::vector<double> slits;
  const std::size_t n = sol.problem.n;
  for (std::size_t c : sol.components) {
    const auto v = component_values(sol.Phi_h, c, sol.t_scale, true);
    double mean = 0.0;
    for (double x : v) mean += x;
    slits.push_back(mean / static_cast<double>(n));
  }
  if (sol.problem.geometry == Geometry::Channel) {
    slits.push_back(sol.t_scale);
    slits.push_back(-sol.t_scale);
  } else if (sol.problem.geometry == Geometry::HalfPlane) {
    slits.push_back(0.0);
  }
  const double cell = (g.hi - g.lo) / static_cast<double>(g.size - 1);
  const double spacing = (g.hi - g.lo) / static_cast<double>(options.count + 1);
  std::vector<double> levels;
  for (std::size_t k = 1; k <= options.count; ++k) {
    const double level = g.lo + spacing * static_cast<double>(k);
    const bool near_slit =
        std::any_of(slits.begin(), slits.end(), [&](double s) { return std::abs(level - s) < cell; });
    if (!near_slit) levels.push_back(level);
  }
  return levels;
}

struct Crossing {
  std::size_t a = 0, b = 0;  // grid nodes at the edge ends
  double s = 0.0;            // linear estimate of the crossing fraction from a to b
};

// Marching squares on one level: returns chains of edge crossings.
std::vector<std::vector<Crossing>> trace_level(const GridField& g, double level) {
  const std::size_t N = g.size;
  const std::size_t horizontal = N * (N - 1);
  std::unordered_map<std::size_t, std::size_t> vertex_of_edge;
  std::vector<Crossing> vertices;
  std::vector<std::array<std::size_t, 2>> links;
  std::vector<std::size_t> degree;

  auto above = [&](std::size_t k) { return g.value[k] >= level; };
  auto vertex = [&](std::size_t edge, std::size_t a, std::size_t b) {
    auto it = vertex_of_edge.find(edge);
    if (it != vertex_of_edge.end()) return it->second;
    const double va = g.value[a], vb = g.value[b];
    vertices.push_back(Crossing{a, b, (level - va) / (vb - va)});
    links.push_back({0, 0});
    degree.push_back(0);
    vertex_of_edge.emplace(edge, vertices.size() - 1);
    return vertices.size() - 1;
  };
  auto connect = [&](std::size_t u, std::size_t v) {
    links[u][degree[u]++] = v;
    links[v][degree[v]++] = u;
  };

  for (std::size_t j = 0; j + 1 < N; ++j) {
    for (std::size_t i = 0; i + 1 < N; ++i) {
      const std::size_t c0 = j * N + i, c1 = c0 + 1, c2 = c0 + N + 1, c3 = c0 + N;
      if (!g.valid[c0] || !g.valid[c1] || !g.valid[c2] || !g.valid[c3]) continue;
      const int mask = (above(c0) ? 1 : 0) | (above(c1) ? 2 : 0) | (above(c2) ? 4 : 0) | (above(c3) ? 8 : 0);
      if (mask == 0 || mask == 15) continue;
      // Edges: bottom c0-c1, right c1-c2, top c3-c2, left c0-c3.
      const std::size_t e[4] = {j * (N - 1) + i, horizontal + j * N + i + 1, (j + 1) * (N - 1) + i,
                                horizontal + j * N + i};
      const std::size_t ends[4][2] = {{c0, c1}, {c1, c2}, {c3, c2}, {c0, c3}};
      auto v = [&](int k) { return vertex(e[k], ends[k][0], ends[k][1]); };
      const bool center =
          0.25 * (g.value[c0] + g.value[c1] + g.value[c2] + g.value[c3]) >= level;
      switch (mask) {
        case 1: case 14: connect(v(3), v(0)); break;
        case 2: case 13: connect(v(0), v(1)); break;
        case 4: case 11: connect(v(1), v(2)); break;
        case 8: case 7: connect(v(2), v(3)); break;
        case 3: case 12: connect(v(3), v(1)); break;
        case 6: case 9: connect(v(0), v(2)); break;
        case 5:
          if (center) {
            connect(v(0), v(1));
            connect(v(2), v(3));
          } else {
            connect(v(3), v(0));
            connect(v(1), v(2));
          }
          break;
        case 10:
          if (center) {
            connect(v(3), v(0));
            connect(v(1), v(2));
          } else {
            connect(v(0), v(1));
            connect(v(2), v(3));
          }
          break;
        default: break;
      }
    }
  }

  std::vector<std::vector<Crossing>> chains;
  std::vector<char> used(vertices.size(), 0);
  auto walk = [&](std::size_t start) {
    std::vector<Crossing> chain;
    std::size_t prev = vertices.size(), cur = start;
    while (true) {
      used[cur] = 1;
      chain.push_back(vertices[cur]);
      std::size_t next = vertices.size();
      for (std::size_t d = 0; d < degree[cur]; ++d) {
        const std::size_t cand = links[cur][d];
        if (cand != prev && !used[cand]) {
          next = cand;
          break;
        }
      }
      if (next == vertices.size()) {
        // Closed loop: repeat the start vertex.
        if (degree[cur] == 2 && chain.size() > 2 &&
            (links[cur][0] == start || links[cur][1] == start)) {
          chain.push_back(vertices[start]);
        }
        break;
      }
      prev = cur;
      cur = next;
    }
    if (chain.size() >= 2) chains.push_back(std::move(chain));
  };
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (!used[v] && degree[v] == 1) walk(v);
  }
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (!used[v]) walk(v);
  }
  return chains;
}

}  // namespace

std::vector<double> streamline_levels(const BubbleSolution& solution, const StreamlineOptions& options) {
  const Window window = options.window.value_or(default_window(solution));
  const GridField g = sample_grid(solution, options, window);
  return levels_for(solution, options, g);
}

std::vector<Streamline> streamlines(const BubbleSolution& solution, const StreamlineOptions& options) {
  const Window window = options.window.value_or(default_window(solution));
  const GridField g = sample_grid(solution, options, window);
  const std::vector<double> levels = levels_for(solution, options, g);

  struct Pending {
    double level;
    std::vector<Crossing> chain;
  };
  std::vector<Pending> traced;
  for (double level : levels) {
    for (auto& chain : trace_level(g, level)) traced.push_back({level, std::move(chain)});
  }

  // Regula falsi (Illinois) refinement of every crossing along its grid edge.
  struct Bracket {
    cplx za, zb;
    double fa, fb;
    double s;
    int side = 0;
  };
  std::vector<Bracket> brackets;
  for (const auto& p : traced) {
    for (const auto& c : p.chain) {
      brackets.push_back({g.zeta[c.a], g.zeta[c.b], g.value[c.a] - p.level, g.value[c.b] - p.level, c.s, 0});
    }
  }
  std::vector<cplx> points(brackets.size());
  auto place = [&] {
    for (std::size_t k = 0; k < brackets.size(); ++k) {
      const auto& b = brackets[k];
      points[k] = b.za + b.s * (b.zb - b.za);
    }
  };
  std::vector<double> level_of(brackets.size());
  {
    std::size_t k = 0;
    for (const auto& p : traced) {
      for (std::size_t q = 0; q < p.chain.size(); ++q) level_of[k++] = p.level;
    }
  }
  place();
  for (int iter = 0; iter < 4 && !points.empty(); ++iter) {
    const std::vector<cplx> t = eval_t(solution, points);
    for (std::size_t k = 0; k < brackets.size(); ++k) {
      auto& b = brackets[k];
      const double f = t[k].imag() - level_of[k];
      const cplx z = points[k];
      if (f == 0.0) {
        b.za = b.zb = z;
        b.fa = b.fb = 0.0;
        b.s = 0.0;
        continue;
      }
      if ((f > 0.0) == (b.fa > 0.0)) {
        b.za = z;
        b.fa = f;
        if (b.side == -1) b.fb *= 0.5;
        b.side = -1;
      } else {
        b.zb = z;
        b.fb = f;
        if (b.side == 1) b.fa *= 0.5;
        b.side = 1;
      }
      b.s = b.fa == b.fb ? 0.0 : b.fa / (b.fa - b.fb);
    }
    place();
  }

  const std::vector<cplx> zs = points.empty() ? std::vector<cplx>{} : eval_z(solution, points);
  std::vector<Streamline> out;
  std::size_t k = 0;
  for (const auto& p : traced) {
    Streamline cur{p.level, {}, {}};
    auto flush = [&] {
      if (cur.z.size() >= 2) out.push_back(cur);
      cur.z.clear();
      cur.zeta.clear();
    };
    for (std::size_t q = 0; q < p.chain.size(); ++q, ++k) {
      if (window.contains(zs[k])) {
        cur.z.push_back(zs[k]);
        cur.zeta.push_back(points[k]);
      } else {
        flush();
      }
    }
    flush();
  }
  return out;
}

}  // namespace bubbles
