#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>

#include "bubbles/error.hpp"
#include "output.hpp"

namespace bubbles::app {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

SolveOptions solve_options(const GmresSettings& gmres, const CommandOptions& options) {
  SolveOptions s;
  s.gmres = gmres;
  s.t_scale = options.t_lambda;
  return s;
}

std::filesystem::path output_dir(const RunConfig& config, const CommandOptions& options) {
  return options.out_dir.value_or(std::filesystem::path(config.outputs.directory));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

int run_solve(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const auto t0 = Clock::now();
  const BubbleSolution sol = solve_bubbles(make_problem(config), solve_options(config.solver, options));
  std::vector<Streamline> lines;
  if (config.streamlines) {
    StreamlineOptions so;
    so.grid = config.streamlines->grid;
    so.count = config.streamlines->count;
    so.margin = config.streamlines->margin;
    lines = streamlines(sol, so);
  }
  const double wall_ms = ms_since(t0);

  const auto dir = output_dir(config, options);
  std::filesystem::create_directories(dir);
  if (config.outputs.wants("csv")) {
    write_text(dir / "bubbles.csv", bubbles_csv(sol));
    if (config.streamlines) write_text(dir / "streamlines.csv", streamlines_csv(lines));
  }
  if (config.outputs.wants("json")) {
    write_text(dir / "summary.json", summary_json(config, sol, wall_ms, lines.size()).dump(2) + "\n");
  }
  if (config.outputs.wants("svg")) write_text(dir / "bubbles.svg", svg_plot(sol, lines));

  if (!options.quiet) {
    const Diagnostics& d = sol.diagnostics;
    log << to_string(config.geometry) << ": " << sol.bubble_count() << " bubble(s), U = " << config.U
        << ", n = " << config.n << '\n';
    log << "  GMRES vertical " << d.w_stats.iterations << " it (residual " << sci(d.w_stats.residual)
        << "), horizontal " << d.t_stats.iterations << " it (residual " << sci(d.t_stats.residual) << ")\n";
    for (std::size_t b = 0; b < sol.bubble_count(); ++b) {
      log << "  bubble " << b << ": area " << format_number(sol.areas[b]) << ", std Re W "
          << sci(d.std_re_w[b]) << ", std Im T " << sci(d.std_im_t[b]) << '\n';
    }
    if (d.wall) log << "  wall |Im z| " << sci(*d.wall) << '\n';
    if (d.wall_upper) {
      log << "  walls |Im z - 1| " << sci(*d.wall_upper) << ", |Im z + 1| " << sci(*d.wall_lower) << '\n';
    }
    for (const auto& w : d.warnings) log << "  warning: " << w << '\n';
    log << "  outputs in " << dir.string() << " (" << wall_ms << " ms)\n";
  }
  return sol.converged() ? kSuccess : kNonConvergence;
}

int run_bench(const BenchConfig& config, const CommandOptions& options, std::ostream& log) {
  const RunConfig& base = config.base;
  const BubbleProblem problem = make_problem(base);
  const std::size_t comps = problem.domain.component_count();
  ThetaSpec vertical = ThetaSpec::uniform(comps, std::numbers::pi / 2.0);
  if (problem.geometry != Geometry::FreeSpace) vertical.theta[0] = 0.0;
  const ThetaSpec horizontal = ThetaSpec::uniform(comps, 0.0);
  const MapOptions map_options{base.solver, false};

  std::string csv =
      "n,unknowns,vertical_ms,horizontal_ms,vertical_iterations,horizontal_iterations,vertical_residual,"
      "horizontal_residual\n";
  bool converged = true;
  if (!options.quiet) {
    std::fprintf(stdout, "%8s %9s %12s %12s %6s %6s %11s %11s\n", "n", "unknowns", "vert_ms", "horiz_ms",
                 "it_v", "it_h", "res_v", "res_h");
  }
  for (std::size_t n : config.n_values) {
    std::vector<double> tv, th;
    int it_v = 0, it_h = 0;
    double res_v = 0.0, res_h = 0.0;
    for (int r = 0; r < config.repetitions; ++r) {
      auto t0 = Clock::now();
      const SlitMap w = build_map(problem.geometry, problem.domain, n, problem.alpha, vertical, map_options);
      tv.push_back(ms_since(t0));
      t0 = Clock::now();
      const SlitMap h = build_map(problem.geometry, problem.domain, n, problem.alpha, horizontal, map_options);
      th.push_back(ms_since(t0));
      it_v = w.bie.gmres_iterations;
      it_h = h.bie.gmres_iterations;
      res_v = w.bie.residual_norm;
      res_h = h.bie.residual_norm;
      converged = converged && w.bie.converged && h.bie.converged;
    }
    const double mv = median(tv), mh = median(th);
    csv += std::to_string(n) + ',' + std::to_string(n * comps) + ',' + format_number(mv) + ',' +
           format_number(mh) + ',' + std::to_string(it_v) + ',' + std::to_string(it_h) + ',' +
           format_number(res_v) + ',' + format_number(res_h) + '\n';
    if (!options.quiet) {
      std::fprintf(stdout, "%8zu %9zu %12.2f %12.2f %6d %6d %11.2e %11.2e\n", n, n * comps, mv, mh, it_v,
                   it_h, res_v, res_h);
    }
  }
  const auto dir = output_dir(base, options);
  std::filesystem::create_directories(dir);
  write_text(dir / "bench.csv", csv);
  if (!options.quiet) log << "bench table written to " << (dir / "bench.csv").string() << '\n';
  return converged ? kSuccess : kNonConvergence;
}

namespace {

struct Check {
  std::string name;
  std::function<std::pair<bool, std::string>()> run;
};

double extent_ratio(const std::vector<cplx>& c) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const cplx& z : c) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  return (xmax - xmin) / (ymax - ymin);
}

CircularDomain two_bubble_domain() { return make_domain({0.0}, {0.4}); }

}  // namespace

int run_validate(const CommandOptions& options, std::ostream& log) {
  const SolveOptions so = solve_options({}, options);
  const double pi = std::numbers::pi;
  const cplx two_bubble_alpha{0.0, std::sqrt(0.4)};

  std::vector<Check> checks;
  checks.push_back({"unit_disk_vertical_map", [&] {
                      const SlitMap m = map_free_space(make_domain({}, {}), 64, 0.0,
                                                       ThetaSpec::uniform(1, pi / 2.0));
                      double err = 0.0;
                      const auto& z = m.ctx.sampling().zeta;
                      for (std::size_t k = 0; k < z.size(); ++k) {
                        err = std::max(err, std::abs(m.boundary_phi[k] - (1.0 / z[k] - z[k])));
                      }
                      return std::pair{err < 1e-12, "max error " + sci(err)};
                    }});
  checks.push_back({"ellipse_aspect_ratio", [&] {
                      double worst = 0.0;
                      for (double U : {1.5, 2.0, 3.0, 4.0}) {
                        BubbleProblem p;
                        p.domain = make_domain({}, {});
                        p.U = U;
                        p.n = 256;
                        const auto s = solve_bubbles(p, so);
                        worst = std::max(worst, std::abs(extent_ratio(s.z_boundary[0]) - (U - 1.0)));
                      }
                      return std::pair{worst < 1e-8, "max |ratio - (U-1)| " + sci(worst)};
                    }});
  checks.push_back({"ellipse_area_U3", [&] {
                      BubbleProblem p;
                      p.domain = make_domain({}, {});
                      p.U = 3.0;
                      p.n = 256;
                      const auto s = solve_bubbles(p, so);
                      const double err = std::abs(s.areas[0] - 8.0 * pi / 9.0);
                      return std::pair{err < 1e-10, "area error " + sci(err)};
                    }});
  checks.push_back({"two_bubble_equal_area", [&] {
                      BubbleProblem p;
                      p.domain = two_bubble_domain();
                      p.alpha = two_bubble_alpha;
                      p.U = 2.0;
                      p.n = 512;
                      p.scale = ScaleTarget{0, pi};
                      const auto s = solve_bubbles(p, so);
                      const double err = std::max(std::abs(s.areas[0] - pi), std::abs(s.areas[1] - pi));
                      return std::pair{err < 1e-10 && s.diagnostics.warnings.empty(),
                                       "max |A - pi| " + sci(err)};
                    }});
  checks.push_back({"channel_wall_residual", [&] {
                      BubbleProblem p;
                      p.geometry = Geometry::Channel;
                      p.domain = make_domain({{0.0, 0.03}, {0.6, 0.15}}, {0.2, 0.25});
                      p.alpha = {-0.5, 0.0};
                      p.U = 2.0;
                      p.n = 512;
                      const auto s = solve_bubbles(p, so);
                      const auto& d = s.diagnostics;
                      const double wall = std::max(*d.wall_upper, *d.wall_lower);
                      double slit = 0.0;
                      for (double v : d.std_re_w) slit = std::max(slit, v);
                      for (double v : d.std_im_t) slit = std::max(slit, v);
                      return std::pair{wall < 1e-8 && slit < 1e-8,
                                       "wall " + sci(wall) + ", slit std " + sci(slit)};
                    }});
  checks.push_back({"half_plane_wall_residual", [&] {
                      BubbleProblem p;
                      p.geometry = Geometry::HalfPlane;
                      p.domain = make_domain({{0.0, 0.5009}, {0.0, 0.3277}}, {0.0558, 0.1003});
                      p.U = 2.0;
                      p.n = 512;
                      const auto s = solve_bubbles(p, so);
                      const double wall = *s.diagnostics.wall;
                      bool above = true;
                      for (const auto& c : s.z_boundary) {
                        for (const cplx& z : c) above = above && z.imag() > 0.0;
                      }
                      return std::pair{wall < 1e-8 && above, "wall " + sci(wall)};
                    }});
  checks.push_back({"convergence_ladder", [&] {
                      const ThetaSpec theta = ThetaSpec::uniform(2, pi / 2.0);
                      const SlitMap ref = map_free_space(two_bubble_domain(), 1024, two_bubble_alpha, theta);
                      std::vector<double> errs;
                      for (std::size_t n : {32, 64, 128}) {
                        const SlitMap m = map_free_space(two_bubble_domain(), n, two_bubble_alpha, theta);
                        double err = 0.0;
                        const std::size_t stride = 1024 / n;
                        for (std::size_t c = 0; c < 2; ++c) {
                          for (std::size_t q = 0; q < n; ++q) {
                            err = std::max(err, std::abs(m.boundary_phi[c * n + q] -
                                                         ref.boundary_phi[c * 1024 + q * stride]));
                          }
                        }
                        errs.push_back(err);
                      }
                      const bool ok = errs[1] * 10.0 <= errs[0] && errs[2] * 10.0 <= errs[1] && errs[2] < 1e-11;
                      return std::pair{ok, "errors " + sci(errs[0]) + " " + sci(errs[1]) + " " + sci(errs[2])};
                    }});

  int failures = 0;
  for (const Check& c : checks) {
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = c.run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    if (!options.quiet || !ok) log << (ok ? "PASS " : "FAIL ") << c.name << " (" << detail << ")\n";
  }
  if (!options.quiet) {
    log << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << '\n';
  }
  return failures == 0 ? kSuccess : kValidationFailure;
}

}  // namespace bubbles::app
