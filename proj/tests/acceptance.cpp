// Acceptance checks, one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "bubbles/error.hpp"
#include "bubbles/hele_shaw.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "oracles.hpp"

using namespace bubbles;
using namespace bubbles::app;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

const fs::path kFixtures{FIXTURE_DIR};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

RunConfig fixture(const std::string& name) { return parse_run_config(read_json_file(kFixtures / (name + ".json"))); }

BubbleProblem problem_of(const std::string& name, std::optional<std::size_t> n = std::nullopt) {
  BubbleProblem p = make_problem(fixture(name));
  if (n) p.n = *n;
  return p;
}

std::vector<std::string> run_fixtures() {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(kFixtures)) {
    const std::string stem = e.path().stem().string();
    if (e.path().extension() == ".json" && stem.rfind("bench_", 0) != 0) names.push_back(stem);
  }
  std::sort(names.begin(), names.end());
  return names;
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

struct Extent {
  double width = 0.0, height = 0.0;
};

Extent extent(const std::vector<cplx>& c) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (cplx z : c) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  return {x1 - x0, y1 - y0};
}

// Per-criterion checks. Each fills the verdict detail with the measured numbers.

void ellipse_law(Verdict& v) {
  double ratio_err = 0.0, slowest = 0.0;
  for (double U : {1.5, 2.0, 3.0, 4.0}) {
    BubbleProblem p;
    p.domain = make_domain({}, {});
    p.U = U;
    p.n = 256;
    const auto t0 = Clock::now();
    const auto sol = solve_bubbles(p);
    slowest = std::max(slowest, seconds_since(t0));
    const Extent e = extent(sol.z_boundary[0]);
    ratio_err = std::max(ratio_err, std::abs(e.width / e.height - (U - 1.0)));
    if (U == 2.0) {
      cplx c{};
      for (cplx z : sol.z_boundary[0]) c += z / double(p.n);
      double lo = 1e300, hi = 0.0;
      for (cplx z : sol.z_boundary[0]) {
        lo = std::min(lo, std::abs(z - c));
        hi = std::max(hi, std::abs(z - c));
      }
      v.require(hi - lo < 1e-10, "U=2 radius deviation " + sci(hi - lo));
      v.detail << "radius deviation " << sci(hi - lo) << ", ";
    }
    if (U == 3.0) {
      const double err = std::abs(sol.areas[0] - 8.0 * kPi / 9.0);
      v.require(err < 1e-10, "area " + sci(err));
      v.detail << "area error " << sci(err) << ", ";
    }
  }
  v.require(ratio_err < 1e-8, "aspect ratio");
  v.require(slowest < 1.0, "runtime");
  v.detail << "aspect error " << sci(ratio_err) << ", slowest " << slowest << " s";
}

void equal_area(Verdict& v) {
  BubbleProblem p;
  p.domain = make_domain({0.0}, {0.4});
  p.alpha = cplx{0.0, std::sqrt(0.4)};
  p.U = 2.0;
  p.n = 512;
  const auto sol = solve_bubbles(p);
  const double diff = std::abs(sol.areas[0] - sol.areas[1]) / kPi;
  const auto scaled = rescale_to_area(sol, 0, kPi);
  const double err = std::max(std::abs(scaled.areas[0] - kPi), std::abs(scaled.areas[1] - kPi));
  v.require(diff < 1e-8, "area difference");
  v.require(err < 1e-10, "rescaled areas");
  v.detail << "|A0-A1|/pi " << sci(diff) << ", rescaled error " << sci(err);
}

void residuals_ok(Verdict& v, const std::string& name, const BubbleSolution& sol) {
  const auto& d = sol.diagnostics;
  const double w = max_of(d.std_re_w), t = max_of(d.std_im_t);
  const double wall = std::max({d.wall.value_or(0.0), d.wall_upper.value_or(0.0), d.wall_lower.value_or(0.0)});
  v.require(w < 1e-8 && t < 1e-8 && wall < 1e-8, name + " residuals");
  v.detail << name << " " << sci(std::max({w, t, wall})) << "; ";
}

void boundary_residuals(Verdict& v) {
  double slowest = 0.0;
  for (const char* name : {"free_space_two_bubbles", "half_plane_two_bubbles_I_a", "half_plane_two_bubbles_I_b",
                           "half_plane_two_bubbles_I_c", "half_plane_two_bubbles_I_d", "half_plane_two_bubbles_II_far",
                           "half_plane_two_bubbles_II_near", "half_plane_two_bubbles_III_stacked",
                           "half_plane_two_bubbles_III_side", "channel_two_bubbles"}) {
    const auto t0 = Clock::now();
    const auto sol = solve_bubbles(problem_of(name, 512));
    slowest = std::max(slowest, seconds_since(t0));
    residuals_ok(v, name, sol);
  }
  v.require(slowest < 5.0, "runtime");
  v.detail << "slowest " << slowest << " s";
}

void exponential_convergence(Verdict& v) {
  const auto ref = solve_bubbles(problem_of("free_space_two_bubbles", 2048));
  std::vector<double> errors;
  for (std::size_t n : {64, 128, 256, 512}) {
    const auto sol = solve_bubbles(problem_of("free_space_two_bubbles", n));
    double err = 0.0;
    for (std::size_t b = 0; b < sol.bubble_count(); ++b) {
      for (std::size_t p = 0; p < n; ++p) {
        err = std::max(err, std::abs(sol.z_boundary[b][p] - ref.z_boundary[b][p * (2048 / n)]));
      }
    }
    errors.push_back(err);
  }
  v.detail << "errors n=64..512:";
  for (double e : errors) v.detail << " " << sci(e);
  for (std::size_t k = 1; k < errors.size(); ++k) {
    v.require(errors[k] <= errors[k - 1] / 10.0, "decrease x10 at step " + std::to_string(k));
  }
  v.require(errors.back() < 1e-11, "final error");
}

struct Run {
  std::map<std::size_t, std::pair<MapStats, MapStats>> stats;
  std::vector<double> h_excess;  // deviation / (1 + |h|) at n = 1024, both maps
};

std::map<std::string, Run> ladder_runs() {
  std::map<std::string, Run> out;
  for (const auto& name : run_fixtures()) {
    Run r;
    for (std::size_t n : {256, 512, 1024, 2048}) {
      const auto sol = solve_bubbles(problem_of(name, n));
      r.stats[n] = {sol.diagnostics.w_stats, sol.diagnostics.t_stats};
      if (n == 1024) {
        for (const MapStats* s : {&sol.diagnostics.w_stats, &sol.diagnostics.t_stats}) {
          for (std::size_t j = 0; j < s->h.size(); ++j) {
            r.h_excess.push_back(s->h_deviation[j] / (1.0 + std::abs(s->h[j])));
          }
        }
      }
    }
    out[name] = std::move(r);
  }
  return out;
}

void gmres_behaviour(Verdict& v, const std::map<std::string, Run>& runs) {
  double worst_res = 0.0, worst_ratio = 0.0;
  int most = 0;
  for (const auto& [name, r] : runs) {
    int lo_v = 1000, hi_v = 0, lo_h = 1000, hi_h = 0;
    for (const auto& [n, s] : r.stats) {
      for (const MapStats* m : {&s.first, &s.second}) {
        worst_res = std::max(worst_res, m->residual);
        most = std::max(most, m->iterations);
        v.require(m->converged && m->residual < 1e-13 && m->iterations < 100,
                  name + " n=" + std::to_string(n) + " it=" + std::to_string(m->iterations) + " res=" +
                      sci(m->residual));
      }
      lo_v = std::min(lo_v, s.first.iterations);
      hi_v = std::max(hi_v, s.first.iterations);
      lo_h = std::min(lo_h, s.second.iterations);
      hi_h = std::max(hi_h, s.second.iterations);
    }
    const double ratio = std::max(double(hi_v) / lo_v, double(hi_h) / lo_h);
    worst_ratio = std::max(worst_ratio, ratio);
    v.require(ratio <= 1.5, name + " iteration spread " + std::to_string(ratio));
  }
  v.detail << runs.size() << " fixtures, worst residual " << sci(worst_res) << ", most iterations " << most
           << ", worst spread " << worst_ratio;
}

void piecewise_constant_h(Verdict& v, const std::map<std::string, Run>& runs) {
  double worst = 0.0;
  for (const auto& [name, r] : runs) {
    const double w = max_of(r.h_excess);
    worst = std::max(worst, w);
    v.require(w < 1e-10, name);
  }
  v.detail << "worst deviation/(1+|h|) " << sci(worst);
}

void channel_fixtures(Verdict& v) {
  for (const char* name : {"channel_two_bubbles", "channel_three_bubbles", "channel_four_bubbles"}) {
    const auto sol = solve_bubbles(problem_of(name));
    for (const auto& curve : sol.z_boundary) {
      v.require(self_intersections(curve).empty(), std::string(name) + " simple curve");
      double top = 0.0;
      for (cplx z : curve) top = std::max(top, std::abs(z.imag()));
      v.require(top < 1.0, std::string(name) + " inside channel");
    }
    v.require(sol.diagnostics.warnings.empty(), std::string(name) + " warnings");
    residuals_ok(v, name, sol);
  }
}

double distance_to_polyline(cplx p, const std::vector<cplx>& line) {
  double best = std::abs(p - line.front());
  for (std::size_t k = 0; k + 1 < line.size(); ++k) {
    const cplx a = line[k], d = line[k + 1] - a;
    const double len2 = std::norm(d);
    const double s = len2 > 0.0 ? std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, std::abs(p - (a + s * d)));
  }
  return best;
}

void symmetry(Verdict& v) {
  // The fixture plus a three-bubble layout with one bubble on the axis.
  std::vector<BubbleProblem> problems{problem_of("channel_symmetric")};
  BubbleProblem three;
  three.geometry = Geometry::Channel;
  three.domain = make_domain({{-0.3, 0.45}, {0.35, 0.0}, {-0.3, -0.45}}, {0.2, 0.25, 0.2});
  three.alpha = -0.6;
  three.n = 512;
  problems.push_back(three);
  double worst = 0.0;
  for (const auto& p : problems) {
    const auto sol = solve_bubbles(p);
    const std::size_t n = p.n;
    for (std::size_t b = 0; b < sol.bubble_count(); ++b) {
      const cplx c = p.domain.center(sol.components[b]);
      std::size_t mirror = b;
      for (std::size_t e = 0; e < sol.bubble_count(); ++e) {
        if (std::abs(p.domain.center(sol.components[e]) - std::conj(c)) < 1e-12) mirror = e;
      }
      for (std::size_t q = 0; q < n; ++q) {
        worst = std::max(worst, std::abs(sol.z_boundary[mirror][(n - q) % n] - std::conj(sol.z_boundary[b][q])));
      }
    }
  }
  v.require(worst < 1e-8, "bubble mirror");
  v.detail << "bubble mirror error " << sci(worst);

  const RunConfig cfg = fixture("channel_symmetric");
  const auto sol = solve_bubbles(make_problem(cfg));
  StreamlineOptions so;
  so.grid = cfg.streamlines->grid;
  so.count = cfg.streamlines->count;
  so.margin = cfg.streamlines->margin;
  const auto lines = streamlines(sol, so);
  double cell = 0.0, gap = 0.0;
  std::vector<std::vector<cplx>> mirrored;
  for (const auto& l : lines) {
    std::vector<cplx> m;
    for (std::size_t k = 0; k < l.z.size(); ++k) {
      m.push_back(std::conj(l.z[k]));
      if (k + 1 < l.z.size()) cell = std::max(cell, std::abs(l.z[k + 1] - l.z[k]));
    }
    mirrored.push_back(std::move(m));
  }
  for (const auto& l : lines) {
    for (cplx z : l.z) {
      double best = 1e300;
      for (const auto& m : mirrored) best = std::min(best, distance_to_polyline(z, m));
      gap = std::max(gap, best);
    }
  }
  v.require(!lines.empty() && gap < cell, "streamline mirror");
  v.detail << ", " << lines.size() << " streamlines, mirror distance " << sci(gap) << " vs cell " << sci(cell);
}

void scale_test(Verdict& v) {
  const RunConfig cfg = fixture("channel_25_bubbles");
  const fs::path out = fs::temp_directory_path() / "bubbles_acceptance_25";
  fs::remove_all(out);
  CommandOptions o;
  o.out_dir = out;
  o.quiet = true;
  std::ostringstream log;
  const auto t0 = Clock::now();
  const int code = run_solve(cfg, o, log);
  const double secs = seconds_since(t0);
  v.require(cfg.circles.size() == 25 && cfg.n == 512, "fixture size");
  v.require(code == kSuccess, "exit code " + std::to_string(code));
  for (const char* f : {"bubbles.csv", "summary.json", "bubbles.svg", "streamlines.csv"}) {
    v.require(fs::exists(out / f), f);
  }
  v.require(secs < 120.0, "runtime");
  v.detail << (cfg.circles.size() + 1) * cfg.n << " unknowns, " << secs << " s";
  fs::remove_all(out);
}

double two_bubble_field(std::size_t comp, double t) {
  return comp == 0 ? std::cos(3.0 * t) + 0.5 * std::sin(5.0 * t) : 0.7 * std::sin(2.0 * t) - std::cos(t);
}

void oracle_cross_checks(Verdict& v) {
  const auto domain = make_domain({0.0}, {0.4});
  const cplx alpha{0.0, std::sqrt(0.4)};
  const auto c = oracle::circles(domain, {kPi / 2, kPi / 2}, alpha);

  const auto ctx = make_context(discretize(domain, 256), ThetaSpec::uniform(2, kPi / 2), alpha);
  std::vector<double> f(ctx.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = two_bubble_field(ctx.sampling().component[k], ctx.sampling().t[k]);
  const auto m = ctx.apply_M(f);
  const auto ref = oracle::shifted_M(c, 256, two_bubble_field);
  double em = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) em = std::max(em, std::abs(m[k] - ref[k]));

  const auto small = make_context(discretize(domain, 32), ThetaSpec::uniform(2, kPi / 2), alpha);
  const Eigen::MatrixXd dense = oracle::dense_I_minus_N(c, 32);
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  Eigen::VectorXd x(64);
  for (auto& e : x) e = g(rng);
  const auto y = small.apply_I_minus_N(std::vector<double>(x.begin(), x.end()));
  const Eigen::VectorXd yd = dense * x;
  double ed = 0.0;
  for (int k = 0; k < 64; ++k) ed = std::max(ed, std::abs(y[k] - yd[k]));

  const auto s = discretize(domain, 256);
  std::vector<cplx> sq(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) sq[k] = s.zeta[k] * s.zeta[k];
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  std::vector<cplx> pts;
  while (pts.size() < 20) {
    const cplx z{u(rng), u(rng)};
    if (locate(domain, z, 0.02) == Location::Inside) pts.push_back(z);
  }
  const auto vals = cauchy_eval(s, sq, pts);
  double ec = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) ec = std::max(ec, std::abs(vals[k] - pts[k] * pts[k]));

  v.require(em < 1e-10, "apply_M vs shifted quadrature");
  v.require(ed < 1e-13, "matvec vs dense");
  v.require(ec < 1e-12, "cauchy_eval");
  v.detail << "M " << sci(em) << ", matvec " << sci(ed) << ", cauchy " << sci(ec);
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::string& name, const std::function<void(Verdict&)>& check) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
      check(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << " (" << v.detail.str()
              << ") [" << seconds_since(t0) << " s]" << std::endl;
  };

  report(1, "ellipse_law", ellipse_law);
  report(2, "equal_area", equal_area);
  report(3, "boundary_residuals", boundary_residuals);
  report(4, "exponential_convergence", exponential_convergence);
  std::map<std::string, Run> runs;
  try {
    runs = ladder_runs();
  } catch (const std::exception& e) {
    std::cout << "ladder runs aborted: " << e.what() << std::endl;
  }
  report(5, "gmres_behaviour", [&](Verdict& v) {
    v.require(!runs.empty(), "runs");
    gmres_behaviour(v, runs);
  });
  report(6, "piecewise_constant_h", [&](Verdict& v) {
    v.require(!runs.empty(), "runs");
    piecewise_constant_h(v, runs);
  });
  report(7, "channel_fixtures", channel_fixtures);
  report(8, "symmetry", symmetry);
  report(9, "scale_test", scale_test);
  report(10, "oracle_cross_checks", oracle_cross_checks);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
