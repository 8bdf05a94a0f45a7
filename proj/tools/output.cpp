#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace bubbles::app {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

json stats_json(const MapStats& s) {
  return json{{"gmres_iterations", s.iterations},
              {"residual", s.residual},
              {"converged", s.converged},
              {"h", s.h},
              {"h_deviation", s.h_deviation}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_number(double v) { return fmt("%.17g", v); }

std::string bubbles_csv(const BubbleSolution& sol) {
  std::string out = "bubble_index,t,x,y\n";
  const std::size_t n = sol.problem.n;
  for (std::size_t b = 0; b < sol.z_boundary.size(); ++b) {
    for (std::size_t p = 0; p < n; ++p) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n);
      const cplx z = sol.z_boundary[b][p];
      out += std::to_string(b) + ',' + format_number(t) + ',' + format_number(z.real()) + ',' +
             format_number(z.imag()) + '\n';
    }
  }
  return out;
}

std::string streamlines_csv(const std::vector<Streamline>& lines) {
  std::string out = "polyline_id,x,y,level\n";
  for (std::size_t id = 0; id < lines.size(); ++id) {
    const std::string level = format_number(lines[id].level);
    for (const cplx& z : lines[id].z) {
      out += std::to_string(id) + ',' + format_number(z.real()) + ',' + format_number(z.imag()) + ',' +
             level + '\n';
    }
  }
  return out;
}

std::string svg_plot(const BubbleSolution& sol, const std::vector<Streamline>& lines) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto grow = [&](cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return;
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  };
  for (const auto& c : sol.z_boundary) std::for_each(c.begin(), c.end(), grow);
  for (const auto& l : lines) std::for_each(l.z.begin(), l.z.end(), grow);
  const Geometry g = sol.problem.geometry;
  if (g == Geometry::Channel) {
    grow({xmin, -1.0});
    grow({xmin, 1.0});
  } else if (g == Geometry::HalfPlane) {
    grow({xmin, 0.0});
  }
  if (!(xmin <= xmax)) xmin = ymin = -1.0, xmax = ymax = 1.0;
  const double padx = 0.1 * std::max(xmax - xmin, 1e-9);
  const double pady = 0.1 * std::max(ymax - ymin, 1e-9);
  xmin -= padx, xmax += padx, ymin -= pady, ymax += pady;

  const double width = 800.0;
  const double scale = width / (xmax - xmin);
  const double height = (ymax - ymin) * scale;
  auto X = [&](double x) { return fmt("%.3f", (x - xmin) * scale); };
  auto Y = [&](double y) { return fmt("%.3f", (ymax - y) * scale); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", width) << "\" height=\""
     << fmt("%.0f", height) << "\" viewBox=\"0 0 " << fmt("%.3f", width) << ' ' << fmt("%.3f", height)
     << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  auto wall = [&](double y) {
    os << "<line x1=\"0\" y1=\"" << Y(y) << "\" x2=\"" << X(xmax) << "\" y2=\"" << Y(y)
       << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  };
  if (g == Geometry::Channel) {
    wall(1.0);
    wall(-1.0);
  } else if (g == Geometry::HalfPlane) {
    wall(0.0);
  }
  os << "<g fill=\"none\" stroke=\"#3060a0\" stroke-width=\"0.8\">\n";
  for (const auto& l : lines) {
    os << "<path d=\"";
    for (std::size_t k = 0; k < l.z.size(); ++k) {
      os << (k == 0 ? "M" : " L") << X(l.z[k].real()) << ',' << Y(l.z[k].imag());
    }
    os << "\"/>\n";
  }
  os << "</g>\n<g fill=\"#d0d0d0\" stroke=\"black\" stroke-width=\"1.2\">\n";
  for (const auto& c : sol.z_boundary) {
    os << "<path d=\"";
    bool first = true;
    for (const cplx& z : c) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
      os << (first ? "M" : " L") << X(z.real()) << ',' << Y(z.imag());
      first = false;
    }
    os << " Z\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

json summary_json(const RunConfig& config, const BubbleSolution& sol, double wall_ms,
                  std::size_t streamline_count) {
  const Diagnostics& d = sol.diagnostics;
  json diag{{"std_re_w", d.std_re_w}, {"std_im_t", d.std_im_t}};
  if (d.wall) diag["wall_half_plane"] = *d.wall;
  if (d.wall_upper) diag["wall_channel_upper"] = *d.wall_upper;
  if (d.wall_lower) diag["wall_channel_lower"] = *d.wall_lower;
  diag["warnings"] = d.warnings;

  json areas = json::array();
  for (double a : sol.areas) areas.push_back(finite_or_null(a));
  return json{{"schema", 1},
              {"geometry", std::string(to_string(config.geometry))},
              {"U", config.U},
              {"n", config.n},
              {"bubbles", sol.bubble_count()},
              {"areas", areas},
              {"scale_factor", sol.scale_factor},
              {"maps", {{"vertical", stats_json(d.w_stats)}, {"horizontal", stats_json(d.t_stats)}}},
              {"diagnostics", diag},
              {"converged", sol.converged()},
              {"streamlines", streamline_count},
              {"wall_clock_ms", wall_ms}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace bubbles::app
