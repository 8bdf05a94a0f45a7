#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bubbles/error.hpp"

namespace bubbles::app {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "InvalidConfig", "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(join(path, key), "InvalidConfig", "unknown key");
  }
}

const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "InvalidConfig", "missing required key");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "InvalidConfig", "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "InvalidConfig", "must be finite");
  return v;
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "InvalidConfig", "expected an integer");
  return j.get<std::int64_t>();
}

std::size_t positive_size(const json& j, const std::string& path) {
  const std::int64_t v = integer(j, path);
  if (v < 1) throw ConfigError(path, "InvalidConfig", "must be a positive integer");
  return static_cast<std::size_t>(v);
}

cplx complex_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(path, "InvalidConfig", "expected [re, im]");
  }
  return {number(j[0], at(path, 0)), number(j[1], at(path, 1))};
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "InvalidConfig", "expected a string");
  return j.get<std::string>();
}

void check_n(std::size_t n, Geometry g, const std::string& path) {
  if (n < 8 || n % 2 != 0) {
    throw ConfigError(path, "BadN", "must be even and at least 8, got " + std::to_string(n));
  }
  if (g != Geometry::FreeSpace && n % 4 != 0) {
    throw ConfigError(path, "BadN", "must be divisible by 4 for " + std::string(to_string(g)) +
                                        " (zeta = i must be a node), got " + std::to_string(n));
  }
}

CircularDomain domain_of(const RunConfig& c) {
  std::vector<cplx> centers;
  std::vector<double> radii;
  for (const Circle& k : c.circles) {
    centers.push_back(k.center);
    radii.push_back(k.radius);
  }
  return make_domain(centers, radii);
}

}  // namespace

bool OutputConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

bool RunConfig::operator==(const RunConfig& o) const {
  const bool same_scale = scale.has_value() == o.scale.has_value() &&
                          (!scale || (scale->bubble == o.scale->bubble && scale->area == o.scale->area));
  return geometry == o.geometry && circles == o.circles && U == o.U && alpha == o.alpha && n == o.n &&
         same_scale && streamlines == o.streamlines && outputs == o.outputs &&
         solver.tol == o.solver.tol && solver.max_iterations == o.solver.max_iterations && note == o.note;
}

RunConfig parse_run_config(const json& j) {
  require_object(j, "");
  reject_unknown(j, "", {"geometry", "circles", "U", "alpha", "n", "scale", "streamlines", "outputs",
                         "solver", "note"});
  RunConfig c;

  const std::string g = text(member(j, "", "geometry"), "geometry");
  const auto geometry = parse_geometry(g);
  if (!geometry) {
    throw ConfigError("geometry", "InvalidConfig",
                      "unknown geometry '" + g + "' (expected free_space, half_plane or channel)");
  }
  c.geometry = *geometry;

  const json& circles = member(j, "", "circles");
  if (!circles.is_array()) throw ConfigError("circles", "InvalidConfig", "expected a list");
  for (std::size_t i = 0; i < circles.size(); ++i) {
    const std::string path = at("circles", i);
    require_object(circles[i], path);
    reject_unknown(circles[i], path, {"center", "radius"});
    Circle k;
    k.center = complex_pair(member(circles[i], path, "center"), join(path, "center"));
    k.radius = number(member(circles[i], path, "radius"), join(path, "radius"));
    if (!(k.radius > 0.0)) throw ConfigError(join(path, "radius"), "BadRadius", "must be positive");
    c.circles.push_back(k);
  }

  c.U = number(member(j, "", "U"), "U");
  if (!(c.U > 1.0)) throw ConfigError("U", "InvalidConfig", "bubble speed must exceed 1");
  c.alpha = complex_pair(member(j, "", "alpha"), "alpha");
  c.n = positive_size(member(j, "", "n"), "n");
  check_n(c.n, c.geometry, "n");

  if (j.contains("note")) c.note = text(j.at("note"), "note");

  if (j.contains("scale")) {
    const json& s = j.at("scale");
    require_object(s, "scale");
    reject_unknown(s, "scale", {"bubble", "area"});
    if (c.geometry == Geometry::Channel) {
      throw ConfigError("scale", "ScaleNotAllowed",
                        "channel bubbles cannot be rescaled: the channel width fixes the length scale");
    }
    const std::int64_t b = integer(member(s, "scale", "bubble"), "scale.bubble");
    const std::size_t count = c.circles.size() + (c.geometry == Geometry::FreeSpace ? 1 : 0);
    if (b < 0 || static_cast<std::size_t>(b) >= count) {
      throw ConfigError("scale.bubble", "BadIndex",
                        "bubble index " + std::to_string(b) + " out of range (" + std::to_string(count) +
                            " bubbles)");
    }
    const double area = number(member(s, "scale", "area"), "scale.area");
    if (!(area > 0.0)) throw ConfigError("scale.area", "InvalidConfig", "must be positive");
    c.scale = ScaleTarget{static_cast<std::size_t>(b), area};
  }

  if (j.contains("streamlines")) {
    const json& s = j.at("streamlines");
    require_object(s, "streamlines");
    reject_unknown(s, "streamlines", {"grid", "count", "margin"});
    StreamlineConfig sc;
    if (s.contains("grid")) sc.grid = positive_size(s.at("grid"), "streamlines.grid");
    if (sc.grid < 2) throw ConfigError("streamlines.grid", "InvalidConfig", "must be at least 2");
    if (s.contains("count")) sc.count = positive_size(s.at("count"), "streamlines.count");
    if (s.contains("margin")) sc.margin = number(s.at("margin"), "streamlines.margin");
    if (!(sc.margin > 0.0)) throw ConfigError("streamlines.margin", "InvalidConfig", "must be positive");
    c.streamlines = sc;
  }

  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    require_object(o, "outputs");
    reject_unknown(o, "outputs", {"directory", "formats"});
    if (o.contains("directory")) c.outputs.directory = text(o.at("directory"), "outputs.directory");
    if (o.contains("formats")) {
      const json& f = o.at("formats");
      if (!f.is_array()) throw ConfigError("outputs.formats", "InvalidConfig", "expected a list");
      c.outputs.formats.clear();
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string name = text(f[i], at("outputs.formats", i));
        if (name != "csv" && name != "json" && name != "svg") {
          throw ConfigError(at("outputs.formats", i), "InvalidConfig",
                            "unknown format '" + name + "' (expected csv, json or svg)");
        }
        if (!c.outputs.wants(name)) c.outputs.formats.push_back(name);
      }
    }
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    require_object(s, "solver");
    reject_unknown(s, "solver", {"tol", "max_iterations"});
    if (s.contains("tol")) c.solver.tol = number(s.at("tol"), "solver.tol");
    if (!(c.solver.tol > 0.0)) throw ConfigError("solver.tol", "InvalidConfig", "must be positive");
    if (s.contains("max_iterations")) {
      c.solver.max_iterations = static_cast<int>(positive_size(s.at("max_iterations"), "solver.max_iterations"));
    }
  }

  CircularDomain domain;
  try {
    domain = domain_of(c);
  } catch (const Error& e) {
    throw ConfigError("circles", std::string(to_string(e.code())), e.what());
  }
  if (locate(domain, c.alpha, 0.0) != Location::Inside) {
    throw ConfigError("alpha", "AlphaOutside", "base point must lie strictly inside the circular domain");
  }
  return c;
}

BenchConfig parse_bench_config(const json& j, const std::filesystem::path& base_dir) {
  require_object(j, "");
  reject_unknown(j, "", {"base", "n_values", "repetitions", "note"});
  BenchConfig b;
  const json& base = member(j, "", "base");
  if (base.is_string()) {
    std::filesystem::path p = base.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    try {
      b.base = parse_run_config(read_json_file(p));
    } catch (const ConfigError& e) {
      throw ConfigError(e.field().empty() ? "base" : "base(" + p.string() + ")." + e.field(), e.code(),
                        e.what());
    }
  } else {
    try {
      b.base = parse_run_config(base);
    } catch (const ConfigError& e) {
      throw ConfigError(join("base", e.field()), e.code(), e.what());
    }
  }
  const json& ns = member(j, "", "n_values");
  if (!ns.is_array() || ns.empty()) throw ConfigError("n_values", "InvalidConfig", "expected a non-empty list");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::size_t n = positive_size(ns[i], at("n_values", i));
    if (n % 4 != 0) throw ConfigError(at("n_values", i), "BadN", "must be divisible by 4");
    check_n(n, b.base.geometry, at("n_values", i));
    if (!b.n_values.empty() && n <= b.n_values.back()) {
      throw ConfigError(at("n_values", i), "InvalidConfig", "values must be strictly ascending");
    }
    b.n_values.push_back(n);
  }
  if (j.contains("repetitions")) {
    b.repetitions = static_cast<int>(positive_size(j.at("repetitions"), "repetitions"));
  }
  return b;
}

json to_json(const RunConfig& c) {
  json j;
  j["geometry"] = std::string(to_string(c.geometry));
  j["circles"] = json::array();
  for (const Circle& k : c.circles) {
    j["circles"].push_back({{"center", {k.center.real(), k.center.imag()}}, {"radius", k.radius}});
  }
  j["U"] = c.U;
  j["alpha"] = {c.alpha.real(), c.alpha.imag()};
  j["n"] = c.n;
  if (c.scale) j["scale"] = {{"bubble", c.scale->bubble}, {"area", c.scale->area}};
  if (c.streamlines) {
    j["streamlines"] = {{"grid", c.streamlines->grid},
                        {"count", c.streamlines->count},
                        {"margin", c.streamlines->margin}};
  }
  j["outputs"] = {{"directory", c.outputs.directory}, {"formats", c.outputs.formats}};
  j["solver"] = {{"tol", c.solver.tol}, {"max_iterations", c.solver.max_iterations}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json to_json(const BenchConfig& c) {
  return json{{"base", to_json(c.base)}, {"n_values", c.n_values}, {"repetitions", c.repetitions}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "InvalidConfig", "cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "InvalidConfig", path.string() + ": " + e.what());
  }
}

BubbleProblem make_problem(const RunConfig& c) {
  BubbleProblem p;
  p.geometry = c.geometry;
  p.domain = domain_of(c);
  p.U = c.U;
  p.alpha = c.alpha;
  p.n = c.n;
  p.scale = c.scale;
  return p;
}

}  // namespace bubbles::app
