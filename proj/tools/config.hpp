#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bubbles/hele_shaw.hpp"

namespace bubbles::app {

using json = nlohmann::ordered_json;

/// Bad configuration: `field` is a JSON path such as "circles[1].radius".
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, std::string code, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)),
        code_(std::move(code)) {}

  [[nodiscard]] const std::string& field() const noexcept { return field_; }
  [[nodiscard]] const std::string& code() const noexcept { return code_; }

private:
  std::string field_;
  std::string code_;
};

struct Circle {
  cplx center{};
  double radius = 0.0;
  bool operator==(const Circle&) const = default;
};

struct StreamlineConfig {
  std::size_t grid = 400;
  std::size_t count = 24;
  double margin = 0.02;
  bool operator==(const StreamlineConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json", "svg"};
  bool operator==(const OutputConfig&) const = default;

  [[nodiscard]] bool wants(const std::string& format) const;
};

struct RunConfig {
  Geometry geometry = Geometry::FreeSpace;
  std::vector<Circle> circles;
  double U = 2.0;
  cplx alpha{};
  std::size_t n = 512;
  std::optional<ScaleTarget> scale;
  std::optional<StreamlineConfig> streamlines;
  OutputConfig outputs;
  GmresSettings solver;
  std::string note;

  bool operator==(const RunConfig& other) const;
};

struct BenchConfig {
  RunConfig base;
  std::vector<std::size_t> n_values;
  int repetitions = 3;
  bool operator==(const BenchConfig& other) const = default;
};

/// Parses and validates; relative paths resolve against `base_dir`.
RunConfig parse_run_config(const json& j);
BenchConfig parse_bench_config(const json& j, const std::filesystem::path& base_dir);

json to_json(const RunConfig& c);
json to_json(const BenchConfig& c);

/// Reads a JSON file; parse errors become ConfigError with line and column.
json read_json_file(const std::filesystem::path& path);

BubbleProblem make_problem(const RunConfig& c);

}  // namespace bubbles::app
