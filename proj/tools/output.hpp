#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace bubbles::app {

// Fixed "%.17g" formatting so repeated runs give identical bytes.
std::string format_number(double v);

std::string bubbles_csv(const BubbleSolution& sol);
std::string streamlines_csv(const std::vector<Streamline>& lines);
std::string svg_plot(const BubbleSolution& sol, const std::vector<Streamline>& lines);
json summary_json(const RunConfig& config, const BubbleSolution& sol, double wall_ms,
                  std::size_t streamline_count);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace bubbles::app
