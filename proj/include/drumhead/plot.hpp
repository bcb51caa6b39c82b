#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "drumhead/experiment.hpp"

namespace drumhead {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // rates, must lie in [0, 1]
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label = "rate";
  bool log_x = false;
  int width = 640;
  int height = 420;
};

/// Standalone SVG line chart with a fixed [0, 1] y axis, one polyline per series
/// and a legend. No series draws the axes only. Throws std::invalid_argument on a
/// y value outside [0, 1], mismatched lengths or a non-positive x on a log axis.
void write_line_chart(std::ostream& os, const std::vector<Series>& series, const ChartOptions& opts);

/// A(d) against d, one series per N; rows with an absent A are skipped.
std::vector<Series> accumulated_series(const std::vector<AccumulatedRate>& rows);

/// Isometric fraction against N as a single series.
std::vector<Series> iso_series(const std::vector<IsoRatio>& rows);

/// Reads stats_accumulated.csv and stats_iso.csv from `stats_dir` and writes
/// accumulated.svg and iso.svg into `out_dir`.
void plot_experiment(const std::filesystem::path& stats_dir, const std::filesystem::path& out_dir);

}  // namespace drumhead
