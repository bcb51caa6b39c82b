#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "drumhead/descent.hpp"

namespace drumhead {

/// A start shape A and a target B at isometry distance d0 > eps_shape.
struct PairRecord {
  int pair_id = 0;
  std::uint64_t seed = 0;
  Shape shape_a;
  Shape shape_b;
  double d0 = 0.0;
};

struct PairOptions {
  int harmonics = 2;  // M = 2K + 1
  int n_pairs = 50;
  std::uint64_t master_seed = 1;
  double amplitude = 0.5;
  double magnitude_lo = 0.005;  // perturbation magnitude is log-uniform on [lo, hi]
  double magnitude_hi = 0.08;
  double d0_max = std::numeric_limits<double>::infinity();
  double eps_shape = 0.005;
  int max_attempts = 100;
  MetricConfig metric;
  int workers = 1;
};

/// B = perturb(A) with A = random_shape, redrawing until eps_shape < d0 <= d0_max.
/// Pair i draws from child_seed(master_seed, i) only, so the list is order-independent.
std::vector<PairRecord> generate_pairs(const PairOptions& opts);

struct RunRecord {
  int pair_id = 0;
  int n_eigs = 0;
  double d0 = 0.0;
  RunResult result;
};

using MapConfigBuilder = std::function<SpectralMapConfig(int n_eigs)>;

/// Every (pair, N) reconstruction, sorted by (pair_id, N). A failing run is
/// recorded with StopReason::error and does not abort the grid.
std::vector<RunRecord> run_grid(const std::vector<PairRecord>& pairs, const std::vector<int>& n_values,
                                const MapConfigBuilder& map_cfg, const DescentConfig& descent_cfg, int workers = 1);

struct BinnedRate {
  double d1, d2;
  int n_eigs;
  int count;
  int successes;
  std::optional<double> rate;  // absent for an empty bin
};

/// Success rate among runs at this N with d1 < d0 <= d2, per bin.
std::vector<BinnedRate> binned_rate(const std::vector<RunRecord>& records,
                                    const std::vector<std::pair<double, double>>& bins, int n_eigs);

struct AccumulatedRate {
  double d;
  int n_eigs;
  int R;
  int S;
  std::optional<double> A;  // S / R, absent when R = 0
};

/// R(d) = runs with d0 <= d, S(d, N) = successes among them, A = S / R.
std::vector<AccumulatedRate> accumulated_rate(const std::vector<RunRecord>& records, const std::vector<double>& d_grid,
                                              int n_eigs);

struct IsoRatio {
  int n_eigs;
  int n_isospectral;
  int n_isometric;
  std::optional<double> ratio;
};

/// Fraction of isometric outcomes among spectrum-matching ones at this N.
IsoRatio iso_among_isospectral(const std::vector<RunRecord>& records, int n_eigs);

/// n geometric points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int n);

struct ExperimentConfig {
  PairOptions pairs;
  std::vector<int> n_values{2, 3, 10};
  SpectralMapConfig map;  // n_eigs is replaced per grid column
  DescentConfig descent;
  int n_bins = 8;
  int n_thresholds = 16;
  int workers = 1;
};

struct ExperimentOutput {
  std::vector<PairRecord> pairs;
  std::vector<RunRecord> runs;
  std::vector<BinnedRate> binned;
  std::vector<AccumulatedRate> accumulated;
  std::vector<IsoRatio> iso;
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

void write_pairs_csv(std::ostream& os, const std::vector<PairRecord>& pairs);
void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& runs);
void write_binned_csv(std::ostream& os, const std::vector<BinnedRate>& rows);
void write_accumulated_csv(std::ostream& os, const std::vector<AccumulatedRate>& rows);
void write_iso_csv(std::ostream& os, const std::vector<IsoRatio>& rows);

/// Readers for the two summary tables; absent fields come back as nullopt.
/// Rates outside [0, 1] are rejected with std::invalid_argument.
std::vector<AccumulatedRate> read_accumulated_csv(std::istream& is);
std::vector<IsoRatio> read_iso_csv(std::istream& is);

/// pairs.csv, runs.csv, stats_binned.csv, stats_accumulated.csv, stats_iso.csv.
void write_experiment(const ExperimentOutput& out, const std::filesystem::path& dir);

}  // namespace drumhead
