#include "drumhead/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "drumhead/io.hpp"
#include "drumhead/parallel.hpp"

namespace drumhead {

std::vector<PairRecord> generate_pairs(const PairOptions& opts) {
  if (opts.n_pairs < 0) throw std::invalid_argument("generate_pairs: n_pairs must be >= 0");
  if (!(opts.magnitude_lo > 0.0 && opts.magnitude_lo < opts.magnitude_hi))
    throw std::invalid_argument("generate_pairs: need 0 < magnitude_lo < magnitude_hi");
  if (!(opts.d0_max > opts.eps_shape)) throw std::invalid_argument("generate_pairs: d0_max must exceed eps_shape");
  opts.metric.validate();

  std::vector<PairRecord> pairs(static_cast<std::size_t>(opts.n_pairs));
  const double log_lo = std::log(opts.magnitude_lo), log_hi = std::log(opts.magnitude_hi);
  parallel_for(pairs.size(), opts.workers, [&](std::size_t i) {
    PairRecord& p = pairs[i];
    p.pair_id = int(i);
    p.seed = child_seed(opts.master_seed, i);
    Rng rng(p.seed);
    p.shape_a = random_shape(rng, opts.harmonics, opts.amplitude);
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
      const double magnitude = std::exp(rng.uniform(log_lo, log_hi));
      p.shape_b = perturb(p.shape_a, rng, magnitude);
      p.d0 = isometry_distance(p.shape_a, p.shape_b, opts.metric);
      if (p.d0 > opts.eps_shape && p.d0 <= opts.d0_max) return;
    }
    throw std::runtime_error("generate_pairs: pair " + std::to_string(i) + " exhausted " +
                             std::to_string(opts.max_attempts) + " redraws");
  });
  return pairs;
}

std::vector<RunRecord> run_grid(const std::vector<PairRecord>& pairs, const std::vector<int>& n_values,
                                const MapConfigBuilder& map_cfg, const DescentConfig& descent_cfg, int workers) {
  std::vector<int> ns = n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<RunRecord> records(pairs.size() * ns.size());
  parallel_for(records.size(), workers, [&](std::size_t task) {
    const PairRecord& pair = pairs[task / ns.size()];
    RunRecord& rec = records[task];
    rec.pair_id = pair.pair_id;
    rec.n_eigs = ns[task % ns.size()];
    rec.d0 = pair.d0;
    try {
      const FemSpectralModel model(map_cfg(rec.n_eigs));
      const Spectrum target = model.spectrum(pair.shape_b);
      rec.result = reconstruct(pair.shape_a, target, pair.shape_b, model, descent_cfg);
    } catch (const std::exception& e) {
      rec.result = RunResult{};
      rec.result.method = descent_cfg.method;
      rec.result.final_shape = pair.shape_a;
      rec.result.initial_shape_distance = pair.d0;
      rec.result.stop_reason = StopReason::error;
      rec.result.outcome = Outcome::neither_match;
      rec.result.error = e.what();
    }
  });
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& l, const RunRecord& r) {
    return std::pair{l.pair_id, l.n_eigs} < std::pair{r.pair_id, r.n_eigs};
  });
  return records;
}

std::vector<BinnedRate> binned_rate(const std::vector<RunRecord>& records,
                                    const std::vector<std::pair<double, double>>& bins, int n_eigs) {
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (!(bins[i].first < bins[i].second)) throw std::invalid_argument("binned_rate: empty bin interval");
    if (i > 0 && bins[i].first < bins[i - 1].second)
      throw std::invalid_argument("binned_rate: bins must be ordered and disjoint");
  }
  std::vector<BinnedRate> out;
  out.reserve(bins.size());
  for (const auto& [d1, d2] : bins) {
    BinnedRate row{d1, d2, n_eigs, 0, 0, std::nullopt};
    for (const auto& r : records) {
      if (r.n_eigs != n_eigs || !(r.d0 > d1 && r.d0 <= d2)) continue;
      ++row.count;
      row.successes += is_success(r.result.outcome);
    }
    if (row.count > 0) row.rate = double(row.successes) / row.count;
    out.push_back(row);
  }
  return out;
}

std::vector<AccumulatedRate> accumulated_rate(const std::vector<RunRecord>& records, const std::vector<double>& d_grid,
                                              int n_eigs) {
  if (!std::is_sorted(d_grid.begin(), d_grid.end()))
    throw std::invalid_argument("accumulated_rate: d_grid must be increasing");
  std::vector<AccumulatedRate> out;
  out.reserve(d_grid.size());
  for (double d : d_grid) {
    AccumulatedRate row{d, n_eigs, 0, 0, std::nullopt};
    for (const auto& r : records) {
      if (r.n_eigs != n_eigs || r.d0 > d) continue;
      ++row.R;
      row.S += is_success(r.result.outcome);
    }
    if (row.R > 0) row.A = double(row.S) / row.R;
    out.push_back(row);
  }
  return out;
}

IsoRatio iso_among_isospectral(const std::vector<RunRecord>& records, int n_eigs) {
  IsoRatio out{n_eigs, 0, 0, std::nullopt};
  for (const auto& r : records) {
    if (r.n_eigs != n_eigs) continue;
    if (r.result.outcome == Outcome::both_match) {
      ++out.n_isospectral;
      ++out.n_isometric;
    } else if (r.result.outcome == Outcome::spectrum_only_match) {
      ++out.n_isospectral;
    }
  }
  if (out.n_isospectral > 0) out.ratio = double(out.n_isometric) / out.n_isospectral;
  return out;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || hi < lo) throw std::invalid_argument("geometric_grid: bad range");
  if (n == 1) return {hi};
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[std::size_t(i)] = lo * std::pow(hi / lo, double(i) / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  cfg.descent.validate();
  if (cfg.n_values.empty()) throw std::invalid_argument("run_experiment: no N values");
  if (cfg.n_bins < 1 || cfg.n_thresholds < 1) throw std::invalid_argument("run_experiment: need >= 1 bin/threshold");

  ExperimentOutput out;
  PairOptions popts = cfg.pairs;
  popts.workers = cfg.workers;
  popts.eps_shape = cfg.descent.eps_shape;
  popts.metric = cfg.descent.metric;
  out.pairs = generate_pairs(popts);

  const SpectralMapConfig base = cfg.map;
  out.runs = run_grid(
      out.pairs, cfg.n_values,
      [&base](int n) {
        SpectralMapConfig m = base;
        m.n_eigs = n;
        return m;
      },
      cfg.descent, cfg.workers);

  std::vector<int> ns = cfg.n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  double d_max = cfg.descent.eps_shape * 2.0;
  for (const auto& p : out.pairs) d_max = std::max(d_max, p.d0);
  const std::vector<double> edges = geometric_grid(cfg.descent.eps_shape, d_max, cfg.n_bins + 1);
  std::vector<std::pair<double, double>> bins;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) bins.emplace_back(edges[i], edges[i + 1]);
  const std::vector<double> d_grid = geometric_grid(cfg.descent.eps_shape, d_max, cfg.n_thresholds);

  for (int n : ns) {
    const auto b = binned_rate(out.runs, bins, n);
    out.binned.insert(out.binned.end(), b.begin(), b.end());
    const auto a = accumulated_rate(out.runs, d_grid, n);
    out.accumulated.insert(out.accumulated.end(), a.begin(), a.end());
    out.iso.push_back(iso_among_isospectral(out.runs, n));
  }
  return out;
}

namespace {

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

int parse_count(const std::string& text) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("not an integer: '" + text + "'");
  return v;
}

std::optional<double> parse_rate(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const double v = parse_double(text);
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("rate outside [0, 1]: " + text);
  return v;
}

// Data rows of a CSV table after checking the header; '\r' and blank lines are dropped.
std::vector<std::vector<std::string>> csv_rows(std::istream& is, std::string_view header) {
  std::string line;
  bool seen_header = false;
  std::vector<std::vector<std::string>> rows;
  const std::size_t width = split_fields(header, ',').size();
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) throw std::invalid_argument("expected header '" + std::string(header) + "', got '" + line + "'");
      seen_header = true;
      continue;
    }
    auto fields = split_fields(line, ',');
    if (fields.size() != width) throw std::invalid_argument("wrong field count in row '" + line + "'");
    rows.push_back(std::move(fields));
  }
  if (!seen_header) throw std::invalid_argument("missing header '" + std::string(header) + "'");
  return rows;
}

}  // namespace

void write_pairs_csv(std::ostream& os, const std::vector<PairRecord>& pairs) {
  const Eigen::Index m = pairs.empty() ? 1 : pairs.front().shape_a.dof();
  os << "pair_id,seed,d0";
  for (const char* prefix : {"a_", "b_"}) {
    os << ',' << prefix << "c0";
    for (Eigen::Index k = 1; 2 * k < m; ++k) os << ',' << prefix << 'c' << k << ',' << prefix << 's' << k;
  }
  os << '\n';
  for (const auto& p : pairs) {
    os << p.pair_id << ',' << p.seed << ',' << format_double(p.d0);
    for (const Shape* s : {&p.shape_a, &p.shape_b})
      for (Eigen::Index i = 0; i < s->dof(); ++i) os << ',' << format_double(s->coefficients()(i));
    os << '\n';
  }
}

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& runs) {
  os << "pair_id,n_eigs,outcome,iterations,final_sd,final_shape_distance,stop_reason\n";
  for (const auto& r : runs) {
    os << r.pair_id << ',' << r.n_eigs << ',' << to_string(r.result.outcome) << ',' << r.result.iterations << ','
       << format_double(r.result.final_spectral_distance) << ',' << format_double(r.result.final_shape_distance)
       << ',' << to_string(r.result.stop_reason) << '\n';
  }
}

void write_binned_csv(std::ostream& os, const std::vector<BinnedRate>& rows) {
  os << "d1,d2,n_eigs,count,rate\n";
  for (const auto& r : rows)
    os << format_double(r.d1) << ',' << format_double(r.d2) << ',' << r.n_eigs << ',' << r.count << ','
       << optional_field(r.rate) << '\n';
}

void write_accumulated_csv(std::ostream& os, const std::vector<AccumulatedRate>& rows) {
  os << "d,n_eigs,R,S,A\n";
  for (const auto& r : rows)
    os << format_double(r.d) << ',' << r.n_eigs << ',' << r.R << ',' << r.S << ',' << optional_field(r.A) << '\n';
}

void write_iso_csv(std::ostream& os, const std::vector<IsoRatio>& rows) {
  os << "n_eigs,n_isospectral,n_isometric,ratio\n";
  for (const auto& r : rows)
    os << r.n_eigs << ',' << r.n_isospectral << ',' << r.n_isometric << ',' << optional_field(r.ratio) << '\n';
}

std::vector<AccumulatedRate> read_accumulated_csv(std::istream& is) {
  std::vector<AccumulatedRate> out;
  for (const auto& f : csv_rows(is, "d,n_eigs,R,S,A")) {
    AccumulatedRate r{parse_double(f[0]), parse_count(f[1]), parse_count(f[2]), parse_count(f[3]), parse_rate(f[4])};
    if (r.S < 0 || r.S > r.R) throw std::invalid_argument("accumulated row with S outside [0, R]");
    out.push_back(r);
  }
  return out;
}

std::vector<IsoRatio> read_iso_csv(std::istream& is) {
  std::vector<IsoRatio> out;
  for (const auto& f : csv_rows(is, "n_eigs,n_isospectral,n_isometric,ratio")) {
    IsoRatio r{parse_count(f[0]), parse_count(f[1]), parse_count(f[2]), parse_rate(f[3])};
    if (r.n_isometric < 0 || r.n_isometric > r.n_isospectral)
      throw std::invalid_argument("iso row with n_isometric outside [0, n_isospectral]");
    out.push_back(r);
  }
  return out;
}

void write_experiment(const ExperimentOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("pairs.csv");
    write_pairs_csv(f, out.pairs);
  }
  {
    auto f = open("runs.csv");
    write_runs_csv(f, out.runs);
  }
  {
    auto f = open("stats_binned.csv");
    write_binned_csv(f, out.binned);
  }
  {
    auto f = open("stats_accumulated.csv");
    write_accumulated_csv(f, out.accumulated);
  }
  {
    auto f = open("stats_iso.csv");
    write_iso_csv(f, out.iso);
  }
}

}  // namespace drumhead
