#include "drumhead/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "drumhead/config.hpp"
#include "drumhead/errors.hpp"
#include "drumhead/io.hpp"
#include "drumhead/mesh.hpp"
#include "drumhead/plot.hpp"

namespace drumhead::cli {

namespace {

// Options every subcommand accepts: a config file and key=value overrides.
struct ConfigArgs {
  std::string path;
  std::vector<std::string> sets;
};

void add_config_options(CLI::App* app, ConfigArgs& c) {
  app->add_option("--config", c.path, std::string("Config file (default: $") + kConfigEnvVar + ")");
  app->add_option("--set", c.sets, "Override one config key, e.g. --set descent.max_iters=400")->take_all();
}

CliConfig load(const ConfigArgs& c) {
  CliConfig cfg;
  std::string path = c.path;
  if (path.empty())
    if (const char* env = std::getenv(kConfigEnvVar)) path = env;
  if (!path.empty()) cfg = load_config(path);
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

// Spectral-map flags shared by spectrum, jacobian and reconstruct.
struct MapArgs {
  int n_eigs = 0, rings = 0, sectors = 0;
  std::string eigen_method;
  CLI::Option *n_opt = nullptr, *rings_opt = nullptr, *sectors_opt = nullptr, *method_opt = nullptr;

  void add(CLI::App* app) {
    n_opt = app->add_option("--n-eigs", n_eigs, "Number of eigenvalues N")->check(CLI::PositiveNumber);
    rings_opt = app->add_option("--mesh-rings", rings, "Mesh rings (0: resolution ladder)")->check(CLI::NonNegativeNumber);
    sectors_opt = app->add_option("--mesh-sectors", sectors, "Mesh sectors (0: twice the rings)")
                      ->check(CLI::NonNegativeNumber);
    method_opt = app->add_option("--eigen-method", eigen_method, "automatic, dense or krylov")
                     ->check(CLI::IsMember({"automatic", "dense", "krylov"}));
  }

  void apply(CliConfig& cfg) const {
    if (n_opt->count()) cfg.experiment.map.n_eigs = n_eigs;
    if (rings_opt->count()) cfg.experiment.map.mesh_rings = rings;
    if (sectors_opt->count()) cfg.experiment.map.mesh_sectors = sectors;
    if (method_opt->count()) set_config_value(cfg, "map.eigen_method", eigen_method);
  }
};

// A shape given inline as "a b c0 c1 s1 ..." or as the first record of a file.
struct ShapeArg {
  std::string inline_record, file;

  void add(CLI::App* app, const std::string& name, const std::string& what) {
    auto* a = app->add_option("--" + name, inline_record, what + " as 'a b c0 c1 s1 ...'");
    auto* b = app->add_option("--" + name + "-file", file, what + " from a shape file (first record)");
    a->excludes(b);
  }

  Shape get(const std::string& name) const {
    if (!inline_record.empty()) return parse_shape(inline_record);
    if (file.empty()) throw std::invalid_argument("missing --" + name + " or --" + name + "-file");
    std::ifstream f(file);
    if (!f) throw std::invalid_argument("cannot open " + file);
    const auto shapes = read_shapes(f);
    if (shapes.empty()) throw std::invalid_argument(file + " holds no shape");
    return shapes.front();
  }
};

// Writes to --output when given, else to `out`.
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  write(f);
}

std::vector<std::string> coefficient_names(Eigen::Index dof) {
  std::vector<std::string> names{"c0"};
  for (Eigen::Index k = 1; 2 * k < dof; ++k) {
    names.push_back("c" + std::to_string(k));
    names.push_back("s" + std::to_string(k));
  }
  return names;
}

nlohmann::json to_json(const RunResult& r, int n_eigs) {
  nlohmann::json j;
  j["outcome"] = to_string(r.outcome);
  j["stop_reason"] = to_string(r.stop_reason);
  j["method"] = to_string(r.method);
  j["n_eigs"] = n_eigs;
  j["iterations"] = r.iterations;
  j["accepted_steps"] = r.accepted_steps;
  j["initial_spectral_distance"] = r.initial_spectral_distance;
  j["final_spectral_distance"] = r.final_spectral_distance;
  j["initial_shape_distance"] = r.initial_shape_distance;
  j["final_shape_distance"] = r.final_shape_distance;
  j["final_shape"] = format_shape(r.final_shape);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shape reconstruction from Dirichlet spectra of star-shaped drums", "drumhead"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // spectrum
  ConfigArgs spec_cfg;
  MapArgs spec_map;
  ShapeArg spec_shape;
  std::string spec_out;
  auto* spectrum = app.add_subcommand("spectrum", "Lowest Dirichlet eigenvalues: CSV index,lambda,mu");
  add_config_options(spectrum, spec_cfg);
  spec_map.add(spectrum);
  spec_shape.add(spectrum, "shape", "Shape");
  spectrum->add_option("-o,--output", spec_out, "CSV file (default: stdout)");

  // distance
  ConfigArgs dist_cfg;
  ShapeArg dist_a, dist_b;
  auto* distance = app.add_subcommand("distance", "Plain and isometry-invariant Hausdorff distance");
  add_config_options(distance, dist_cfg);
  dist_a.add(distance, "shape-a", "First shape");
  dist_b.add(distance, "shape-b", "Second shape");

  // jacobian
  ConfigArgs jac_cfg;
  MapArgs jac_map;
  ShapeArg jac_shape;
  std::string jac_out;
  int jac_workers = 1;
  auto* jacobian = app.add_subcommand("jacobian", "Finite-difference Jacobian of the spectral map: CSV, one row per eigenvalue");
  add_config_options(jacobian, jac_cfg);
  jac_map.add(jacobian);
  jac_shape.add(jacobian, "shape", "Shape");
  jacobian->add_option("-o,--output", jac_out, "CSV file (default: stdout)");
  jacobian->add_option("--workers", jac_workers, "Threads for the Jacobian columns")->check(CLI::PositiveNumber);

  // reconstruct
  ConfigArgs rec_cfg;
  MapArgs rec_map;
  ShapeArg rec_start, rec_target;
  std::string rec_out, rec_trace, rec_method;
  int rec_max_iters = 0, rec_workers = 1;
  double rec_initial_step = 0.0;
  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Flow a start shape toward a target spectrum: JSON result");
  add_config_options(reconstruct_cmd, rec_cfg);
  rec_map.add(reconstruct_cmd);
  rec_start.add(reconstruct_cmd, "start", "Start shape");
  rec_target.add(reconstruct_cmd, "target", "Target shape (its spectrum is the goal)");
  auto* rec_method_opt = reconstruct_cmd->add_option("--method", rec_method, "pseudoinverse or gradient")
                             ->check(CLI::IsMember({"pseudoinverse", "gradient"}));
  auto* rec_iters_opt = reconstruct_cmd->add_option("--max-iters", rec_max_iters, "Iteration cap")
                            ->check(CLI::NonNegativeNumber);
  auto* rec_step_opt = reconstruct_cmd->add_option("--initial-step", rec_initial_step, "Initial Euler step")
                           ->check(CLI::PositiveNumber);
  reconstruct_cmd->add_option("-o,--output", rec_out, "JSON file (default: stdout)");
  reconstruct_cmd->add_option("--trace", rec_trace, "Write the accepted steps as CSV iter,t,step,spectral_distance");
  reconstruct_cmd->add_option("--workers", rec_workers, "Threads for the Jacobian columns")->check(CLI::PositiveNumber);

  // experiment
  ConfigArgs exp_cfg;
  MapArgs exp_map;
  std::string exp_dir;
  int exp_workers = 1, exp_pairs = 0;
  std::uint64_t exp_seed = 0;
  bool exp_print = false;
  auto* experiment = app.add_subcommand("experiment", "Random pair grid: pairs, runs and rate tables as CSV");
  add_config_options(experiment, exp_cfg);
  exp_map.add(experiment);
  auto* exp_dir_opt = experiment->add_option("--output-dir", exp_dir, "Directory for the CSV files");
  auto* exp_workers_opt = experiment->add_option("--workers", exp_workers, "Concurrent runs")->check(CLI::PositiveNumber);
  auto* exp_seed_opt = experiment->add_option("--seed", exp_seed, "Master seed");
  auto* exp_pairs_opt = experiment->add_option("--n-pairs", exp_pairs, "Number of pairs")->check(CLI::NonNegativeNumber);
  experiment->add_flag("--print-config", exp_print, "Print the effective config and exit");

  // plot
  ConfigArgs plot_cfg;
  std::string plot_stats, plot_out;
  auto* plot = app.add_subcommand("plot", "SVG charts from stats_accumulated.csv and stats_iso.csv");
  add_config_options(plot, plot_cfg);
  plot->add_option("--stats-dir", plot_stats, "Directory holding the stats CSVs (default: run.output_dir)");
  plot->add_option("--output-dir", plot_out, "Directory for the SVG files (default: the stats directory)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*spectrum) {
      CliConfig cfg = load(spec_cfg);
      spec_map.apply(cfg);
      const Shape shape = spec_shape.get("shape");
      const SpectralMapConfig map = cfg.experiment.map;
      map.validate();
      const SpectralMapConfig r = map.resolved();
      const Eigen::VectorXd lambda =
          dirichlet_eigenvalues(assemble_p1(build_polar_mesh(shape, r.mesh_rings, r.mesh_sectors)), r.n_eigs, r.eigen);
      const Spectrum mu = green_spectrum(lambda);
      emit(spec_out, out, [&](std::ostream& os) {
        os << "index,lambda,mu\n";
        for (Eigen::Index i = 0; i < lambda.size(); ++i)
          os << i + 1 << ',' << format_double(lambda(i)) << ',' << format_double(mu(i)) << '\n';
      });
    } else if (*distance) {
      const CliConfig cfg = load(dist_cfg);
      const Shape a = dist_a.get("shape-a"), b = dist_b.get("shape-b");
      const MetricConfig& metric = cfg.experiment.descent.metric;
      out << "shape_distance,isometry_distance\n"
          << format_double(shape_distance(a, b, metric)) << ',' << format_double(isometry_distance(a, b, metric))
          << '\n';
    } else if (*jacobian) {
      CliConfig cfg = load(jac_cfg);
      jac_map.apply(cfg);
      const Shape shape = jac_shape.get("shape");
      const Jacobian jac = jacobian_fd(shape, cfg.experiment.map, jac_workers);
      emit(jac_out, out, [&](std::ostream& os) {
        const auto names = coefficient_names(shape.dof());
        for (std::size_t j = 0; j < names.size(); ++j) os << (j ? "," : "") << names[j];
        os << '\n';
        for (Eigen::Index i = 0; i < jac.values.rows(); ++i) {
          for (Eigen::Index j = 0; j < jac.values.cols(); ++j) os << (j ? "," : "") << format_double(jac.values(i, j));
          os << '\n';
        }
      });
    } else if (*reconstruct_cmd) {
      CliConfig cfg = load(rec_cfg);
      rec_map.apply(cfg);
      DescentConfig& d = cfg.experiment.descent;
      if (rec_method_opt->count()) d.method = parse_flow_method(rec_method);
      if (rec_iters_opt->count()) d.max_iters = rec_max_iters;
      if (rec_step_opt->count()) d.initial_step = rec_initial_step;
      const Shape start = rec_start.get("start"), target = rec_target.get("target");
      const FemSpectralModel model(cfg.experiment.map, rec_workers);
      const RunResult result = reconstruct(start, model.spectrum(target), target, model, d);
      emit(rec_out, out, [&](std::ostream& os) { os << to_json(result, cfg.experiment.map.n_eigs).dump(2) << '\n'; });
      if (!rec_trace.empty()) {
        emit(rec_trace, out, [&](std::ostream& os) {
          os << "iter,t,step,spectral_distance\n";
          for (const auto& p : result.trace)
            os << p.iter << ',' << format_double(p.t) << ',' << format_double(p.step) << ','
               << format_double(p.spectral_distance) << '\n';
        });
      }
      if (result.stop_reason == StopReason::error) throw NumericalError(result.error);
    } else if (*experiment) {
      CliConfig cfg = load(exp_cfg);
      exp_map.apply(cfg);
      if (exp_dir_opt->count()) cfg.output_dir = exp_dir;
      if (exp_workers_opt->count()) cfg.experiment.workers = exp_workers;
      if (exp_seed_opt->count()) cfg.experiment.pairs.master_seed = exp_seed;
      if (exp_pairs_opt->count()) cfg.experiment.pairs.n_pairs = exp_pairs;
      if (exp_print) {
        write_config(out, cfg);
        return kExitOk;
      }
      const ExperimentOutput result = run_experiment(cfg.experiment);
      write_experiment(result, cfg.output_dir);
      {
        std::ofstream f(std::filesystem::path(cfg.output_dir) / "config.txt", std::ios::binary);
        write_config(f, cfg);
      }
      for (const auto& iso : result.iso) {
        int successes = 0, total = 0;
        for (const auto& r : result.runs)
          if (r.n_eigs == iso.n_eigs) {
            ++total;
            successes += is_success(r.result.outcome);
          }
        out << "N=" << iso.n_eigs << ": " << successes << '/' << total << " both_match\n";
      }
      out << "wrote " << cfg.output_dir << '\n';
    } else if (*plot) {
      const CliConfig cfg = load(plot_cfg);
      const std::string stats = plot_stats.empty() ? cfg.output_dir : plot_stats;
      const std::string dest = plot_out.empty() ? stats : plot_out;
      plot_experiment(stats, dest);
      out << "wrote " << (std::filesystem::path(dest) / "accumulated.svg").string() << " and "
          << (std::filesystem::path(dest) / "iso.svg").string() << '\n';
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace drumhead::cli
