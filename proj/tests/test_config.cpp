#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "drumhead/cli.hpp"
#include "drumhead/config.hpp"

using namespace drumhead;

namespace {

long lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_CASE("defaults round-trip byte for byte") {
  const CliConfig cfg;
  const std::string text = config_to_string(cfg);
  CHECK(text.rfind("# drumhead configuration\n", 0) == 0);
  CliConfig back;
  std::istringstream is(text);
  read_config(is, back);
  CHECK(config_to_string(back) == text);
  for (const auto& key : config_keys()) CHECK(text.find(key + " = ") != std::string::npos);
}

TEST_CASE("changed values round-trip") {
  CliConfig cfg;
  set_config_value(cfg, "map.n_eigs", "7");
  set_config_value(cfg, "map.fd_step", "3.1622776601683795e-05");
  set_config_value(cfg, "map.eigen_method", "krylov");
  set_config_value(cfg, "descent.method", "gradient");
  set_config_value(cfg, "descent.project_gauge", "false");
  set_config_value(cfg, "metric.coarse_angles", "90");
  set_config_value(cfg, "experiment.n_values", "2,5,11");
  set_config_value(cfg, "experiment.master_seed", "18446744073709551615");
  set_config_value(cfg, "run.workers", "4");
  set_config_value(cfg, "run.output_dir", "results/a b");
  CHECK(cfg.experiment.map.n_eigs == 7);
  CHECK(cfg.experiment.map.fd_step == 3.1622776601683795e-05);
  CHECK(cfg.experiment.descent.method == FlowMethod::gradient);
  CHECK(!cfg.experiment.descent.project_gauge);
  CHECK(cfg.experiment.descent.metric.coarse_angles == 90);
  CHECK(cfg.experiment.n_values == std::vector<int>{2, 5, 11});
  CHECK(cfg.experiment.pairs.master_seed == 18446744073709551615ull);
  CHECK(cfg.experiment.workers == 4);

  const std::string text = config_to_string(cfg);
  CliConfig back;
  std::istringstream is(text);
  read_config(is, back);
  CHECK(config_to_string(back) == text);
  CHECK(back.output_dir == "results/a b");
  CHECK(back.experiment.map.fd_step == cfg.experiment.map.fd_step);
}

TEST_CASE("comments, blank lines and whitespace") {
  CliConfig cfg;
  std::istringstream is("# a comment\n\n   map.n_eigs   =  12  \n  # indented comment\ndescent.max_iters=9\n");
  read_config(is, cfg);
  CHECK(cfg.experiment.map.n_eigs == 12);
  CHECK(cfg.experiment.descent.max_iters == 9);
}

TEST_CASE("bad input is rejected") {
  CliConfig cfg;
  CHECK_THROWS_WITH_AS(set_config_value(cfg, "map.nope", "1"), doctest::Contains("unknown config key"),
                       std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "map.n_eigs", "three"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "map.n_eigs", "3.5"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "map.fd_step", ""), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "map.eigen_method", "qr"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "experiment.n_values", "2,,3"), std::invalid_argument);
  std::istringstream no_equals("map.n_eigs 3\n");
  CHECK_THROWS_AS(read_config(no_equals, cfg), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/drumhead.cfg"), std::exception);
}

TEST_CASE("config file from the environment reaches the CLI") {
  const auto dir = std::filesystem::temp_directory_path() / "drumhead_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "run.cfg";
  {
    std::ofstream f(path);
    f << "map.n_eigs = 2\nmap.mesh_rings = 8\nmap.mesh_sectors = 16\n";
  }
  ::setenv(kConfigEnvVar, path.c_str(), 1);
  std::ostringstream out, err;
  CHECK(cli::run({"spectrum", "--shape", "0.1 0.9 0"}, out, err) == cli::kExitOk);
  // Header plus two rows.
  CHECK(lines(out.str()) == 3);

  // Flags win over the file, and --set wins over the file too.
  std::ostringstream out2, err2;
  CHECK(cli::run({"spectrum", "--shape", "0.1 0.9 0", "--set", "map.n_eigs=4"}, out2, err2) == cli::kExitOk);
  CHECK(lines(out2.str()) == 5);

  {
    std::ofstream f(path);
    f << "map.bogus = 1\n";
  }
  std::ostringstream out3, err3;
  CHECK(cli::run({"spectrum", "--shape", "0.1 0.9 0"}, out3, err3) == cli::kExitUsage);
  CHECK(err3.str().find("map.bogus") != std::string::npos);
  ::unsetenv(kConfigEnvVar);
  std::filesystem::remove_all(dir);
}
