#include "drumhead/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "drumhead/io.hpp"

namespace drumhead {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename Int>
Int parse_int(std::string_view text) {
  text = trim(text);
  Int v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument("not a boolean: '" + std::string(text) + "'");
}

std::string_view to_string(EigenMethod m) {
  switch (m) {
    case EigenMethod::automatic: return "automatic";
    case EigenMethod::dense: return "dense";
    case EigenMethod::krylov: return "krylov";
  }
  return "?";
}

EigenMethod parse_eigen_method(std::string_view s) {
  s = trim(s);
  if (s == "automatic") return EigenMethod::automatic;
  if (s == "dense") return EigenMethod::dense;
  if (s == "krylov") return EigenMethod::krylov;
  throw std::invalid_argument("unknown eigen method '" + std::string(s) + "'");
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (const auto& f : split_fields(trim(text), ',')) out.push_back(parse_int<int>(f));
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

struct Entry {
  const char* key;
  std::function<std::string(const CliConfig&)> get;
  std::function<void(CliConfig&, std::string_view)> set;
};

#define DRUMHEAD_DOUBLE(KEY, FIELD)                                             \
  Entry {                                                                       \
    KEY, [](const CliConfig& c) { return format_double(c.FIELD); },             \
        [](CliConfig& c, std::string_view v) { c.FIELD = parse_double(v); }     \
  }
#define DRUMHEAD_INT(KEY, FIELD)                                                     \
  Entry {                                                                            \
    KEY, [](const CliConfig& c) { return std::to_string(c.FIELD); },                 \
        [](CliConfig& c, std::string_view v) { c.FIELD = parse_int<decltype(c.FIELD)>(v); } \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      DRUMHEAD_INT("map.n_eigs", experiment.map.n_eigs),
      DRUMHEAD_INT("map.mesh_rings", experiment.map.mesh_rings),
      DRUMHEAD_INT("map.mesh_sectors", experiment.map.mesh_sectors),
      DRUMHEAD_DOUBLE("map.fd_step", experiment.map.fd_step),
      Entry{"map.eigen_method", [](const CliConfig& c) { return std::string(to_string(c.experiment.map.eigen.method)); },
            [](CliConfig& c, std::string_view v) { c.experiment.map.eigen.method = parse_eigen_method(v); }},
      DRUMHEAD_DOUBLE("map.eigen_tolerance", experiment.map.eigen.tolerance),
      DRUMHEAD_DOUBLE("descent.eps_shape", experiment.descent.eps_shape),
      DRUMHEAD_DOUBLE("descent.eps_spectrum", experiment.descent.eps_spectrum),
      DRUMHEAD_DOUBLE("descent.grow", experiment.descent.grow),
      DRUMHEAD_DOUBLE("descent.shrink", experiment.descent.shrink),
      DRUMHEAD_DOUBLE("descent.initial_step", experiment.descent.initial_step),
      DRUMHEAD_DOUBLE("descent.min_step", experiment.descent.min_step),
      DRUMHEAD_INT("descent.max_iters", experiment.descent.max_iters),
      Entry{"descent.method", [](const CliConfig& c) { return std::string(to_string(c.experiment.descent.method)); },
            [](CliConfig& c, std::string_view v) { c.experiment.descent.method = parse_flow_method(trim(v)); }},
      DRUMHEAD_DOUBLE("descent.pinv_rel_tol", experiment.descent.pinv_rel_tol),
      Entry{"descent.project_gauge",
            [](const CliConfig& c) { return std::string(c.experiment.descent.project_gauge ? "true" : "false"); },
            [](CliConfig& c, std::string_view v) { c.experiment.descent.project_gauge = parse_bool(v); }},
      DRUMHEAD_INT("metric.boundary_samples", experiment.descent.metric.boundary_samples),
      DRUMHEAD_INT("metric.coarse_angles", experiment.descent.metric.coarse_angles),
      DRUMHEAD_INT("metric.refine_iters", experiment.descent.metric.refine_iters),
      DRUMHEAD_INT("experiment.harmonics", experiment.pairs.harmonics),
      DRUMHEAD_INT("experiment.n_pairs", experiment.pairs.n_pairs),
      DRUMHEAD_INT("experiment.master_seed", experiment.pairs.master_seed),
      DRUMHEAD_DOUBLE("experiment.amplitude", experiment.pairs.amplitude),
      DRUMHEAD_DOUBLE("experiment.magnitude_lo", experiment.pairs.magnitude_lo),
      DRUMHEAD_DOUBLE("experiment.magnitude_hi", experiment.pairs.magnitude_hi),
      DRUMHEAD_DOUBLE("experiment.d0_max", experiment.pairs.d0_max),
      DRUMHEAD_INT("experiment.max_attempts", experiment.pairs.max_attempts),
      Entry{"experiment.n_values", [](const CliConfig& c) { return join_ints(c.experiment.n_values); },
            [](CliConfig& c, std::string_view v) { c.experiment.n_values = parse_int_list(v); }},
      DRUMHEAD_INT("experiment.n_bins", experiment.n_bins),
      DRUMHEAD_INT("experiment.n_thresholds", experiment.n_thresholds),
      DRUMHEAD_INT("run.workers", experiment.workers),
      Entry{"run.output_dir", [](const CliConfig& c) { return c.output_dir; },
            [](CliConfig& c, std::string_view v) { c.output_dir = std::string(trim(v)); }},
  };
  return table;
}

#undef DRUMHEAD_DOUBLE
#undef DRUMHEAD_INT

}  // namespace

void set_config_value(CliConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  for (const auto& e : entries()) {
    if (key == e.key) {
      try {
        e.set(cfg, value);
      } catch (const std::invalid_argument& err) {
        throw std::invalid_argument(std::string(key) + ": " + err.what());
      }
      return;
    }
  }
  throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

void read_config(std::istream& is, CliConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
}

CliConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config file " + path.string());
  CliConfig cfg;
  read_config(f, cfg);
  return cfg;
}

void write_config(std::ostream& os, const CliConfig& cfg) {
  os << "# drumhead configuration\n";
  std::string section;
  for (const auto& e : entries()) {
    const std::string_view key = e.key;
    const std::string sec(key.substr(0, key.find('.')));
    if (sec != section) {
      if (!section.empty()) os << '\n';
      section = sec;
    }
    os << e.key << " = " << e.get(cfg) << '\n';
  }
}

std::string config_to_string(const CliConfig& cfg) {
  std::ostringstream os;
  write_config(os, cfg);
  return os.str();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& e : entries()) keys.emplace_back(e.key);
  return keys;
}

}  // namespace drumhead
