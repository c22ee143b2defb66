#include "lgrg/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "lgrg/table_io.hpp"

namespace lgrg::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  }
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "beta") {
    beta = to_double(key, v);
  } else if (key == "L") {
    L = to_int<int>(key, v);
  } else if (key == "C_B") {
    C_B = to_double(key, v);
  } else if (key == "max_cardinality") {
    if (v.empty() || v == "none") {
      max_cardinality.reset();
    } else {
      max_cardinality = to_int<int>(key, v);
    }
  } else if (key == "C" || key == "classes_cutoff") {
    C = to_double(key, v);
  } else if (key == "C_Hbar") {
    C_Hbar = to_double(key, v);
  } else if (key == "C_f") {
    C_f = to_double(key, v);
  } else if (key == "jobs") {
    jobs = to_int<unsigned>(key, v);
  } else if (key == "seed") {
    seed = to_int<std::uint64_t>(key, v);
  } else if (key == "output_dir") {
    output_dir = v;
  } else if (key == "sweep") {
    if (v == "row_major") {
      sweep = SweepOrder::row_major;
    } else if (v == "column_major") {
      sweep = SweepOrder::column_major;
    } else {
      throw ConfigError("'sweep' must be row_major or column_major, got '" + v + "'");
    }
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void RunConfig::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be a finite number >= 0");
  if (L < 1) throw ConfigError("L must be >= 1");
  if (!(C_B >= 0.0)) throw ConfigError("C_B must be >= 0");
  if (max_cardinality && *max_cardinality < 1) throw ConfigError("max_cardinality must be >= 1");
  if (!(C >= 0.0) || !std::isfinite(C)) throw ConfigError("C must be a finite number >= 0");
  if (jobs == 0) throw ConfigError("jobs must be >= 1");
  if (fit_hbar() > fit_f()) {
    throw ConfigError("C_Hbar (" + format_double(fit_hbar()) + ") exceeds C_f (" + format_double(fit_f()) +
                      "); the fitted collection must lie inside the target collection");
  }
  if (fit_f() > C) {
    throw ConfigError("C_f (" + format_double(fit_f()) + ") exceeds C (" + format_double(C) +
                      "); targets need free energies that were not computed, raise C");
  }
}

Metadata RunConfig::metadata() const {
  Metadata m;
  m["beta"] = format_double(beta);
  m["L"] = std::to_string(L);
  m["C_B"] = format_double(C_B);
  if (max_cardinality) m["max_cardinality"] = std::to_string(*max_cardinality);
  m["C"] = format_double(C);
  m["sweep"] = sweep == SweepOrder::row_major ? "row_major" : "column_major";
  m["engine"] = kEngineVersion;
  return m;
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    cfg.set(trim(t.substr(0, eq)), t.substr(eq + 1));
  }
}

}  // namespace lgrg::cli
