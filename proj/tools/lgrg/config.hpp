#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "lgrg/engine.hpp"
#include "lgrg/interaction.hpp"

namespace lgrg::cli {

/// Bad configuration or arguments; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double beta = critical_beta();
  int L = 4;
  double C_B = 8.0;
  std::optional<int> max_cardinality;
  double C = 4.0;  // class cutoff for free energies
  std::optional<double> C_Hbar;
  std::optional<double> C_f;
  unsigned jobs = 1;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = ".";
  SweepOrder sweep = SweepOrder::row_major;

  /// Accepts the keys beta, L, C_B, max_cardinality, C, C_Hbar, C_f, jobs,
  /// seed, output_dir, sweep. Throws ConfigError on unknown keys or values.
  void set(const std::string& key, const std::string& value);

  double fit_hbar() const { return C_Hbar.value_or(C); }
  double fit_f() const { return C_f.value_or(C); }

  /// Checks ranges and C_Hbar <= C_f <= C.
  void validate() const;

  /// Everything that influences results; `jobs` and `output_dir` are left out.
  Metadata metadata() const;

  TruncationPolicy policy() const { return {C_B, max_cardinality}; }
};

/// `key = value` lines; blank lines and lines starting with '#' are ignored.
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

}  // namespace lgrg::cli
