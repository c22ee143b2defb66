#pragma once

// One function per subcommand. Each returns the process exit code:
// 0 success, 1 invalid configuration, 2 computation failure.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgrg/config.hpp"
#include "lgrg/oracle.hpp"

namespace lgrg::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitComputation = 2;

/// Exclusive advisory lock on `<dir>/.lgrg.lock`, held for the object's life.
class OutputLock {
 public:
  explicit OutputLock(const fs::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  int fd_ = -1;
};

/// Writes `text` unless the file already holds exactly that. Returns true
/// when the file was written.
bool write_if_changed(const fs::path& path, const std::string& text);

int cmd_free_energies(const RunConfig& cfg, const fs::path& output);
int cmd_gas_coeffs(const fs::path& input, const fs::path& output);
int cmd_spin_coeffs(RunConfig cfg, const fs::path& input, const std::string& method, const fs::path& output);
int cmd_spin_sweep(const RunConfig& cfg, const fs::path& input, const std::vector<std::string>& methods,
                   const std::vector<double>& c_hbar, const std::vector<double>& c_f, const fs::path& output);
int cmd_decay(const fs::path& input, bool dihedral, const std::vector<double>& thresholds, const fs::path& output);
int cmd_dihedral(const std::vector<fs::path>& inputs, const fs::path& output);
int cmd_fve(const std::vector<fs::path>& inputs, const fs::path& output);
int cmd_convergence(const std::vector<fs::path>& inputs, std::optional<double> reference, const fs::path& output);
int cmd_oracle_exact(const RunConfig& cfg, int nx, int ny, const fs::path& output);
int cmd_oracle_mc(const RunConfig& cfg, int nx, int ny, const SiteSet& x, const McOptions& mc, const fs::path& output);

/// Site sets of the nearest-neighbor pair, diagonal pair and plaquette.
const std::vector<std::pair<std::string, SiteSet>>& reported_couplings();

}  // namespace lgrg::cli
