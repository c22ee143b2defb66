#pragma once

// Block-by-block summation of the original spins in a finite volume. The
// state carries the running boundary interaction b(X) on not-yet-summed
// sites, bucketed by the first block (in sweep order) each term meets, plus
// the scalar log-weight already summed out.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lgrg/interaction.hpp"
#include "lgrg/lattice.hpp"
#include "lgrg/model.hpp"

namespace lgrg {

inline constexpr const char* kEngineVersion = "lgrg-engine/1";

enum class SweepOrder { row_major, column_major };

/// Finite set of blocks with free boundaries. Blocks are kept in sweep order;
/// spin sites are numbered in lexicographic order.
class Volume {
 public:
  /// The (2L+1)^2 blocks with -L <= i, j <= L.
  static Volume square(int L, SweepOrder order = SweepOrder::row_major);
  /// Blocks 0 <= i < nx, 0 <= j < ny.
  static Volume rectangle(int nx, int ny, SweepOrder order = SweepOrder::row_major);

  /// Throws std::invalid_argument on an empty or duplicated block list.
  Volume(std::vector<Block> blocks, SweepOrder order = SweepOrder::row_major);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const std::vector<Site>& sites() const noexcept { return sites_; }
  SweepOrder order() const noexcept { return order_; }
  /// L for volumes built by square().
  std::optional<int> half_width() const noexcept { return half_width_; }

  std::optional<std::size_t> sweep_index(Block b) const;
  std::optional<std::uint32_t> site_id(Site s) const;
  /// Sweep index of the block holding site `id`.
  std::size_t block_of_site(std::uint32_t id) const { return site_block_[id]; }
  /// Nearest-neighbor pairs (a < b) with both sites in the volume.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

 private:
  std::vector<Block> blocks_;
  std::vector<Site> sites_;
  std::vector<std::size_t> site_block_;
  SweepOrder order_;
  std::optional<int> half_width_;
};

/// Which boundary terms survive a block summation: S(X) <= cutoff and,
/// when set, |X| <= max_cardinality.
struct TruncationPolicy {
  double cutoff = std::numeric_limits<double>::infinity();
  std::optional<int> max_cardinality;

  static TruncationPolicy none() { return {}; }
  bool exact() const { return cutoff == std::numeric_limits<double>::infinity() && !max_cardinality; }
  bool keeps(std::size_t cardinality, const ExactSize& size) const;
  std::string describe() const;
};

/// All sets meeting the four sites of `b` with S <= cutoff (and the
/// cardinality cap), in sorted order. `max_sets` of 0 means unlimited;
/// otherwise EnumerationLimitExceeded is thrown once the count passes it.
std::vector<SiteSet> block_collection(Block b, const TruncationPolicy& policy, std::size_t max_sets = 0);

using TermKey = std::vector<std::uint32_t>;

struct TermKeyHash {
  std::size_t operator()(const TermKey& k) const noexcept;
};

class EngineState {
 public:
  double accumulator() const noexcept { return accumulator_; }
  std::size_t cursor() const noexcept { return cursor_; }
  const std::vector<std::uint8_t>& block_vars() const noexcept { return block_vars_; }
  std::size_t pending_terms() const;
  /// Pending boundary interaction with the scalar part excluded.
  Interaction boundary_terms(const Volume& v) const;

 private:
  friend class Engine;
  using Bucket = std::unordered_map<TermKey, double, TermKeyHash>;

  std::vector<Bucket> pending_;
  double accumulator_ = 0.0;
  std::size_t cursor_ = 0;
  std::vector<std::uint8_t> block_vars_;
};

/// Scratch buffers reused across block summations, plus high-water marks.
struct Workspace {
  std::vector<std::uint32_t> outside;
  std::vector<std::uint64_t> family;
  std::unordered_map<std::uint64_t, std::uint32_t> family_index;
  std::vector<std::uint32_t> drop_pairs;
  std::vector<std::size_t> stage_begin;
  std::vector<double> g;
  std::vector<double> f;

  std::size_t max_outside = 0;
  std::size_t max_family = 0;
};

class Engine {
 public:
  Engine(Volume volume, TruncationPolicy policy, Coupling coupling);

  const Volume& volume() const noexcept { return volume_; }
  const TruncationPolicy& policy() const noexcept { return policy_; }
  const Coupling& coupling() const noexcept { return coupling_; }

  /// State before any block is summed. `block_config` lists block indices
  /// (i, j) where the block variable is 1. Throws std::out_of_range for a
  /// block outside the volume.
  EngineState start(const SiteSet& block_config) const;
  /// Replaces the block configuration of a partially swept state. Throws
  /// std::logic_error if a summed block would change value.
  void reconfigure(EngineState& state, const SiteSet& block_config) const;

  /// Sums out the block at the cursor and advances it.
  void sum_block(EngineState& state, Workspace& ws) const;
  /// Sums all remaining blocks and returns Hbar = -accumulator.
  double finish(EngineState& state, Workspace& ws) const;

  double compute_hbar(const SiteSet& block_config) const;

  /// Cap on the per-block family of retained sets.
  static constexpr std::size_t kMaxFamily = std::size_t{1} << 22;

 private:
  std::vector<std::uint8_t> block_vars_for(const SiteSet& block_config) const;

  Volume volume_;
  TruncationPolicy policy_;
  Coupling coupling_;
  std::vector<std::uint8_t> site_pos_;
  std::vector<EngineState::Bucket> initial_terms_;
  double initial_constant_ = 0.0;
};

/// Translate of `rep` with its centroid rounded to the origin.
SiteSet place_centered(const SiteSet& rep);

/// f(X) for every class representative, centered in the volume. Entries
/// whose computation fails are logged and left out.
FreeEnergyTable free_energy_batch(const std::vector<SymmetryClass>& classes, const Volume& volume,
                                  const TruncationPolicy& policy, const Coupling& coupling, unsigned jobs = 1);

}  // namespace lgrg
