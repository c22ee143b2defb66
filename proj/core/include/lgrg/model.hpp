#pragma once

// Original nearest-neighbor Hamiltonian and the 2x2 majority-rule kernel,
// both written in lattice-gas variables (gas 0 <-> spin +1).

#include <array>
#include <cstdint>
#include <utility>

#include "lgrg/interaction.hpp"
#include "lgrg/lattice.hpp"

namespace lgrg {

/// ln(1 + sqrt 2) / 2, the square-lattice critical coupling.
double critical_beta();

/// Inverse temperature absorbed into the Hamiltonian H = -beta sum sigma_i sigma_j.
class Coupling {
 public:
  Coupling() : beta_(critical_beta()) {}
  /// Throws std::domain_error unless beta >= 0.
  explicit Coupling(double beta);

  double beta() const noexcept { return beta_; }

 private:
  double beta_;
};

/// Block (i, j) owns the spin sites (2i,2j), (2i+1,2j), (2i,2j+1), (2i+1,2j+1).
struct Block {
  std::int32_t i = 0;
  std::int32_t j = 0;

  /// Member sites in position order: bit k of a block configuration refers to sites()[k].
  std::array<Site, 4> sites() const {
    return {Site{2 * i, 2 * j}, Site{2 * i + 1, 2 * j}, Site{2 * i, 2 * j + 1}, Site{2 * i + 1, 2 * j + 1}};
  }
  Site index() const { return {i, j}; }

  friend constexpr auto operator<=>(const Block&, const Block&) = default;
};

Block block_containing(Site s);
/// Position (0..3) of `s` inside its block.
int position_in_block(Site s);

/// Lattice-gas expansion of the edge term -beta sigma_u sigma_v.
/// Throws std::domain_error if the sites are not nearest neighbors.
Interaction gas_edge_terms(double beta, Site u, Site v);

/// Majority-rule weight t(block_var, config) for a 2x2 block. `config` holds
/// the four gas values as bits 0..3. Returns 1, 1/2 (2-2 tie) or 0.
double majority_kernel(int block_var, std::uint8_t config);

/// Kernel weights for all 16 block configurations at fixed block variable.
std::array<double, 16> majority_kernel_row(int block_var);

}  // namespace lgrg
