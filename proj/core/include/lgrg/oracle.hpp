#pragma once

// Ground truth for tiny volumes: the constrained partition sum by exhaustive
// enumeration, and a Metropolis estimate of window block-value weights.

#include <cstdint>
#include <optional>
#include <vector>

#include "lgrg/engine.hpp"
#include "lgrg/lattice.hpp"
#include "lgrg/model.hpp"

namespace lgrg {

inline constexpr std::size_t kMaxOracleSpins = 28;

/// -ln sum_sigma prod_B t_B(nbar_B, sigma_B) e^{-H(sigma)} over all spin
/// configurations of the volume, free boundaries. Throws std::domain_error
/// past kMaxOracleSpins spins. The result does not depend on `jobs`.
double exact_hbar(const SiteSet& block_config, const Volume& volume, const Coupling& coupling, unsigned jobs = 1);

struct McOptions {
  std::uint64_t samples = 1'000'000;  // sweeps, split evenly across chains
  std::uint64_t seed = 1;
  std::uint64_t burn_in = 1'000;  // sweeps per chain
  unsigned chains = 4;
  std::size_t batches_per_chain = 25;
  unsigned jobs = 1;
};

struct McEstimate {
  SiteSet y;                 // block indices with value 1, subset of the window
  std::optional<double> f;   // absent when the window configuration never carried weight
  double std_error = 0.0;
};

struct McResult {
  std::vector<McEstimate> estimates;  // every nonempty subset of the window
  std::uint64_t sweeps = 0;
  double acceptance = 0.0;
};

/// Single-spin-flip Metropolis on the original spins with block value 0
/// fixed on every block outside `window`. f(Y) = -ln(W(Y) / W(empty)) with
/// W(Y) the chain average of prod_{B in window} t_B([B in Y], sigma_B).
/// Standard errors come from batch means. Bit-identical for a given seed,
/// independent of `jobs`.
McResult metropolis_f(const std::vector<Block>& window, const Volume& volume, const Coupling& coupling,
                      const McOptions& options);

}  // namespace lgrg
