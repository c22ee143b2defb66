#include "lgrg/model.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace lgrg {

double critical_beta() { return 0.5 * std::log1p(std::sqrt(2.0)); }

Coupling::Coupling(double beta) : beta_(beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::domain_error("coupling beta must be finite and >= 0");
}

namespace {
std::int32_t floor_div2(std::int32_t v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }
}  // namespace

Block block_containing(Site s) { return {floor_div2(s.x), floor_div2(s.y)}; }

int position_in_block(Site s) {
  const Block b = block_containing(s);
  return (s.x - 2 * b.i) + 2 * (s.y - 2 * b.j);
}

Interaction gas_edge_terms(double beta, Site u, Site v) {
  const int dist = std::abs(u.x - v.x) + std::abs(u.y - v.y);
  if (dist != 1) throw std::domain_error("gas_edge_terms: sites are not nearest neighbors");
  // -beta (1 - 2 n_u)(1 - 2 n_v)
  Interaction h(Basis::gas, Scope::absolute);
  h.add(SiteSet{}, -beta);
  h.add(SiteSet{u}, 2.0 * beta);
  h.add(SiteSet{v}, 2.0 * beta);
  h.add(SiteSet{u, v}, -4.0 * beta);
  return h;
}

double majority_kernel(int block_var, std::uint8_t config) {
  const int ones = std::popcount(static_cast<unsigned>(config & 0xF));
  if (ones == 2) return 0.5;
  const bool majority_one = ones >= 3;
  return (majority_one == (block_var == 1)) ? 1.0 : 0.0;
}

std::array<double, 16> majority_kernel_row(int block_var) {
  std::array<double, 16> row{};
  for (unsigned m = 0; m < 16; ++m) row[m] = majority_kernel(block_var, static_cast<std::uint8_t>(m));
  return row;
}

}  // namespace lgrg
