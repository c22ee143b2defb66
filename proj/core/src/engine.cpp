#include "lgrg/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "lgrg/table_io.hpp"

namespace lgrg {

namespace {

bool sweep_less(SweepOrder order, const Block& a, const Block& b) {
  if (order == SweepOrder::row_major) return a.j != b.j ? a.j < b.j : a.i < b.i;
  return a.i != b.i ? a.i < b.i : a.j < b.j;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Volume Volume::square(int L, SweepOrder order) {
  if (L < 0) throw std::invalid_argument("volume half-width must be nonnegative");
  std::vector<Block> blocks;
  for (int j = -L; j <= L; ++j)
    for (int i = -L; i <= L; ++i) blocks.push_back({i, j});
  Volume v(std::move(blocks), order);
  v.half_width_ = L;
  return v;
}

Volume Volume::rectangle(int nx, int ny, SweepOrder order) {
  if (nx <= 0 || ny <= 0) throw std::invalid_argument("rectangle dimensions must be positive");
  std::vector<Block> blocks;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) blocks.push_back({i, j});
  return Volume(std::move(blocks), order);
}

Volume::Volume(std::vector<Block> blocks, SweepOrder order) : blocks_(std::move(blocks)), order_(order) {
  if (blocks_.empty()) throw std::invalid_argument("volume needs at least one block");
  std::sort(blocks_.begin(), blocks_.end(), [order](const Block& a, const Block& b) { return sweep_less(order, a, b); });
  if (std::adjacent_find(blocks_.begin(), blocks_.end()) != blocks_.end()) {
    throw std::invalid_argument("volume lists a block twice");
  }
  std::vector<std::pair<Site, std::size_t>> owned;
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    for (const Site& s : blocks_[k].sites()) owned.emplace_back(s, k);
  std::sort(owned.begin(), owned.end());
  for (const auto& [s, k] : owned) {
    sites_.push_back(s);
    site_block_.push_back(k);
  }
}

std::optional<std::size_t> Volume::sweep_index(Block b) const {
  auto it = std::lower_bound(blocks_.begin(), blocks_.end(), b,
                             [this](const Block& a, const Block& x) { return sweep_less(order_, a, x); });
  if (it == blocks_.end() || *it != b) return std::nullopt;
  return static_cast<std::size_t>(it - blocks_.begin());
}

std::optional<std::uint32_t> Volume::site_id(Site s) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
  if (it == sites_.end() || *it != s) return std::nullopt;
  return static_cast<std::uint32_t>(it - sites_.begin());
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Volume::edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t a = 0; a < sites_.size(); ++a) {
    for (Site n : {Site{sites_[a].x + 1, sites_[a].y}, Site{sites_[a].x, sites_[a].y + 1}}) {
      if (auto b = site_id(n)) out.emplace_back(a, *b);
    }
  }
  return out;
}

bool TruncationPolicy::keeps(std::size_t cardinality, const ExactSize& size) const {
  if (max_cardinality && cardinality > static_cast<std::size_t>(*max_cardinality)) return false;
  if (cutoff == std::numeric_limits<double>::infinity()) return true;
  return within_cutoff(size.value(), cutoff);
}

std::string TruncationPolicy::describe() const {
  std::string out = "C_B=" + format_double(cutoff);
  if (max_cardinality) out += " max_cardinality=" + std::to_string(*max_cardinality);
  return out;
}

std::vector<SiteSet> block_collection(Block b, const TruncationPolicy& policy, std::size_t max_sets) {
  if (!std::isfinite(policy.cutoff)) throw std::domain_error("block collection needs a finite cutoff");
  const auto members = b.sites();
  std::set<SiteSet> out;
  for_each_translation_class(policy.cutoff, [&](const SiteSet& rep) {
    if (policy.max_cardinality && rep.size() > static_cast<std::size_t>(*policy.max_cardinality)) return false;
    for (const Site& s : rep) {
      for (const Site& q : members) {
        out.insert(rep.translated(q.x - s.x, q.y - s.y));
        if (max_sets != 0 && out.size() > max_sets) {
          throw EnumerationLimitExceeded("block collection exceeds " + std::to_string(max_sets) + " sets at " +
                                         policy.describe());
        }
      }
    }
    return true;
  });
  return {out.begin(), out.end()};
}

std::size_t TermKeyHash::operator()(const TermKey& k) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint32_t v : k) {
    h ^= v;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::size_t EngineState::pending_terms() const {
  std::size_t n = 0;
  for (const Bucket& b : pending_) n += b.size();
  return n;
}

Interaction EngineState::boundary_terms(const Volume& v) const {
  Interaction out(Basis::gas, Scope::absolute);
  for (const Bucket& bucket : pending_) {
    for (const auto& [key, value] : bucket) {
      std::vector<Site> sites;
      for (std::uint32_t id : key) sites.push_back(v.sites()[id]);
      out.add(SiteSet(std::move(sites)), value);
    }
  }
  return out;
}

Engine::Engine(Volume volume, TruncationPolicy policy, Coupling coupling)
    : volume_(std::move(volume)), policy_(policy), coupling_(coupling) {
  if (policy_.cutoff < 0.0 || std::isnan(policy_.cutoff)) throw std::domain_error("C_B must be nonnegative");
  if (policy_.max_cardinality && *policy_.max_cardinality < 1) throw std::domain_error("max_cardinality must be >= 1");
  for (const Site& s : volume_.sites()) site_pos_.push_back(static_cast<std::uint8_t>(position_in_block(s)));

  // The exponent is -H; each edge contributes -gas_edge_terms.
  initial_terms_.resize(volume_.blocks().size());
  for (const auto& [a, b] : volume_.edges()) {
    const Interaction h = gas_edge_terms(coupling_.beta(), volume_.sites()[a], volume_.sites()[b]);
    for (const auto& [set, c] : h.terms()) {
      if (set.empty()) {
        initial_constant_ -= c;
        continue;
      }
      TermKey key;
      std::size_t first = volume_.blocks().size();
      for (const Site& s : set) {
        const std::uint32_t id = *volume_.site_id(s);
        key.push_back(id);
        first = std::min(first, volume_.block_of_site(id));
      }
      initial_terms_[first][key] -= c;
    }
  }
}

std::vector<std::uint8_t> Engine::block_vars_for(const SiteSet& block_config) const {
  std::vector<std::uint8_t> vars(volume_.blocks().size(), 0);
  for (const Site& b : block_config) {
    auto k = volume_.sweep_index(Block{b.x, b.y});
    if (!k) throw std::out_of_range("block (" + std::to_string(b.x) + "," + std::to_string(b.y) + ") is outside the volume");
    vars[*k] = 1;
  }
  return vars;
}

EngineState Engine::start(const SiteSet& block_config) const {
  EngineState s;
  s.pending_ = initial_terms_;
  s.accumulator_ = initial_constant_;
  s.cursor_ = 0;
  s.block_vars_ = block_vars_for(block_config);
  return s;
}

void Engine::reconfigure(EngineState& state, const SiteSet& block_config) const {
  std::vector<std::uint8_t> vars = block_vars_for(block_config);
  for (std::size_t k = 0; k < state.cursor_; ++k) {
    if (vars[k] != state.block_vars_[k]) throw std::logic_error("reconfigure would change an already summed block");
  }
  state.block_vars_ = std::move(vars);
}

void Engine::sum_block(EngineState& state, Workspace& ws) const {
  const std::size_t k = state.cursor_;
  if (k >= volume_.blocks().size()) throw std::logic_error("sweep already complete");

  EngineState::Bucket bucket;
  bucket.swap(state.pending_[k]);
  std::vector<std::pair<TermKey, double>> terms(bucket.begin(), bucket.end());
  EngineState::Bucket().swap(bucket);
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  ws.outside.clear();
  for (const auto& [key, c] : terms)
    for (std::uint32_t id : key)
      if (volume_.block_of_site(id) != k) ws.outside.push_back(id);
  std::sort(ws.outside.begin(), ws.outside.end());
  ws.outside.erase(std::unique(ws.outside.begin(), ws.outside.end()), ws.outside.end());
  const std::size_t m = ws.outside.size();
  if (m > 64) throw std::runtime_error("boundary of block " + std::to_string(k) + " has " + std::to_string(m) + " sites; at most 64 are supported");
  ws.max_outside = std::max(ws.max_outside, m);

  // Family of retained outside sets, downward closed, grown in index order.
  ws.family.clear();
  ws.family.push_back(0);
  const auto& sites = volume_.sites();
  auto grow = [&](auto&& self, std::size_t next, std::uint64_t mask, std::int64_t n, std::int64_t sx, std::int64_t sy,
                  std::int64_t sq) -> void {
    for (std::size_t d = next; d < m; ++d) {
      const Site& p = sites[ws.outside[d]];
      const std::int64_t n2 = n + 1, sx2 = sx + p.x, sy2 = sy + p.y;
      const std::int64_t sq2 = sq + std::int64_t{p.x} * p.x + std::int64_t{p.y} * p.y;
      if (!policy_.keeps(static_cast<std::size_t>(n2), ExactSize{n2 * sq2 - sx2 * sx2 - sy2 * sy2, n2})) continue;
      const std::uint64_t grown = mask | (std::uint64_t{1} << d);
      ws.family.push_back(grown);
      if (ws.family.size() > kMaxFamily) {
        throw std::runtime_error("retained family exceeds " + std::to_string(kMaxFamily) + " sets at " + policy_.describe());
      }
      self(self, d + 1, grown, n2, sx2, sy2, sq2);
    }
  };
  grow(grow, 0, 0, 0, 0, 0, 0);
  const std::size_t fam = ws.family.size();
  ws.max_family = std::max(ws.max_family, fam);

  ws.family_index.clear();
  ws.family_index.reserve(fam * 2);
  for (std::uint32_t idx = 0; idx < fam; ++idx) ws.family_index.emplace(ws.family[idx], idx);

  ws.drop_pairs.clear();
  ws.stage_begin.assign(m + 1, 0);
  for (std::size_t d = 0; d < m; ++d) {
    ws.stage_begin[d] = ws.drop_pairs.size();
    const std::uint64_t bit = std::uint64_t{1} << d;
    for (std::uint32_t idx = 0; idx < fam; ++idx) {
      if (ws.family[idx] & bit) {
        ws.drop_pairs.push_back(idx);
        ws.drop_pairs.push_back(ws.family_index.at(ws.family[idx] ^ bit));
      }
    }
  }
  ws.stage_begin[m] = ws.drop_pairs.size();

  ws.g.assign(fam * 16, 0.0);
  for (const auto& [key, c] : terms) {
    std::uint64_t outside_mask = 0;
    unsigned inside = 0;
    for (std::uint32_t id : key) {
      if (volume_.block_of_site(id) == k) {
        inside |= 1u << site_pos_[id];
      } else {
        const auto pos = std::lower_bound(ws.outside.begin(), ws.outside.end(), id) - ws.outside.begin();
        outside_mask |= std::uint64_t{1} << pos;
      }
    }
    auto it = ws.family_index.find(outside_mask);
    if (it == ws.family_index.end()) throw std::logic_error("pending term violates the truncation policy");
    ws.g[std::size_t{it->second} * 16 + inside] += c;
  }

  // Zeta transform over the family: g[Y] <- sum over Z subset of Y.
  for (std::size_t d = 0; d < m; ++d) {
    for (std::size_t p = ws.stage_begin[d]; p < ws.stage_begin[d + 1]; p += 2) {
      double* dst = &ws.g[std::size_t{ws.drop_pairs[p]} * 16];
      const double* src = &ws.g[std::size_t{ws.drop_pairs[p + 1]} * 16];
      for (int s = 0; s < 16; ++s) dst[s] += src[s];
    }
  }

  const auto kernel = majority_kernel_row(state.block_vars_[k]);
  std::array<double, 16> log_t{};
  std::array<int, 16> active{};
  int n_active = 0;
  for (int s = 0; s < 16; ++s) {
    if (kernel[s] > 0.0) {
      active[n_active++] = s;
      log_t[s] = std::log(kernel[s]);
    }
  }

  ws.f.resize(fam);
  for (std::size_t y = 0; y < fam; ++y) {
    std::array<double, 16> w;
    std::copy_n(&ws.g[y * 16], 16, w.begin());
    for (int b = 0; b < 4; ++b)
      for (int s = 0; s < 16; ++s)
        if (s & (1 << b)) w[s] += w[s ^ (1 << b)];
    double peak = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_active; ++a) peak = std::max(peak, log_t[active[a]] + w[active[a]]);
    double sum = 0.0;
    for (int a = 0; a < n_active; ++a) sum += std::exp(log_t[active[a]] + w[active[a]] - peak);
    if (!(sum > 0.0) || !std::isfinite(peak)) throw std::runtime_error("block summation produced a nonpositive total weight");
    ws.f[y] = peak + std::log(sum);
  }

  // Moebius inversion over the family: b'(X) = sum (-1)^{|X|-|Y|} F(n^Y).
  for (std::size_t d = 0; d < m; ++d) {
    for (std::size_t p = ws.stage_begin[d]; p < ws.stage_begin[d + 1]; p += 2) {
      ws.f[ws.drop_pairs[p]] -= ws.f[ws.drop_pairs[p + 1]];
    }
  }

  state.accumulator_ += ws.f[0];
  if (!std::isfinite(state.accumulator_)) throw std::runtime_error("accumulator is not finite");
  for (std::size_t y = 1; y < fam; ++y) {
    const double value = ws.f[y];
    if (std::abs(value) < 1e-14) continue;
    TermKey key;
    std::size_t first = volume_.blocks().size();
    for (std::uint64_t mask = ws.family[y]; mask != 0; mask &= mask - 1) {
      const std::uint32_t id = ws.outside[static_cast<std::size_t>(std::countr_zero(mask))];
      key.push_back(id);
      first = std::min(first, volume_.block_of_site(id));
    }
    state.pending_[first][std::move(key)] += value;
  }
  ++state.cursor_;
}

double Engine::finish(EngineState& state, Workspace& ws) const {
  while (state.cursor_ < volume_.blocks().size()) sum_block(state, ws);
  return -state.accumulator_;
}

double Engine::compute_hbar(const SiteSet& block_config) const {
  Workspace ws;
  EngineState s = start(block_config);
  return finish(s, ws);
}

SiteSet place_centered(const SiteSet& rep) {
  if (rep.empty()) return rep;
  std::int64_t sx = 0, sy = 0;
  for (const Site& s : rep) {
    sx += s.x;
    sy += s.y;
  }
  const auto n = static_cast<std::int64_t>(rep.size());
  const auto dx = floor_div(2 * sx + n, 2 * n);
  const auto dy = floor_div(2 * sy + n, 2 * n);
  return rep.translated(static_cast<std::int32_t>(-dx), static_cast<std::int32_t>(-dy));
}

FreeEnergyTable free_energy_batch(const std::vector<SymmetryClass>& classes, const Volume& volume,
                                  const TruncationPolicy& policy, const Coupling& coupling, unsigned jobs) {
  const Engine engine(volume, policy, coupling);
  const std::size_t n = classes.size();

  Metadata meta;
  if (volume.half_width()) meta["L"] = std::to_string(*volume.half_width());
  meta["blocks"] = std::to_string(volume.blocks().size());
  meta["C_B"] = format_double(policy.cutoff);
  if (policy.max_cardinality) meta["max_cardinality"] = std::to_string(*policy.max_cardinality);
  meta["beta"] = format_double(coupling.beta());
  meta["sweep"] = volume.order() == SweepOrder::row_major ? "row_major" : "column_major";
  meta["engine"] = kEngineVersion;
  FreeEnergyTable table(meta);
  if (n == 0) return table;

  // Blocks before the first block with value 1 are summed exactly as in the
  // all-zero run, so each entry resumes from a snapshot of that run.
  std::vector<SiteSet> placed(n);
  std::vector<std::optional<std::size_t>> first(n);
  std::size_t margin_violations = 0;
  for (std::size_t c = 0; c < n; ++c) {
    placed[c] = place_centered(classes[c].representative);
    std::size_t lo = volume.blocks().size();
    bool inside = true;
    for (const Site& b : placed[c]) {
      auto k = volume.sweep_index(Block{b.x, b.y});
      if (!k) {
        inside = false;
        break;
      }
      lo = std::min(lo, *k);
      if (volume.half_width() && std::max(std::abs(b.x), std::abs(b.y)) > *volume.half_width() - 2) ++margin_violations;
    }
    if (inside) {
      first[c] = lo;
    } else {
      spdlog::error("class {} does not fit in the volume; entry skipped", to_string(classes[c].representative));
    }
  }
  if (margin_violations > 0) {
    spdlog::warn("{} block(s) of placed classes lie within 2 blocks of the volume edge", margin_violations);
  }

  std::set<std::size_t> needed;
  for (const auto& f : first)
    if (f) needed.insert(*f);

  const auto t0 = std::chrono::steady_clock::now();
  std::map<std::size_t, EngineState> snapshots;
  Workspace ws;
  EngineState empty = engine.start({});
  for (std::size_t k = 0; k <= volume.blocks().size(); ++k) {
    if (needed.count(k)) snapshots.emplace(k, empty);
    if (k < volume.blocks().size()) engine.sum_block(empty, ws);
  }
  const double hbar_empty = -empty.accumulator();
  spdlog::info("Hbar(empty) = {} over {} blocks ({}, max boundary {}, max family {})", format_double(hbar_empty),
               volume.blocks().size(), policy.describe(), ws.max_outside, ws.max_family);

  std::vector<std::optional<double>> results(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  const std::size_t report_every = std::max<std::size_t>(1, n / 20);
  auto worker = [&] {
    Workspace local;
    for (std::size_t c = next++; c < n; c = next++) {
      if (!first[c]) {
        ++done;
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        EngineState s = snapshots.at(*first[c]);
        engine.reconfigure(s, placed[c]);
        results[c] = engine.finish(s, local) - hbar_empty;
      } catch (const std::exception& e) {
        spdlog::error("f{} failed: {}", to_string(classes[c].representative), e.what());
      }
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      spdlog::debug("f{} done in {:.1f} ms", to_string(classes[c].representative), ms);
      const std::size_t finished = ++done;
      if (finished % report_every == 0 || finished == n) spdlog::info("free energies: {}/{}", finished, n);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t c = 0; c < n; ++c) {
    if (results[c]) table.set(classes[c].representative, *results[c]);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  spdlog::info("free-energy batch: {} of {} entries in {:.1f} s", table.size(), n, secs);
  return table;
}

}  // namespace lgrg
