#include "lgrg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include <spdlog/spdlog.h>

namespace lgrg {

namespace {

struct SpinLayout {
  std::size_t n_sites = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<std::array<std::uint32_t, 4>> block_sites;  // sweep order
};

SpinLayout layout_of(const Volume& v) {
  SpinLayout out;
  out.n_sites = v.sites().size();
  out.edges = v.edges();
  for (const Block& b : v.blocks()) {
    std::array<std::uint32_t, 4> ids{};
    const auto members = b.sites();
    for (int p = 0; p < 4; ++p) ids[p] = *v.site_id(members[p]);
    out.block_sites.push_back(ids);
  }
  return out;
}

double pairwise_sum(std::vector<double> v) {
  if (v.empty()) return 0.0;
  while (v.size() > 1) {
    std::vector<double> next((v.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = v[2 * i] + (2 * i + 1 < v.size() ? v[2 * i + 1] : 0.0);
    }
    v = std::move(next);
  }
  return v[0];
}

// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(unit_uniform(rng) * static_cast<double>(n));
}

}  // namespace

double exact_hbar(const SiteSet& block_config, const Volume& volume, const Coupling& coupling, unsigned jobs) {
  const SpinLayout lay = layout_of(volume);
  if (lay.n_sites > kMaxOracleSpins) {
    throw std::domain_error("exhaustive enumeration limited to " + std::to_string(kMaxOracleSpins) + " spins, volume has " +
                            std::to_string(lay.n_sites));
  }
  std::vector<std::uint8_t> vars(volume.blocks().size(), 0);
  for (const Site& b : block_config) {
    auto k = volume.sweep_index(Block{b.x, b.y});
    if (!k) throw std::out_of_range("block configuration leaves the volume");
    vars[*k] = 1;
  }
  const std::array<std::array<double, 16>, 2> kernel{majority_kernel_row(0), majority_kernel_row(1)};
  const double beta = coupling.beta();
  // -H <= beta * #edges, so weights relative to that shift never overflow.
  const double shift = beta * static_cast<double>(lay.edges.size());

  const std::uint64_t total = std::uint64_t{1} << lay.n_sites;
  const std::uint64_t chunk = std::min<std::uint64_t>(total, 4096);
  const std::uint64_t n_chunks = total / chunk;
  std::vector<double> partial(n_chunks, 0.0);

  auto sum_chunk = [&](std::uint64_t c) {
    double acc = 0.0;
    for (std::uint64_t cfg = c * chunk; cfg < (c + 1) * chunk; ++cfg) {
      double t = 1.0;
      for (std::size_t b = 0; b < lay.block_sites.size() && t != 0.0; ++b) {
        unsigned local = 0;
        for (int p = 0; p < 4; ++p) local |= static_cast<unsigned>((cfg >> lay.block_sites[b][p]) & 1u) << p;
        t *= kernel[vars[b]][local];
      }
      if (t == 0.0) continue;
      int aligned = 0;
      for (const auto& [a, bb] : lay.edges) aligned += (((cfg >> a) ^ (cfg >> bb)) & 1u) ? -1 : 1;
      acc += t * std::exp(beta * aligned - shift);
    }
    partial[c] = acc;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::uint64_t>(n_chunks, 256))));
  if (workers == 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) sum_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t c = w; c < n_chunks; c += workers) sum_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  const double z = pairwise_sum(std::move(partial));
  if (!(z > 0.0)) throw std::runtime_error("constrained partition sum vanished");
  return -(shift + std::log(z));
}

McResult metropolis_f(const std::vector<Block>& window, const Volume& volume, const Coupling& coupling,
                      const McOptions& options) {
  if (window.empty()) throw std::invalid_argument("Monte Carlo window is empty");
  if (window.size() > 16) throw std::invalid_argument("Monte Carlo window limited to 16 blocks");
  if (options.chains == 0 || options.batches_per_chain < 2) throw std::invalid_argument("need chains >= 1 and >= 2 batches");
  const SpinLayout lay = layout_of(volume);
  const std::size_t n_sites = lay.n_sites;
  const std::size_t n_blocks = lay.block_sites.size();

  std::vector<int> window_slot(n_blocks, -1);
  for (std::size_t w = 0; w < window.size(); ++w) {
    auto k = volume.sweep_index(window[w]);
    if (!k) throw std::out_of_range("window block outside the volume");
    if (window_slot[*k] >= 0) throw std::invalid_argument("window lists a block twice");
    window_slot[*k] = static_cast<int>(w);
  }

  std::vector<std::vector<std::uint32_t>> neighbors(n_sites);
  for (const auto& [a, b] : lay.edges) {
    neighbors[a].push_back(b);
    neighbors[b].push_back(a);
  }
  std::vector<std::uint32_t> site_block(n_sites);
  std::vector<std::uint8_t> site_pos(n_sites);
  for (std::size_t b = 0; b < n_blocks; ++b)
    for (int p = 0; p < 4; ++p) {
      site_block[lay.block_sites[b][p]] = static_cast<std::uint32_t>(b);
      site_pos[lay.block_sites[b][p]] = static_cast<std::uint8_t>(p);
    }

  const auto t0 = majority_kernel_row(0);
  const auto t1 = majority_kernel_row(1);
  const double beta = coupling.beta();
  const std::size_t n_patterns = std::size_t{1} << window.size();
  const std::uint64_t per_chain = options.samples / options.chains;
  const std::size_t batches = options.batches_per_chain;
  const std::uint64_t batch_len = per_chain / batches;
  if (batch_len == 0) throw std::invalid_argument("too few samples for the requested batches");

  // batch_sums[chain][batch][pattern]
  std::vector<std::vector<double>> batch_sums(options.chains, std::vector<double>(batches * n_patterns, 0.0));
  std::vector<std::uint64_t> accepted(options.chains, 0);

  auto run_chain = [&](unsigned chain) {
    std::seed_seq seq{options.seed, std::uint64_t{chain}, std::uint64_t{0x6c677267}};
    std::mt19937_64 rng(seq);
    std::vector<std::uint8_t> n(n_sites, 0);
    std::vector<std::uint8_t> block_cfg(n_blocks, 0);
    std::vector<double> window_t(window.size() * 2);
    auto& sums = batch_sums[chain];

    auto sweep = [&] {
      for (std::size_t step = 0; step < n_sites; ++step) {
        const auto s = static_cast<std::uint32_t>(below(rng, n_sites));
        const int sigma = 1 - 2 * n[s];
        int field = 0;
        for (std::uint32_t q : neighbors[s]) field += 1 - 2 * n[q];
        double ratio = std::exp(-2.0 * beta * sigma * field);
        const std::uint32_t b = site_block[s];
        if (window_slot[b] < 0) {
          const std::uint8_t before = block_cfg[b];
          const auto after = static_cast<std::uint8_t>(before ^ (1u << site_pos[s]));
          if (t0[after] == 0.0) continue;
          ratio *= t0[after] / t0[before];
        }
        if (ratio >= 1.0 || unit_uniform(rng) < ratio) {
          n[s] ^= 1;
          block_cfg[b] ^= static_cast<std::uint8_t>(1u << site_pos[s]);
          ++accepted[chain];
        }
      }
    };

    for (std::uint64_t i = 0; i < options.burn_in; ++i) sweep();
    std::vector<std::size_t> window_blocks(window.size());
    for (std::size_t b = 0; b < n_blocks; ++b)
      if (window_slot[b] >= 0) window_blocks[static_cast<std::size_t>(window_slot[b])] = b;
    for (std::size_t batch = 0; batch < batches; ++batch) {
      double* row = &sums[batch * n_patterns];
      for (std::uint64_t i = 0; i < batch_len; ++i) {
        sweep();
        for (std::size_t w = 0; w < window.size(); ++w) {
          window_t[2 * w] = t0[block_cfg[window_blocks[w]]];
          window_t[2 * w + 1] = t1[block_cfg[window_blocks[w]]];
        }
        for (std::size_t pat = 0; pat < n_patterns; ++pat) {
          double prod = 1.0;
          for (std::size_t w = 0; w < window.size() && prod != 0.0; ++w) prod *= window_t[2 * w + ((pat >> w) & 1u)];
          row[pat] += prod;
        }
      }
    }
  };

  const unsigned workers = std::max(1u, std::min(options.jobs, options.chains));
  if (workers == 1) {
    for (unsigned c = 0; c < options.chains; ++c) run_chain(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (unsigned c = w; c < options.chains; c += workers) run_chain(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  McResult result;
  result.sweeps = per_chain * options.chains;
  std::uint64_t acc_total = 0;
  for (auto a : accepted) acc_total += a;
  result.acceptance = static_cast<double>(acc_total) /
                      static_cast<double>((options.burn_in + batch_len * batches) * options.chains * n_sites);

  std::vector<Site> window_sites;
  for (const Block& b : window) window_sites.push_back(b.index());
  const std::size_t total_batches = batches * options.chains;
  for (std::size_t pat = 1; pat < n_patterns; ++pat) {
    std::vector<Site> members;
    for (std::size_t w = 0; w < window.size(); ++w)
      if ((pat >> w) & 1u) members.push_back(window_sites[w]);
    McEstimate est{SiteSet(std::move(members)), std::nullopt, 0.0};

    double num = 0.0, den = 0.0;
    std::vector<double> per_batch;
    bool batch_defined = true;
    for (unsigned c = 0; c < options.chains; ++c) {
      for (std::size_t b = 0; b < batches; ++b) {
        const double y = batch_sums[c][b * n_patterns + pat];
        const double e = batch_sums[c][b * n_patterns];
        num += y;
        den += e;
        if (y > 0.0 && e > 0.0) {
          per_batch.push_back(-std::log(y / e));
        } else {
          batch_defined = false;
        }
      }
    }
    if (num > 0.0 && den > 0.0) {
      est.f = -std::log(num / den);
      if (batch_defined) {
        double mean = 0.0;
        for (double v : per_batch) mean += v;
        mean /= static_cast<double>(total_batches);
        double var = 0.0;
        for (double v : per_batch) var += (v - mean) * (v - mean);
        var /= static_cast<double>(total_batches - 1);
        est.std_error = std::sqrt(var / static_cast<double>(total_batches));
      } else {
        est.std_error = std::numeric_limits<double>::infinity();
        spdlog::warn("f{}: some batches carried no weight; standard error unavailable", to_string(est.y));
      }
    } else {
      spdlog::warn("f{}: window configuration never carried weight", to_string(est.y));
    }
    result.estimates.push_back(std::move(est));
  }
  return result;
}

}  // namespace lgrg
