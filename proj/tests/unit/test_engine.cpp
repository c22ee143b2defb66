#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "generators.hpp"
#include "lgrg/engine.hpp"
#include "lgrg/model.hpp"
#include "lgrg/oracle.hpp"
#include "oracles.hpp"

namespace lgrg {
namespace {

using testing::for_all;
using testing::Gen;

const double kLn8 = std::log(8.0);

std::set<testing::Pt> as_pts(const SiteSet& blocks) {
  std::set<testing::Pt> out;
  for (auto s : blocks) out.insert({s.x, s.y});
  return out;
}

// Every block configuration of a volume, as a SiteSet of block indices.
std::vector<SiteSet> all_configs(const Volume& v) {
  std::vector<Site> idx;
  for (const auto& b : v.blocks()) idx.push_back(b.index());
  const SiteSet all{std::vector<Site>(idx)};
  std::vector<SiteSet> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << all.size()); ++m) out.push_back(all.subset(m));
  return out;
}

TEST(Volume, SquareAndRectangle) {
  const Volume sq = Volume::square(2);
  EXPECT_EQ(sq.blocks().size(), 25u);
  EXPECT_EQ(sq.sites().size(), 100u);
  EXPECT_EQ(sq.half_width(), 2);
  EXPECT_EQ(sq.sweep_index({-2, -2}), 0u);
  EXPECT_EQ(sq.sweep_index({-1, -2}), 1u);
  EXPECT_FALSE(sq.sweep_index({3, 0}).has_value());
  const Volume col = Volume::square(2, SweepOrder::column_major);
  EXPECT_EQ(col.sweep_index({-2, -1}), 1u);

  const Volume r = Volume::rectangle(3, 1);
  EXPECT_EQ(r.sites().size(), 12u);
  EXPECT_EQ(r.edges().size(), 6u * 1 + 5u * 2);
  EXPECT_THROW(Volume({Block{0, 0}, Block{0, 0}}), std::invalid_argument);
  EXPECT_THROW(Volume(std::vector<Block>{}), std::invalid_argument);
}

TEST(Engine, IsolatedBlockAtZeroCoupling) {
  const Engine e(Volume::rectangle(1, 1), TruncationPolicy::none(), Coupling(0.0));
  for (const SiteSet cfg : {SiteSet{}, SiteSet{{0, 0}}}) {
    Workspace ws;
    EngineState st = e.start(cfg);
    e.sum_block(st, ws);
    EXPECT_NEAR(st.accumulator(), kLn8, 1e-15);
    EXPECT_EQ(st.cursor(), 1u);
    EXPECT_EQ(st.pending_terms(), 0u);
  }
}

TEST(Engine, ZeroCouplingDecouplesBlocks) {
  for (int L : {1, 2, 3}) {
    for (double cb : {0.5, 2.0, 8.0}) {
      const Engine e(Volume::square(L), {cb, std::nullopt}, Coupling(0.0));
      const double n = (2.0 * L + 1) * (2.0 * L + 1);
      EXPECT_NEAR(e.compute_hbar({}), -n * kLn8, 1e-11);
      EXPECT_NEAR(e.compute_hbar({{0, 0}, {1, 0}, {-1, 1}}), -n * kLn8, 1e-11);
    }
  }
}

TEST(Engine, NoTruncationMatchesDirectSpinSum) {
  for (auto [nx, ny] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}, std::pair{3, 1}}) {
    const Volume v = Volume::rectangle(nx, ny);
    for (double beta : {0.0, critical_beta(), 0.6}) {
      const Engine e(v, TruncationPolicy::none(), Coupling(beta));
      for (const auto& cfg : all_configs(v)) {
        const double ref = testing::naive_hbar(nx, ny, beta, as_pts(cfg));
        EXPECT_NEAR(e.compute_hbar(cfg), ref, 1e-12) << nx << "x" << ny << " beta " << beta << " " << to_string(cfg);
        EXPECT_NEAR(exact_hbar(cfg, v, Coupling(beta)), ref, 1e-12);
      }
    }
  }
}

TEST(Engine, FrozenStripValues) {
  // Reference values from a 30-digit enumeration over spins.
  const Engine two(Volume::rectangle(2, 1), TruncationPolicy::none(), Coupling());
  EXPECT_NEAR(two.compute_hbar({}), -5.4878423526371329795, 1e-12);
  EXPECT_NEAR(two.compute_hbar({{0, 0}}), -4.7805218615046906486, 1e-12);
  EXPECT_NEAR(two.compute_hbar({{0, 0}, {1, 0}}), -5.4878423526371329795, 1e-12);
  const Engine three(Volume::rectangle(3, 1), TruncationPolicy::none(), Coupling());
  EXPECT_NEAR(three.compute_hbar({}), -8.4881644469135536497, 1e-12);
  EXPECT_NEAR(three.compute_hbar({{1, 0}}), -7.0610017773859623262, 1e-12);
  EXPECT_NEAR(three.compute_hbar({{2, 0}}), -7.7913013947567254858, 1e-12);
  const Engine square(Volume::rectangle(2, 2), TruncationPolicy::none(), Coupling());
  EXPECT_NEAR(square.compute_hbar({}), -12.156030567104029986, 1e-12);
  EXPECT_NEAR(square.compute_hbar({{0, 0}}), -10.626872733583625604, 1e-12);
  EXPECT_NEAR(square.compute_hbar({{0, 0}, {1, 1}}), -9.3505503723338721038, 1e-12);
  const Engine hot(Volume::rectangle(2, 2), TruncationPolicy::none(), Coupling(0.6));
  EXPECT_NEAR(hot.compute_hbar({{1, 0}}), -12.519649480363188728, 1e-12);
}

TEST(Engine, SweepOrderIrrelevantWithoutTruncation) {
  for (auto [nx, ny] : {std::pair{2, 2}, std::pair{3, 2}}) {
    const Engine row(Volume::rectangle(nx, ny, SweepOrder::row_major), TruncationPolicy::none(), Coupling());
    const Engine col(Volume::rectangle(nx, ny, SweepOrder::column_major), TruncationPolicy::none(), Coupling());
    for (const auto& cfg : all_configs(row.volume())) EXPECT_NEAR(row.compute_hbar(cfg), col.compute_hbar(cfg), 1e-12);
  }
}

TEST(Engine, GlobalFlipSymmetryWithoutTruncation) {
  const Volume v = Volume::rectangle(3, 2);
  const Engine e(v, TruncationPolicy::none(), Coupling());
  const auto configs = all_configs(v);
  const SiteSet full = configs.back();
  for_all(10, 21, [&](Gen& g) {
    const SiteSet cfg = configs[g.integer(0, static_cast<int>(configs.size()) - 1)];
    std::vector<Site> rest;
    for (auto s : full)
      if (!cfg.contains(s)) rest.push_back(s);
    EXPECT_NEAR(e.compute_hbar(cfg), e.compute_hbar(SiteSet(rest)), 1e-11);
  });
}

TEST(Engine, TruncationConvergesOnSixteenSpins) {
  const Volume v = Volume::rectangle(2, 2);
  const auto configs = all_configs(v);
  std::vector<double> exact;
  for (const auto& cfg : configs) exact.push_back(exact_hbar(cfg, v, Coupling()));
  double prev = std::numeric_limits<double>::infinity();
  for (double cb : {0.5, 2.0, 8.0, 30.0}) {
    const Engine e(v, {cb, std::nullopt}, Coupling());
    double err = 0;
    for (std::size_t k = 0; k < configs.size(); ++k) err += std::abs(e.compute_hbar(configs[k]) - exact[k]);
    err /= static_cast<double>(configs.size());
    EXPECT_LE(err, prev) << "C_B " << cb;
    prev = err;
  }
}

TEST(Engine, StateInvariantsAfterEachBlock) {
  const Volume v = Volume::square(2);
  const Engine e(v, {4.0, std::nullopt}, Coupling());
  Workspace ws;
  EngineState st = e.start({{0, 0}});
  while (st.cursor() < v.blocks().size()) {
    e.sum_block(st, ws);
    ASSERT_TRUE(std::isfinite(st.accumulator()));
    // Every pending term lies on unsummed sites and obeys the cutoff.
    const Interaction pending = st.boundary_terms(v);
    for (const auto& [y, c] : pending.terms()) {
      EXPECT_TRUE(within_cutoff(size_measure(y), 4.0)) << to_string(y) << " S=" << size_measure(y);
      for (auto s : y) EXPECT_GE(*v.sweep_index(block_containing(s)), st.cursor());
    }
  }
  EXPECT_EQ(st.pending_terms(), 0u);
}

TEST(Engine, ReconfigureOnlyTouchesUnsummedBlocks) {
  const Volume v = Volume::rectangle(3, 1);
  const Engine e(v, TruncationPolicy::none(), Coupling());
  Workspace ws;
  EngineState st = e.start({});
  e.sum_block(st, ws);
  e.reconfigure(st, {{2, 0}});
  EXPECT_NEAR(e.finish(st, ws), e.compute_hbar({{2, 0}}), 1e-13);
  EngineState again = e.start({});
  e.sum_block(again, ws);
  EXPECT_THROW(e.reconfigure(again, {{0, 0}}), std::logic_error);
  EXPECT_THROW(e.start({{7, 7}}), std::out_of_range);
}

TEST(TruncationPolicy, Keeps) {
  const TruncationPolicy p{2.0, 3};
  EXPECT_TRUE(p.keeps(3, exact_size_measure({{0, 0}, {1, 0}, {0, 1}})));
  EXPECT_FALSE(p.keeps(4, exact_size_measure({{0, 0}, {1, 0}, {0, 1}, {1, 1}})));
  EXPECT_TRUE(p.keeps(2, exact_size_measure({{0, 0}, {2, 0}})));
  const TruncationPolicy half{0.5, std::nullopt};
  EXPECT_FALSE(half.keeps(2, exact_size_measure({{0, 0}, {1, 1}})));
  EXPECT_TRUE(TruncationPolicy::none().exact());
}

TEST(BlockCollection, SingletonsAtZeroCutoff) {
  const auto c = block_collection({0, 0}, {0.0, std::nullopt});
  ASSERT_EQ(c.size(), 4u);
  for (const auto& s : c) EXPECT_EQ(s.size(), 1u);
}

TEST(BlockCollection, NearestPairsAtHalf) {
  const auto c = block_collection({0, 0}, {0.5, std::nullopt});
  std::size_t pairs = 0;
  for (const auto& s : c) pairs += s.size() == 2;
  // 4 pairs inside the block and 8 leaving it.
  EXPECT_EQ(pairs, 12u);
  EXPECT_EQ(c.size(), 16u);
}

TEST(BlockCollection, MatchesWindowOracle) {
  for (double cb : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
    EXPECT_EQ(block_collection({0, 0}, {cb, std::nullopt}).size(), testing::brute_block_collection_count(cb))
        << "C_B " << cb;
  }
}

TEST(BlockCollection, FrozenCountsAndTranslation) {
  const std::vector<std::pair<double, std::size_t>> counts{{6, 3439}, {8, 11771}};
  for (auto [cb, n] : counts) EXPECT_EQ(block_collection({0, 0}, {cb, std::nullopt}).size(), n);
  const auto here = block_collection({0, 0}, {2.0, std::nullopt});
  const auto there = block_collection({3, -2}, {2.0, std::nullopt});
  ASSERT_EQ(here.size(), there.size());
  std::set<SiteSet> moved;
  for (const auto& s : here) moved.insert(s.translated(6, -4));
  for (const auto& s : there) EXPECT_TRUE(moved.count(s));
}

TEST(BlockCollection, CardinalityCapAndLimit) {
  for (const auto& s : block_collection({0, 0}, {4.0, 2})) EXPECT_LE(s.size(), 2u);
  EXPECT_THROW(block_collection({0, 0}, {8.0, std::nullopt}, 1000), EnumerationLimitExceeded);
}

TEST(PlaceCentered, CentroidRoundsToOrigin) {
  EXPECT_EQ(place_centered({{5, 5}}), (SiteSet{{0, 0}}));
  EXPECT_EQ(place_centered({{0, 0}, {1, 0}}), (SiteSet{{-1, 0}, {0, 0}}));
  for_all(50, 22, [](Gen& g) {
    const SiteSet y = g.site_set(g.integer(1, 6), 6);
    const SiteSet p = place_centered(y);
    EXPECT_EQ(canonical_translate(p), canonical_translate(y));
    double cx = 0, cy = 0;
    for (auto s : p) cx += s.x, cy += s.y;
    EXPECT_LT(std::abs(cx / static_cast<double>(p.size())), 1.0);
    EXPECT_LT(std::abs(cy / static_cast<double>(p.size())), 1.0);
  });
}

TEST(FreeEnergyBatch, ZeroCouplingGivesZeros) {
  const auto classes = enumerate_classes(4, Symmetry::translation);
  const FreeEnergyTable t = free_energy_batch(classes, Volume::square(3), {2.0, std::nullopt}, Coupling(0.0));
  EXPECT_EQ(t.size(), classes.size());
  for (const auto& [x, f] : t.entries()) EXPECT_NEAR(f, 0.0, 1e-12) << to_string(x);
  EXPECT_EQ(t.meta().at("L"), "3");
  EXPECT_EQ(t.meta().at("engine"), kEngineVersion);
}

TEST(FreeEnergyBatch, SingletonOnStripMatchesOracle) {
  const Volume v = Volume::rectangle(3, 1);
  const std::vector<SymmetryClass> single{{SiteSet{{0, 0}}, 1}};
  const FreeEnergyTable t = free_energy_batch(single, v, TruncationPolicy::none(), Coupling());
  const double ref = exact_hbar({{0, 0}}, v, Coupling()) - exact_hbar({}, v, Coupling());
  EXPECT_NEAR(*t.lookup({{0, 0}}), ref, 1e-12);
}

TEST(FreeEnergyBatch, DeterministicAcrossJobs) {
  const auto classes = enumerate_classes(3, Symmetry::translation);
  const Volume v = Volume::square(3);
  const FreeEnergyTable one = free_energy_batch(classes, v, {4.0, std::nullopt}, Coupling(), 1);
  const FreeEnergyTable four = free_energy_batch(classes, v, {4.0, std::nullopt}, Coupling(), 4);
  EXPECT_EQ(one.entries(), four.entries());
}

TEST(FreeEnergyBatch, MatchesDirectDifference) {
  const Volume v = Volume::square(2);
  const TruncationPolicy p{2.0, std::nullopt};
  const auto classes = enumerate_classes(2, Symmetry::translation);
  const FreeEnergyTable t = free_energy_batch(classes, v, p, Coupling());
  const Engine e(v, p, Coupling());
  const double empty = e.compute_hbar({});
  for (const auto& k : classes)
    EXPECT_NEAR(*t.lookup(k.representative), e.compute_hbar(place_centered(k.representative)) - empty, 1e-10);
}

TEST(FreeEnergyBatch, OversizedClassIsSkipped) {
  const std::vector<SymmetryClass> wide{{SiteSet{{0, 0}, {5, 0}}, 1}, {SiteSet{{0, 0}}, 1}};
  const FreeEnergyTable t = free_energy_batch(wide, Volume::square(1), {2.0, std::nullopt}, Coupling());
  EXPECT_EQ(t.size(), 1u);
  EXPECT_TRUE(t.contains({{0, 0}}));
}

}  // namespace
}  // namespace lgrg
