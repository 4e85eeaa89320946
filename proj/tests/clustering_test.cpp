#include <random>
#include <set>

#include <gtest/gtest.h>

#include "delib/clustering.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace delib;
using fixture::error_of;
using fixture::make_table;
using Sets = std::vector<std::vector<int>>;

namespace {

std::vector<ProposalId> pids(int n) {
  std::vector<ProposalId> v;
  for (int i = 1; i <= n; ++i) v.push_back(ProposalId{static_cast<std::uint64_t>(i)});
  return v;
}

std::vector<std::vector<ProposalId>> partition(const Clustering& c) {
  std::vector<std::vector<ProposalId>> out;
  for (const auto& cl : c.clusters) out.push_back(cl.members);
  return out;
}

}  // namespace

TEST(Jaccard, Examples) {
  auto t = make_table(4, Sets{{0, 1}, {2, 3}, {0, 1}, {0, 1, 2}, {1, 2, 3}, {}, {}});
  const auto& s = t.state();
  const auto& p = t.proposals;
  EXPECT_DOUBLE_EQ(jaccard_weight(p[0], p[1], s), 0.0);
  EXPECT_DOUBLE_EQ(jaccard_weight(p[0], p[2], s), 1.0);
  EXPECT_DOUBLE_EQ(jaccard_weight(p[3], p[4], s), 0.5);
  EXPECT_DOUBLE_EQ(jaccard_weight(p[5], p[6], s), 0.0);
  EXPECT_EQ(error_of([&] { jaccard_weight(p[0], p[0], s); }), "SelfEdge");
  EXPECT_EQ(error_of([&] { jaccard_weight(p[0], ProposalId{99}, s); }), "NotFound");
}

TEST(Jaccard, DisagreementDoesNotCount) {
  auto t = make_table(4, Sets{{0}, {0}}, {}, true);
  EXPECT_DOUBLE_EQ(jaccard_weight(t.proposals[0], t.proposals[1], t.state()), 1.0);
}

TEST(Jaccard, RandomPairsAgreeWithOracle) {
  std::mt19937 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const oracle::Mask a = rng() & 0xfff, b = rng() & 0xfff;
    ParticipantSet sa, sb;
    for (int k = 0; k < 12; ++k) {
      if (a >> k & 1) sa.push_back(ParticipantId{static_cast<std::uint64_t>(k + 1)});
      if (b >> k & 1) sb.push_back(ParticipantId{static_cast<std::uint64_t>(k + 1)});
    }
    EXPECT_DOUBLE_EQ(jaccard(sa, sb), oracle::jaccard(a, b));
    EXPECT_DOUBLE_EQ(jaccard(sa, sb), jaccard(sb, sa));
  }
}

TEST(BuildGraph, EdgeCountsAndWeights) {
  auto one = make_table(2, Sets{{0}});
  EXPECT_EQ(build_graph(one.state()).size(), 1u);
  EXPECT_EQ(build_graph(one.state()).edge_count(), 0u);

  auto t = make_table(5, Sets{{0, 1}, {1, 2}, {0, 1, 2, 3}, {4}});
  const auto g = build_graph(t.state());
  EXPECT_EQ(g.edge_count(), 6u);
  for (auto a : t.proposals)
    for (auto b : t.proposals)
      if (a != b) {
        const auto ma = t.mask(agree_set(a, t.state())), mb = t.mask(agree_set(b, t.state()));
        EXPECT_DOUBLE_EQ(g.weight(a, b), oracle::jaccard(ma, mb));
        EXPECT_DOUBLE_EQ(g.weight(a, b), g.weight(b, a));
      }
}

TEST(ThresholdClusters, HandExample) {
  AgreementGraph g(pids(3));
  g.set_weight(0, 1, 0.6);
  g.set_weight(1, 2, 0.1);
  g.set_weight(0, 2, 0.05);
  const auto c = threshold_clusters(g, 0.4);
  ASSERT_EQ(c.clusters.size(), 2u);
  EXPECT_EQ(c.clusters[0].label, ProposalId{1});
  EXPECT_EQ(c.clusters[0].members, (std::vector<ProposalId>{ProposalId{1}, ProposalId{2}}));
  EXPECT_EQ(c.clusters[1].members, (std::vector<ProposalId>{ProposalId{3}}));
  EXPECT_EQ(threshold_clusters(g, 0.0).clusters.size(), 1u);
  EXPECT_EQ(threshold_clusters(g, 1.01).clusters.size(), 3u);
}

TEST(ThresholdClusters, EdgeAtExactlyThresholdIsKept) {
  AgreementGraph g(pids(2));
  g.set_weight(0, 1, 0.4);
  EXPECT_EQ(threshold_clusters(g, 0.4).clusters.size(), 1u);
  EXPECT_EQ(threshold_clusters(g, 0.41).clusters.size(), 2u);
}

TEST(ThresholdClusters, PartitionRefinementAndOracle) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng() % 10;
    AgreementGraph g(pids(n));
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double x = std::round(unit(rng) * 10) / 10;  // ties on purpose
        g.set_weight(i, j, x);
        w[i][j] = w[j][i] = x;
      }
    double x1 = unit(rng), x2 = unit(rng);
    if (x1 > x2) std::swap(x1, x2);
    for (double x : {x1, x2, 0.0, 0.5, 1.0}) {
      const auto c = threshold_clusters(g, x);
      std::set<ProposalId> seen;
      for (const auto& cl : c.clusters) {
        EXPECT_EQ(cl.label, cl.members.front());
        for (auto m : cl.members) EXPECT_TRUE(seen.insert(m).second);
      }
      EXPECT_EQ(seen.size(), static_cast<std::size_t>(n));
      const auto label = oracle::components(w, x);
      for (const auto& cl : c.clusters)
        for (auto m : cl.members) EXPECT_EQ(label[m.value - 1] + 1, static_cast<int>(cl.label.value));
    }
    const auto fine = partition(threshold_clusters(g, x2));
    const auto coarse = partition(threshold_clusters(g, x1));
    for (const auto& f : fine) {
      bool inside = false;
      for (const auto& k : coarse)
        inside = inside || std::includes(k.begin(), k.end(), f.begin(), f.end());
      EXPECT_TRUE(inside);
    }
  }
}

namespace {

// Proposal p gets appraisals with the given understanding levels from
// distinct voters, all agreeing when u > 0.
fixture::Table clarity_table(const std::vector<std::vector<double>>& us) {
  std::size_t voters = 0;
  for (const auto& u : us) voters = std::max(voters, u.size());
  fixture::Table t = make_table(static_cast<int>(voters), Sets(us.size()));
  for (std::size_t p = 0; p < us.size(); ++p)
    for (std::size_t i = 0; i < us[p].size(); ++i)
      t.d.submit_appraisal(t.voters[i], t.proposals[p], us[p][i],
                           us[p][i] > 0 ? std::optional<int>(1) : std::nullopt);
  return t;
}

}  // namespace

TEST(RankWithinCluster, ClarityThenCountThenId) {
  auto t = clarity_table({{0.5, 0.25}, {1.0, 0.75}, {0.5, 0.25, 0.75, 0.5}, {}, {0.5, 0.25}});
  const auto& p = t.proposals;
  // clarities: p0 .375, p1 .875, p2 .5, p3 undefined, p4 .375
  EXPECT_EQ(rank_within_cluster(p, t.state()), (std::vector<ProposalId>{p[1], p[2], p[0], p[4], p[3]}));
  EXPECT_EQ(rank_within_cluster({p[3]}, t.state()), (std::vector<ProposalId>{p[3]}));

  auto counts = clarity_table({{1.0, 0.0, 1.0, 0.0}, {1.0, 0.0}});
  EXPECT_EQ(rank_within_cluster(counts.proposals, counts.state()).front(), counts.proposals[0]);
}

TEST(Digest, EveryClusterAppearsBiggestFirst) {
  Clustering c;
  Cluster big{ProposalId{2}, pids(6), {}};
  big.members.erase(big.members.begin());  // 2..6
  big.ranked = {ProposalId{5}, ProposalId{3}, ProposalId{2}, ProposalId{6}, ProposalId{4}};
  Cluster small{ProposalId{1}, {ProposalId{1}}, {ProposalId{1}}};
  c.clusters = {small, big};
  const auto d = digest(c, 3);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].label, ProposalId{2});
  EXPECT_EQ(d[0].size, 5u);
  EXPECT_EQ(d[0].top, (std::vector<ProposalId>{ProposalId{5}, ProposalId{3}, ProposalId{2}}));
  EXPECT_EQ(d[1].top, (std::vector<ProposalId>{ProposalId{1}}));
  EXPECT_EQ(digest(c, 10)[0].top.size(), 5u);
  EXPECT_EQ(digest(c, 1)[0].top.size(), 1u);
}

TEST(Digest, CoversEveryClusterOfAGeneration) {
  auto t = make_table(8, Sets{{0, 1}, {0, 1}, {2, 3}, {4}, {5, 6, 7}, {5, 6}});
  ClusteringConfig cfg;
  const auto clusters = cluster_generation(t.state(), cfg.threshold);
  const auto d = digest(t.state(), cfg);
  EXPECT_EQ(d.size(), clusters.clusters.size());
  for (const auto& e : d) EXPECT_GE(e.top.size(), 1u);
}

TEST(UncertainPairs, FewestSharedFirst) {
  // p0 and p1 share voters 0,1; p2 is appraised by voter 2 alone.
  auto t = make_table(3, Sets{{0, 1}, {0, 1}, {2}});
  ClusteringConfig cfg;
  cfg.c_min = 3;
  const auto pairs = uncertain_pairs(t.state(), cfg);
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0].co_appraisers, 0u);
  EXPECT_EQ(pairs[1].co_appraisers, 0u);
  EXPECT_EQ(pairs[2].co_appraisers, 2u);
  EXPECT_EQ(pairs[2].first, t.proposals[0]);
  EXPECT_EQ(pairs[2].second, t.proposals[1]);
  cfg.c_min = 2;
  EXPECT_EQ(uncertain_pairs(t.state(), cfg).size(), 2u);
}
