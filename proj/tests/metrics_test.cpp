#include <random>

#include <gtest/gtest.h>

#include "delib/metrics.hpp"
#include "support/fixtures.hpp"

using namespace delib;
using fixture::error_of;
using fixture::make_table;
using Sets = std::vector<std::vector<int>>;

namespace {

// Appraisals of one proposal with the given (u, a) pairs, one voter each.
fixture::Table appraised(const std::vector<std::pair<double, std::optional<int>>>& rows, EngineConfig cfg = {}) {
  auto t = make_table(static_cast<int>(rows.size()), Sets(1), cfg);
  for (std::size_t i = 0; i < rows.size(); ++i)
    t.d.submit_appraisal(t.voters[i], t.proposals[0], rows[i].first, rows[i].second);
  return t;
}

}  // namespace

TEST(ProposalMetrics, HandCountedExample) {
  auto t = appraised({{0.0, std::nullopt}, {0.0, std::nullopt}, {1.0, 3}, {1.0, 1}});
  const auto m = proposal_metrics(t.proposals[0], t.state(), t.state().config.appraisal);
  EXPECT_EQ(m.appraisal_count, 4u);
  EXPECT_DOUBLE_EQ(*m.clarity, 0.5);
  EXPECT_DOUBLE_EQ(*m.incomprehension_rate, 0.5);
  EXPECT_DOUBLE_EQ(*m.support, 1.0);
}

TEST(ProposalMetrics, NobodyUnderstands) {
  auto t = appraised({{0.0, std::nullopt}, {0.0, std::nullopt}});
  const auto m = proposal_metrics(t.proposals[0], t.state(), t.state().config.appraisal);
  EXPECT_DOUBLE_EQ(*m.incomprehension_rate, 1.0);
  EXPECT_FALSE(m.support);
}

TEST(ProposalMetrics, NoAppraisals) {
  auto t = appraised({});
  const auto m = proposal_metrics(t.proposals[0], t.state(), t.state().config.appraisal);
  EXPECT_EQ(m.appraisal_count, 0u);
  EXPECT_FALSE(m.clarity);
  EXPECT_FALSE(m.incomprehension_rate);
  EXPECT_FALSE(m.support);
  EXPECT_EQ(error_of([&] { proposal_metrics(ProposalId{9}, t.state(), {}); }), "NotFound");
}

TEST(ProposalMetrics, SupportIgnoresPartialUnderstanding) {
  // u = 0.25 agrees but does not count as understanding.
  auto t = appraised({{0.25, 1}, {0.25, 1}, {0.5, -2}});
  const auto m = proposal_metrics(t.proposals[0], t.state(), t.state().config.appraisal);
  EXPECT_DOUBLE_EQ(*m.support, 0.0);
  EXPECT_DOUBLE_EQ(*m.incomprehension_rate, 0.0);
}

TEST(ProposalMetrics, RandomTablesStayInRangeAndRespondMonotonically) {
  std::mt19937 rng(8);
  const AppraisalConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + rng() % 8;
    std::vector<std::pair<double, std::optional<int>>> rows;
    for (int i = 0; i < n; ++i) {
      const double u = cfg.u_grid[rng() % cfg.u_grid.size()];
      const int span = static_cast<int>(std::floor(u * cfg.a_max + 0.5));
      rows.push_back({u, u == 0 ? std::nullopt : std::optional<int>(static_cast<int>(rng() % (2 * span + 1)) - span)});
    }
    auto t = make_table(n + 2, Sets(1));
    for (int i = 0; i < n; ++i) t.d.submit_appraisal(t.voters[i], t.proposals[0], rows[i].first, rows[i].second);
    const auto m = proposal_metrics(t.proposals[0], t.state(), cfg);
    for (auto v : {m.clarity, m.incomprehension_rate, m.support})
      if (v) {
        EXPECT_GE(*v, 0.0);
        EXPECT_LE(*v, 1.0);
      }
    auto up = Deliberation::replay("t1", t.d.events());
    up.submit_appraisal(t.voters[n], t.proposals[0], 1.0, 1);
    EXPECT_GE(*proposal_metrics(t.proposals[0], up.state(), cfg).clarity, *m.clarity - 1e-12);
    auto down = Deliberation::replay("t1", t.d.events());
    down.submit_appraisal(t.voters[n + 1], t.proposals[0], 0.0, std::nullopt);
    EXPECT_LE(*proposal_metrics(t.proposals[0], down.state(), cfg).clarity, *m.clarity + 1e-12);
  }
}

namespace {

EngineConfig fifths() {
  EngineConfig cfg;
  cfg.appraisal.u_grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  return cfg;
}

}  // namespace

TEST(WriterSkill, MeanClarityOverQualifyingProposals) {
  auto d = Deliberation::create("d1", fifths());
  const auto writer = d.join("w");
  std::vector<ParticipantId> voters;
  for (int i = 0; i < 3; ++i) voters.push_back(d.join("v"));
  const auto p1 = d.submit_proposal(writer, "one");
  const auto p2 = d.submit_proposal(writer, "two");
  const auto p3 = d.submit_proposal(writer, "thin");
  d.open_evaluation();
  for (auto v : voters) {
    d.submit_appraisal(v, p1, 0.8, 1);
    d.submit_appraisal(v, p2, 0.6, -1);
  }
  d.submit_appraisal(voters[0], p3, 0.0, std::nullopt);  // below the floor of 3
  const auto s = writer_skill(writer, d.state(), d.state().config.metrics);
  EXPECT_EQ(s.basis, 2u);
  EXPECT_NEAR(*s.skill, 0.7, 1e-12);
  EXPECT_FALSE(writer_skill(voters[0], d.state(), {}).skill);
  EXPECT_EQ(writer_skill(voters[0], d.state(), {}).basis, 0u);
  EXPECT_EQ(error_of([&] { writer_skill(ParticipantId{99}, d.state(), {}); }), "NotFound");
}

TEST(WriterSkill, ThinProposalsAloneLeaveSkillUndefined) {
  auto d = Deliberation::create("d1");
  const auto writer = d.join("w");
  const auto v = d.join("v");
  const auto p = d.submit_proposal(writer, "p");
  d.open_evaluation();
  d.submit_appraisal(v, p, 1.0, 1);
  EXPECT_FALSE(writer_skill(writer, d.state(), {}).skill);
  MetricsConfig loose;
  loose.skill_min_appraisals = 1;
  EXPECT_DOUBLE_EQ(*writer_skill(writer, d.state(), loose).skill, 1.0);
}
