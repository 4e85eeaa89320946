#include <gtest/gtest.h>

#include "delib/pareto.hpp"
#include "delib/scheduler.hpp"
#include "support/fixtures.hpp"

using namespace delib;
using fixture::error_of;
using fixture::make_table;
using Sets = std::vector<std::vector<int>>;

TEST(NextTask, LeastAppraisedProposalFirst) {
  // B has two appraisals, A none.
  auto d = Deliberation::create("d1");
  const auto author = d.join("author");
  const auto x = d.join("x"), y = d.join("y"), z = d.join("z");
  const auto a = d.submit_proposal(author, "A");
  const auto b = d.submit_proposal(author, "B");
  d.open_evaluation();
  d.submit_appraisal(x, b, 1.0, 1);
  d.submit_appraisal(y, b, 1.0, 1);
  auto t = d.next_task(z);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->kind, TaskKind(task::AppraiseProposal{a}));
  EXPECT_EQ(d.state().participant(z).requested_issued, 1u);
  // Asking again hands back the same open task.
  EXPECT_EQ(d.next_task(z)->id, t->id);
}

TEST(NextTask, NothingForTheAuthorOfEverything) {
  auto d = Deliberation::create("d1");
  const auto author = d.join("author");
  d.submit_proposal(author, "A");
  d.submit_proposal(author, "B");
  d.open_evaluation();
  EXPECT_FALSE(d.next_task(author));
  EXPECT_EQ(error_of([&] { d.next_task(ParticipantId{50}); }), "NotFound");
}

TEST(NextTask, NothingDuringProposalPhase) {
  auto d = Deliberation::create("d1");
  const auto author = d.join("author");
  const auto v = d.join("v");
  d.submit_proposal(author, "A");
  EXPECT_FALSE(d.next_task(v));
}

TEST(NextTask, PairRequestAsksOnlyForTheMissingMember) {
  auto d = Deliberation::create("d1");
  const auto author = d.join("author");
  const auto v = d.join("v");
  const auto a = d.submit_proposal(author, "A");
  const auto b = d.submit_proposal(author, "B");
  d.open_evaluation();
  d.submit_appraisal(v, a, 1.0, 1);
  auto blind = d.next_task(v);
  ASSERT_TRUE(blind);
  EXPECT_EQ(blind->kind, TaskKind(task::AppraiseProposal{b}));
  d.decline_task(v, blind->id);
  auto pair = d.next_task(v);
  ASSERT_TRUE(pair);
  const auto* k = std::get_if<task::AppraisePair>(&pair->kind);
  ASSERT_TRUE(k);
  EXPECT_EQ(k->first, a);
  EXPECT_EQ(k->second, b);
  EXPECT_EQ(k->to_appraise, std::vector<ProposalId>{b});
  const auto out = d.submit_appraisal(v, b, 0.5, 2);
  EXPECT_EQ(out.task, pair->id);
  EXPECT_TRUE(out.task_completed);
  EXPECT_EQ(d.state().participant(v).requested_completed, 1u);
}

TEST(NextTask, SeededTieBreakIsReproducible) {
  auto run = [](std::uint64_t seed) {
    EngineConfig cfg;
    cfg.scheduler.rng_seed = seed;
    auto d = Deliberation::create("d1", cfg);
    const auto author = d.join("author");
    std::vector<ParticipantId> voters;
    for (int i = 0; i < 6; ++i) voters.push_back(d.join("v"));
    for (int i = 0; i < 8; ++i) d.submit_proposal(author, "p");
    d.open_evaluation();
    std::vector<TaskKind> issued;
    for (int round = 0; round < 4; ++round)
      for (auto v : voters) {
        auto t = d.next_task(v);
        if (!t) continue;
        issued.push_back(t->kind);
        if (auto* k = std::get_if<task::AppraiseProposal>(&t->kind)) d.submit_appraisal(v, k->proposal, 1.0, 1, t->id);
      }
    return issued;
  };
  EXPECT_EQ(run(7), run(7));
  EXPECT_EQ(run(123), run(123));
}

TEST(DeclineTask, NeverReissuedAndNoCountChange) {
  auto d = Deliberation::create("d1");
  const auto author = d.join("author");
  const auto v = d.join("v"), w = d.join("w");
  const auto a = d.submit_proposal(author, "A");
  d.open_evaluation();
  auto t = d.next_task(v);
  ASSERT_TRUE(t);
  EXPECT_EQ(error_of([&] { d.decline_task(w, t->id); }), "Forbidden");
  d.decline_task(v, t->id);
  EXPECT_EQ(d.state().task(t->id).status, TaskStatus::Declined);
  EXPECT_EQ(appraisal_count(a, d.state()), 0u);
  EXPECT_FALSE(d.next_task(v));
  auto other = d.next_task(w);
  ASSERT_TRUE(other);
  EXPECT_EQ(other->kind, TaskKind(task::AppraiseProposal{a}));
  EXPECT_EQ(error_of([&] { d.decline_task(v, t->id); }), "Conflict");
  d.submit_appraisal(w, a, 1.0, 1, other->id);
  EXPECT_EQ(error_of([&] { d.decline_task(w, other->id); }), "Conflict");
  EXPECT_EQ(error_of([&] { d.decline_task(w, TaskId{99}); }), "NotFound");
}

TEST(Tasks, OpenTasksExpireOnPhaseChange) {
  auto d = Deliberation::create("d1");
  const auto author = d.join("author");
  const auto v = d.join("v");
  d.submit_proposal(author, "A");
  d.open_evaluation();
  auto t = d.next_task(v);
  d.advance_generation();
  EXPECT_EQ(d.state().task(t->id).status, TaskStatus::Expired);
}

TEST(DisambiguationCandidates, CostOneBeforeCostTwoAuthorsExcluded) {
  auto d = Deliberation::create("d1");
  const auto author = d.join("author");
  const auto u = d.join("U"), v = d.join("V"), w = d.join("W"), x = d.join("X");
  const auto a = d.submit_proposal(author, "A");
  const auto b = d.submit_proposal(author, "B");
  d.open_evaluation();
  d.submit_appraisal(w, a, 1.0, 1);
  d.submit_appraisal(w, b, 1.0, 1);
  d.submit_appraisal(x, b, 1.0, 1);
  d.submit_appraisal(v, a, 0.5, -1);
  const auto c = disambiguation_candidates({a, b}, d.state());
  EXPECT_EQ(c, (std::vector<Candidate>{{v, 1}, {x, 1}, {u, 2}}));
}

TEST(IncentiveGate, Formula) {
  DeliberationState s;
  Participant p;
  p.id = ParticipantId{1};
  p.authored = {ProposalId{1}, ProposalId{2}, ProposalId{3}};
  p.requested_completed = 2;
  s.participants[p.id] = p;
  SchedulerConfig cfg;
  EXPECT_TRUE(incentive_gate(p.id, s, cfg).allowed);
  cfg.incentive_enabled = true;
  EXPECT_EQ(incentive_gate(p.id, s, cfg), (GateResult{true, 0}));
  s.participants[p.id].requested_completed = 1;
  EXPECT_EQ(incentive_gate(p.id, s, cfg), (GateResult{false, 1}));
  cfg.gamma = 2.0;
  EXPECT_EQ(incentive_gate(p.id, s, cfg), (GateResult{false, 3}));
}

TEST(IncentiveGate, EngineBlocksWithDeficit) {
  EngineConfig cfg;
  cfg.scheduler.incentive_enabled = true;
  auto d = Deliberation::create("d1", cfg);
  const auto a = d.join("a");
  d.submit_proposal(a, "1");
  d.submit_proposal(a, "2");
  try {
    d.submit_proposal(a, "3");
    FAIL() << "third proposal should be blocked";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Blocked);
    EXPECT_EQ(e.deficit(), 1);
  }
  EXPECT_EQ(d.state().proposals.size(), 2u);
}

namespace {

// Records (u, a) by fresh voters for one proposal.
void rate(Deliberation& d, ProposalId p, const std::vector<ParticipantId>& who, double u, std::optional<int> a) {
  for (auto v : who) d.submit_appraisal(v, p, u, a);
}

std::vector<ParticipantId> take(std::vector<ParticipantId>& pool, int n) {
  std::vector<ParticipantId> out(pool.begin(), pool.begin() + n);
  pool.erase(pool.begin(), pool.begin() + n);
  return out;
}

struct GemWorld {
  Deliberation d = Deliberation::create("d1");
  ProposalId gem;
  std::vector<ProposalId> others;

  // Clusters of 6 and 4 proposals plus a gem seen by 25 voters: `lost`
  // did not understand it, the rest understood and `agree` of them agree.
  GemWorld(int lost, int agree) {
    const auto author = d.join("author");
    std::vector<ParticipantId> pool;
    for (int i = 0; i < 40; ++i) pool.push_back(d.join("v" + std::to_string(i)));
    for (int i = 0; i < 10; ++i) others.push_back(d.submit_proposal(author, "o"));
    gem = d.submit_proposal(author, "gem");
    d.open_evaluation();
    auto bloc1 = take(pool, 3), bloc2 = take(pool, 3);
    for (int i = 0; i < 6; ++i) rate(d, others[i], bloc1, 1.0, 1);
    for (int i = 6; i < 10; ++i) rate(d, others[i], bloc2, 1.0, 1);
    rate(d, gem, take(pool, lost), 0.0, std::nullopt);
    const int understood = 25 - lost;
    rate(d, gem, take(pool, agree), 1.0, 2);
    rate(d, gem, take(pool, understood - agree), 1.0, -2);
  }
};

}  // namespace

TEST(RewriteTargets, PercentileRule) {
  EXPECT_EQ(percentile_size({1, 4, 6}, 50), 4u);
  EXPECT_EQ(percentile_size({6, 1, 4}, 100), 6u);
  EXPECT_EQ(percentile_size({6, 1, 4}, 0), 1u);
  EXPECT_EQ(percentile_size({}, 50), 0u);
}

TEST(RewriteTargets, SelectedWhenObscureSupportedAndSmall) {
  GemWorld w(15, 8);  // rate .6, support .8
  const auto targets = select_rewrite_targets(w.d.state(), w.d.state().config);
  ASSERT_EQ(targets.size(), 1u);
  EXPECT_EQ(targets[0].proposal, w.gem);
  EXPECT_EQ(targets[0].cluster_size, 1u);
  EXPECT_DOUBLE_EQ(*targets[0].metrics.incomprehension_rate, 0.6);
  EXPECT_DOUBLE_EQ(*targets[0].metrics.support, 0.8);
}

TEST(RewriteTargets, RejectedWithoutSupport) {
  GemWorld w(15, 2);
  EXPECT_TRUE(select_rewrite_targets(w.d.state(), w.d.state().config).empty());
}

TEST(RewriteTargets, RejectedWhenWidelyUnderstood) {
  GemWorld w(2, 20);  // rate .08
  EXPECT_TRUE(select_rewrite_targets(w.d.state(), w.d.state().config).empty());
}

namespace {

struct RewriterWorld {
  Deliberation d = Deliberation::create("d1");
  ParticipantId author, strong, weak, fresh;
  ProposalId target;

  RewriterWorld() {
    author = d.join("author");
    strong = d.join("strong");
    weak = d.join("weak");
    fresh = d.join("fresh");
    std::vector<ParticipantId> readers;
    for (int i = 0; i < 3; ++i) readers.push_back(d.join("r"));
    const auto ps = d.submit_proposal(strong, "clear");
    const auto pw = d.submit_proposal(weak, "murky");
    target = d.submit_proposal(author, "target");
    d.open_evaluation();
    rate(d, ps, readers, 1.0, 1);     // skill 1.0
    rate(d, pw, readers, 0.5, 1);     // skill 0.5
  }
};

}  // namespace

TEST(SelectRewriter, HigherSkillAmongAgreers) {
  RewriterWorld w;
  w.d.submit_appraisal(w.strong, w.target, 1.0, 1);
  w.d.submit_appraisal(w.weak, w.target, 1.0, 1);
  w.d.submit_appraisal(w.fresh, w.target, 1.0, 5);  // undefined skill
  EXPECT_EQ(select_rewriter(w.target, w.d.state(), w.d.state().config), w.strong);
  EXPECT_EQ(select_rewriter(w.target, w.d.state(), w.d.state().config, {w.strong}), w.weak);
}

TEST(SelectRewriter, AgreementPreferredOverSkill) {
  RewriterWorld w;
  w.d.submit_appraisal(w.strong, w.target, 1.0, -3);
  w.d.submit_appraisal(w.weak, w.target, 0.5, 1);
  EXPECT_EQ(select_rewriter(w.target, w.d.state(), w.d.state().config), w.weak);
}

TEST(SelectRewriter, DisagreeingUnderstanderWhenNobodyAgrees) {
  RewriterWorld w;
  w.d.submit_appraisal(w.strong, w.target, 1.0, -3);
  w.d.submit_appraisal(w.weak, w.target, 1.0, -1);
  EXPECT_EQ(select_rewriter(w.target, w.d.state(), w.d.state().config), w.strong);
}

TEST(SelectRewriter, NoneWithoutUnderstanders) {
  RewriterWorld w;
  w.d.submit_appraisal(w.strong, w.target, 0.25, 1);
  w.d.submit_appraisal(w.weak, w.target, 0.0, std::nullopt);
  w.d.submit_appraisal(w.fresh, w.target, 1.0, 1);
  EXPECT_FALSE(select_rewriter(w.target, w.d.state(), w.d.state().config));
}

TEST(BlockerRequests, OneInvitationPerBlockerAndAim) {
  // A={0,1,2}, B={0,1,4}, C={0,2,4}: voter 4 blocks A against both B and C.
  auto t = make_table(5, Sets{{0, 1, 2}, {0, 1, 4}, {0, 2, 4}});
  const auto john = t.voters[4];
  const auto& a = t.proposals[0];
  auto reqs = blocker_rewrite_requests(t.state(), t.state().config);
  std::vector<ProposalId> aims_for_a;
  for (const auto& r : reqs) {
    const auto& aim = std::get<task::RewriteForBlocker>(r.kind).aim;
    EXPECT_NE(std::find(aim.blockers.begin(), aim.blockers.end(), r.assignee), aim.blockers.end());
    EXPECT_FALSE(t.state().is_author(r.assignee, aim.dominator));
    if (aim.dominator == a && r.assignee == john) aims_for_a.push_back(aim.dominated);
  }
  EXPECT_EQ(aims_for_a, (std::vector<ProposalId>{t.proposals[1], t.proposals[2]}));

  EngineConfig capped = t.state().config;
  capped.scheduler.max_open_requests = 1;
  std::map<ParticipantId, int> per;
  for (const auto& r : blocker_rewrite_requests(t.state(), capped)) ++per[r.assignee];
  for (const auto& [who, n] : per) EXPECT_LE(n, 1);
}

TEST(BlockerRequests, IssuedOnceAndPulledFirst) {
  auto t = make_table(5, Sets{{0, 1, 2, 3}, {0, 1, 4}});
  const auto issued = t.d.issue_invitations();
  ASSERT_EQ(issued.size(), 1u);
  EXPECT_EQ(issued[0].assignee, t.voters[4]);
  EXPECT_TRUE(t.d.issue_invitations().empty());
  auto next = t.d.next_task(t.voters[4]);
  ASSERT_TRUE(next);
  EXPECT_EQ(next->id, issued[0].id);
}

TEST(NoSelfReview, AcrossManyPulls) {
  auto d = Deliberation::create("d1");
  std::vector<ParticipantId> people;
  for (int i = 0; i < 8; ++i) people.push_back(d.join("p"));
  for (int i = 0; i < 8; ++i) d.submit_proposal(people[i], "x");
  d.open_evaluation();
  for (int round = 0; round < 10; ++round)
    for (auto who : people) {
      auto t = d.next_task(who);
      if (!t) continue;
      if (auto* k = std::get_if<task::AppraiseProposal>(&t->kind)) {
        ASSERT_FALSE(d.state().is_author(who, k->proposal));
        d.submit_appraisal(who, k->proposal, 1.0, round % 2 ? 1 : -1, t->id);
      } else {
        d.decline_task(who, t->id);
      }
    }
  for (const auto& [key, ap] : d.state().appraisals) EXPECT_FALSE(d.state().is_author(ap.participant, ap.proposal));
}
