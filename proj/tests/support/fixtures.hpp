#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "delib/error.hpp"

#include "delib/appraisal.hpp"
#include "delib/engine.hpp"
#include "oracles.hpp"

namespace fixture {

using namespace delib;

/// Name of the error code `fn` throws, or "none".
template <class Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return std::string(to_string(e.code()));
  }
  return "none";
}

/// One deliberation in its evaluation phase: a single author wrote every
/// proposal, and voter i agrees (u = 1, a = +1) with proposal p exactly when
/// i is listed in agree[p]. With `others_disagree` the remaining voters
/// record (u = 1, a = -1) instead of staying silent.
struct Table {
  Deliberation d;
  ParticipantId author;
  std::vector<ParticipantId> voters;
  std::vector<ProposalId> proposals;

  const DeliberationState& state() const { return d.state(); }

  oracle::Mask mask(const ParticipantSet& set) const {
    oracle::Mask m = 0;
    for (auto p : set)
      for (std::size_t i = 0; i < voters.size(); ++i)
        if (voters[i] == p) m |= oracle::Mask{1} << i;
    return m;
  }
  int index(ProposalId p) const {
    for (std::size_t i = 0; i < proposals.size(); ++i)
      if (proposals[i] == p) return static_cast<int>(i);
    return -1;
  }
};

inline Table make_table(int voters, const std::vector<std::vector<int>>& agree, EngineConfig cfg = {},
                        bool others_disagree = false) {
  Table t{Deliberation::create("t1", cfg), {}, {}, {}};
  t.author = t.d.join("author");
  for (int i = 0; i < voters; ++i) t.voters.push_back(t.d.join("v" + std::to_string(i)));
  for (std::size_t p = 0; p < agree.size(); ++p)
    t.proposals.push_back(t.d.submit_proposal(t.author, "proposal " + std::to_string(p)));
  t.d.open_evaluation();
  for (std::size_t p = 0; p < agree.size(); ++p) {
    std::vector<bool> yes(voters, false);
    for (int i : agree[p]) yes[i] = true;
    for (int i = 0; i < voters; ++i) {
      if (yes[i])
        t.d.submit_appraisal(t.voters[i], t.proposals[p], 1.0, 1);
      else if (others_disagree)
        t.d.submit_appraisal(t.voters[i], t.proposals[p], 1.0, -1);
    }
  }
  return t;
}

inline Table make_table(int voters, const std::vector<oracle::Mask>& masks, EngineConfig cfg = {}) {
  std::vector<std::vector<int>> agree;
  for (auto m : masks) {
    std::vector<int> v;
    for (int i = 0; i < voters; ++i)
      if (m >> i & 1) v.push_back(i);
    agree.push_back(v);
  }
  return make_table(voters, agree, cfg, true);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("delib-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// A deliberation whose log holds every event kind: declined and completed
/// tasks, a rejected and an approved clarification, a compromise, and two
/// generations.
inline Deliberation busy_deliberation(EngineOptions options = {}) {
  EngineConfig cfg;
  cfg.scheduler.k_min_appraisals = 3;
  cfg.metrics.skill_min_appraisals = 1;
  cfg.scheduler.rng_seed = 99;
  auto d = Deliberation::create("busy", cfg, std::move(options));
  const auto olga = d.join("Olga"), rita = d.join("Rita"), sam = d.join("Sam");
  std::vector<ParticipantId> lost;
  for (int i = 0; i < 3; ++i) lost.push_back(d.join("L" + std::to_string(i)));
  const auto gem = d.submit_proposal(olga, "dense");
  const auto ritas = d.submit_proposal(rita, "plain");
  const auto sams = d.submit_proposal(sam, "short");
  d.open_evaluation();
  for (auto l : lost) d.submit_appraisal(l, gem, 0.0, std::nullopt);
  d.submit_appraisal(rita, gem, 1.0, 4);
  d.submit_appraisal(sam, gem, 0.75, 2);
  d.submit_appraisal(lost[0], ritas, 1.0, 1);
  d.submit_appraisal(lost[1], sams, 0.5, 1);

  auto open_of = [&](ParticipantId who, std::string_view kind) {
    for (const auto& [id, t] : d.state().tasks)
      if (t.assignee == who && t.status == TaskStatus::Open && task_kind_name(t.kind) == kind) return id;
    throw Error(ErrorCode::NotFound, "fixture expected an open " + std::string(kind));
  };

  d.issue_invitations();
  auto first = d.submit_rewrite(rita, open_of(rita, "RewriteObscure"), "clearer");
  d.record_approval(olga, first.id, Verdict::Reject);
  d.issue_invitations();
  auto second = d.submit_rewrite(sam, open_of(sam, "RewriteObscure"), "clearest");
  d.record_approval(olga, second.id, Verdict::Approve);
  d.submit_rewrite(lost[0], open_of(lost[0], "RewriteForBlocker"), "merged");

  for (auto who : {lost[2], rita}) {
    if (auto t = d.next_task(who)) {
      if (auto* k = std::get_if<task::AppraiseProposal>(&t->kind))
        d.submit_appraisal(who, k->proposal, 0.5, -1, t->id);
    }
  }
  if (auto t = d.next_task(lost[1])) d.decline_task(lost[1], t->id);
  d.advance_generation();
  d.submit_proposal(lost[2], "late idea");
  d.open_evaluation();
  d.next_task(rita);
  return d;
}

}  // namespace fixture
