#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "delib/clustering.hpp"
#include "delib/metrics.hpp"
#include "delib/model.hpp"

namespace delib {

/// Outcome of a readiness signal: either hand back a task the participant
/// already holds, or issue a new one.
struct TaskChoice {
  std::optional<TaskId> existing;
  std::optional<TaskKind> issue;

  bool empty() const { return !existing && !issue; }
};

/// Pull-model selection, in priority order: open approvals, open rewrite
/// invitations, open appraisal requests, a fresh blind-review appraisal of
/// the least-appraised eligible proposal (ties broken by a generator seeded
/// from rng_seed and the log position), a cost-1 pair disambiguation.
/// Throws NotFound for an unknown participant.
TaskChoice choose_next_task(ParticipantId participant, const DeliberationState& state);

struct Candidate {
  ParticipantId participant;
  int cost = 0;  // 1 or 2 requested appraisals

  bool operator==(const Candidate&) const = default;
};

/// Participants that can sharpen the pair: those who appraised exactly one
/// member first, then those who appraised neither. Authors are excluded.
std::vector<Candidate> disambiguation_candidates(std::pair<ProposalId, ProposalId> pair,
                                                 const DeliberationState& state);

struct RewriteTarget {
  ProposalId proposal;
  ProposalMetrics metrics;
  std::size_t cluster_size = 0;

  bool operator==(const RewriteTarget&) const = default;
};

/// Size at nearest-rank percentile `pct` of the given sizes (0 when empty).
std::size_t percentile_size(std::vector<std::size_t> sizes, double pct);

/// Widely misunderstood proposals supported by their understanders and
/// sitting in a small cluster, most misunderstood first.
std::vector<RewriteTarget> select_rewrite_targets(const DeliberationState& state,
                                                  const EngineConfig& cfg);

/// Best-placed clarifier for p, skipping anyone in `exclude`.
std::optional<ParticipantId> select_rewriter(ProposalId p, const DeliberationState& state,
                                             const EngineConfig& cfg,
                                             const std::vector<ParticipantId>& exclude = {});

/// Proposed invitations (ids unassigned) for every near-domination blocker,
/// honouring max_open_requests and never repeating an invitation a
/// participant has already received.
std::vector<Task> blocker_rewrite_requests(const DeliberationState& state, const EngineConfig& cfg);

/// One clarification invitation per rewrite target that has no live
/// clarification yet.
std::vector<Task> clarity_rewrite_requests(const DeliberationState& state, const EngineConfig& cfg);

struct GateResult {
  bool allowed = true;
  long long deficit = 0;

  bool operator==(const GateResult&) const = default;
};

GateResult incentive_gate(ParticipantId participant, const DeliberationState& state,
                          const SchedulerConfig& cfg);

std::size_t open_task_count(ParticipantId participant, const DeliberationState& state);

}  // namespace delib
