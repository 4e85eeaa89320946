#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "delib/ids.hpp"

namespace delib {

/// Two-axis appraisal scale. Understanding is drawn from a discrete grid, and
/// agreement is an integer whose admissible magnitude grows with understanding.
struct AppraisalConfig {
  std::vector<double> u_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  int a_max = 5;
  double u_understood = 0.5;
  double u_incomprehensible = 0.0;

  bool operator==(const AppraisalConfig&) const = default;
};

struct SchedulerConfig {
  int k_min_appraisals = 5;
  double theta_incomp = 0.5;
  double theta_support = 0.6;
  double small_cluster_pct = 50.0;
  int s_max = 1;
  int max_open_requests = 3;
  bool incentive_enabled = false;
  double gamma = 1.0;
  int free_allowance = 1;
  std::uint64_t rng_seed = 0;

  bool operator==(const SchedulerConfig&) const = default;
};

struct ClusteringConfig {
  double threshold = 0.4;
  int top_k = 3;
  int c_min = 3;

  bool operator==(const ClusteringConfig&) const = default;
};

struct MetricsConfig {
  // Authored proposals below this many appraisals do not count toward skill.
  int skill_min_appraisals = 3;

  bool operator==(const MetricsConfig&) const = default;
};

struct EngineConfig {
  AppraisalConfig appraisal;
  SchedulerConfig scheduler;
  ClusteringConfig clustering;
  MetricsConfig metrics;

  bool operator==(const EngineConfig&) const = default;
};

/// Throws Error(Invalid) naming the first violated invariant.
void validate_config(const EngineConfig& cfg);

enum class Phase { Proposal, Evaluation };

enum class AppraisalOrigin { Voluntary, Requested, Automatic };

struct Appraisal {
  ParticipantId participant;
  ProposalId proposal;
  double u = 0.0;
  std::optional<int> a;
  std::uint64_t seq = 0;
  AppraisalOrigin origin = AppraisalOrigin::Voluntary;

  bool operator==(const Appraisal&) const = default;
};

struct Proposal {
  ProposalId id;
  std::uint32_t generation = 0;
  std::string body;
  std::vector<ParticipantId> authors;  // authors[0] holds the original idea
  std::optional<RewriteId> lineage;
  std::uint64_t created_seq = 0;

  bool operator==(const Proposal&) const = default;
};

struct Participant {
  ParticipantId id;
  std::string name;
  std::uint64_t voluntary_count = 0;
  std::uint64_t requested_completed = 0;
  std::uint64_t requested_issued = 0;
  std::vector<ProposalId> authored;

  bool operator==(const Participant&) const = default;
};

/// A would dominate B but for the blockers: agreers of B who do not agree
/// with A.
struct NearDomination {
  ProposalId dominator;
  ProposalId dominated;
  std::vector<ParticipantId> blockers;  // sorted

  bool operator==(const NearDomination&) const = default;
};

namespace task {

struct AppraiseProposal {
  ProposalId proposal;
  bool operator==(const AppraiseProposal&) const = default;
};

/// Disambiguation request for the pair (first, second); the assignee only
/// has to appraise the members listed in to_appraise.
struct AppraisePair {
  ProposalId first;
  ProposalId second;
  std::vector<ProposalId> to_appraise;
  bool operator==(const AppraisePair&) const = default;
};

struct RewriteObscure {
  ProposalId proposal;
  double incomprehension_rate = 0.0;
  double support = 0.0;
  bool operator==(const RewriteObscure&) const = default;
};

struct RewriteForBlocker {
  NearDomination aim;
  bool operator==(const RewriteForBlocker&) const = default;
};

struct ApproveRewrite {
  RewriteId rewrite;
  bool operator==(const ApproveRewrite&) const = default;
};

}  // namespace task

using TaskKind = std::variant<task::AppraiseProposal, task::AppraisePair,
                              task::RewriteObscure, task::RewriteForBlocker,
                              task::ApproveRewrite>;

enum class TaskStatus { Open, Completed, Declined, Expired };

struct Task {
  TaskId id;
  TaskKind kind;
  ParticipantId assignee;
  std::uint64_t issued_seq = 0;
  TaskStatus status = TaskStatus::Open;

  bool operator==(const Task&) const = default;
};

bool is_rewrite_invitation(const TaskKind& kind);
bool is_appraisal_request(const TaskKind& kind);

enum class RewriteKind { ObscureClarification, BlockerCompromise };

enum class RewriteState { Submitted, Approved, Rejected, Published };

struct RewriteDraft {
  RewriteId id;
  TaskId task;
  ProposalId target;
  ParticipantId rewriter;
  RewriteKind kind = RewriteKind::ObscureClarification;
  std::optional<NearDomination> aim;  // set for BlockerCompromise
  std::string body;
  RewriteState state = RewriteState::Submitted;
  std::optional<ProposalId> published_as;

  bool operator==(const RewriteDraft&) const = default;
};

/// Full state of one deliberation. Only the event reducer mutates it; every
/// report is a pure function of it.
struct DeliberationState {
  DeliberationId id;
  Phase phase = Phase::Proposal;
  std::uint32_t generation = 0;
  EngineConfig config;

  std::map<ParticipantId, Participant> participants;
  std::map<ProposalId, Proposal> proposals;
  // Keyed by proposal first so per-proposal scans are contiguous.
  std::map<std::pair<ProposalId, ParticipantId>, Appraisal> appraisals;
  std::map<TaskId, Task> tasks;
  std::map<RewriteId, RewriteDraft> rewrites;
  // Proposals listed in each generation; carried proposals keep their id.
  std::map<std::uint32_t, std::vector<ProposalId>> rosters;

  std::uint64_t last_seq = 0;
  std::uint64_t next_participant = 1;
  std::uint64_t next_proposal = 1;
  std::uint64_t next_task = 1;
  std::uint64_t next_rewrite = 1;

  bool operator==(const DeliberationState&) const = default;

  /// Proposals of the current generation, ascending by id.
  const std::vector<ProposalId>& roster() const;

  const Participant& participant(ParticipantId id) const;  // NotFound
  const Proposal& proposal(ProposalId id) const;           // NotFound
  const Task& task(TaskId id) const;                       // NotFound
  const RewriteDraft& rewrite(RewriteId id) const;         // NotFound

  const Appraisal* find_appraisal(ParticipantId who, ProposalId what) const;
  bool is_author(ParticipantId who, ProposalId what) const;
};

std::string_view to_string(Phase phase);
std::string_view to_string(TaskStatus status);
std::string_view to_string(RewriteKind kind);
std::string_view to_string(RewriteState state);
std::string_view to_string(AppraisalOrigin origin);
std::string_view task_kind_name(const TaskKind& kind);

}  // namespace delib
