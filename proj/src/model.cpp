#include "delib/model.hpp"

#include <algorithm>
#include <cmath>

#include "delib/error.hpp"

namespace delib {

bool valid_deliberation_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '-' || c == '_';
  });
}

std::string to_string(ParticipantId id) { return "u" + std::to_string(id.value); }
std::string to_string(ProposalId id) { return "p" + std::to_string(id.value); }
std::string to_string(TaskId id) { return "t" + std::to_string(id.value); }
std::string to_string(RewriteId id) { return "r" + std::to_string(id.value); }

std::optional<PublicRef> parse_public_id(std::string_view text) {
  const auto dot = text.find('.');
  if (dot == std::string_view::npos || dot + 2 > text.size()) return std::nullopt;
  PublicRef ref;
  ref.deliberation = std::string(text.substr(0, dot));
  if (!valid_deliberation_id(ref.deliberation)) return std::nullopt;
  ref.prefix = text[dot + 1];
  if (ref.prefix != 'u' && ref.prefix != 'p' && ref.prefix != 't' && ref.prefix != 'r') return std::nullopt;
  const auto digits = text.substr(dot + 2);
  if (digits.empty() || digits.size() > 18) return std::nullopt;
  if (digits.size() > 1 && digits[0] == '0') return std::nullopt;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    ref.value = ref.value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  if (ref.value == 0) return std::nullopt;
  return ref;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Forbidden: return "Forbidden";
    case ErrorCode::Conflict: return "Conflict";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::GridViolation: return "GridViolation";
    case ErrorCode::PhaseError: return "PhaseError";
    case ErrorCode::Blocked: return "Blocked";
    case ErrorCode::Invalid: return "Invalid";
    case ErrorCode::SelfEdge: return "SelfEdge";
    case ErrorCode::CorruptLog: return "CorruptLog";
    case ErrorCode::VersionError: return "VersionError";
  }
  return "Invalid";
}

void validate_config(const EngineConfig& cfg) {
  const auto& ap = cfg.appraisal;
  auto has = [&](double v) {
    return std::any_of(ap.u_grid.begin(), ap.u_grid.end(),
                       [v](double g) { return std::abs(g - v) < 1e-12; });
  };
  if (!has(0.0) || !has(1.0)) fail(ErrorCode::Invalid, "u_grid must contain 0 and 1");
  if (!std::is_sorted(ap.u_grid.begin(), ap.u_grid.end()) ||
      std::adjacent_find(ap.u_grid.begin(), ap.u_grid.end()) != ap.u_grid.end())
    fail(ErrorCode::Invalid, "u_grid must be strictly increasing");
  if (ap.u_grid.front() < 0.0 || ap.u_grid.back() > 1.0)
    fail(ErrorCode::Invalid, "u_grid levels must lie in [0,1]");
  if (ap.a_max < 1) fail(ErrorCode::Invalid, "a_max must be >= 1");
  if (!(0.0 <= ap.u_incomprehensible && ap.u_incomprehensible < ap.u_understood &&
        ap.u_understood <= 1.0))
    fail(ErrorCode::Invalid, "need 0 <= u_incomprehensible < u_understood <= 1");

  const auto& sc = cfg.scheduler;
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(sc.theta_incomp) || !unit(sc.theta_support))
    fail(ErrorCode::Invalid, "scheduler thresholds must lie in [0,1]");
  if (sc.small_cluster_pct < 0.0 || sc.small_cluster_pct > 100.0)
    fail(ErrorCode::Invalid, "small_cluster_pct must lie in [0,100]");
  if (sc.gamma < 0.0) fail(ErrorCode::Invalid, "gamma must be >= 0");
  if (sc.k_min_appraisals < 0 || sc.free_allowance < 0)
    fail(ErrorCode::Invalid, "counts must be non-negative");
  if (sc.s_max < 1) fail(ErrorCode::Invalid, "s_max must be >= 1");
  if (sc.max_open_requests < 1) fail(ErrorCode::Invalid, "max_open_requests must be >= 1");

  const auto& cl = cfg.clustering;
  if (!unit(cl.threshold)) fail(ErrorCode::Invalid, "threshold must lie in [0,1]");
  if (cl.top_k < 1) fail(ErrorCode::Invalid, "top_k must be >= 1");
  if (cl.c_min < 1) fail(ErrorCode::Invalid, "c_min must be >= 1");
  if (cfg.metrics.skill_min_appraisals < 0)
    fail(ErrorCode::Invalid, "skill_min_appraisals must be >= 0");
}

bool is_rewrite_invitation(const TaskKind& kind) {
  return std::holds_alternative<task::RewriteObscure>(kind) ||
         std::holds_alternative<task::RewriteForBlocker>(kind);
}

bool is_appraisal_request(const TaskKind& kind) {
  return std::holds_alternative<task::AppraiseProposal>(kind) ||
         std::holds_alternative<task::AppraisePair>(kind);
}

const std::vector<ProposalId>& DeliberationState::roster() const {
  static const std::vector<ProposalId> empty;
  auto it = rosters.find(generation);
  return it == rosters.end() ? empty : it->second;
}

const Participant& DeliberationState::participant(ParticipantId id) const {
  auto it = participants.find(id);
  if (it == participants.end()) fail(ErrorCode::NotFound, "unknown participant " + to_string(id));
  return it->second;
}

const Proposal& DeliberationState::proposal(ProposalId id) const {
  auto it = proposals.find(id);
  if (it == proposals.end()) fail(ErrorCode::NotFound, "unknown proposal " + to_string(id));
  return it->second;
}

const Task& DeliberationState::task(TaskId id) const {
  auto it = tasks.find(id);
  if (it == tasks.end()) fail(ErrorCode::NotFound, "unknown task " + to_string(id));
  return it->second;
}

const RewriteDraft& DeliberationState::rewrite(RewriteId id) const {
  auto it = rewrites.find(id);
  if (it == rewrites.end()) fail(ErrorCode::NotFound, "unknown rewrite " + to_string(id));
  return it->second;
}

const Appraisal* DeliberationState::find_appraisal(ParticipantId who, ProposalId what) const {
  auto it = appraisals.find({what, who});
  return it == appraisals.end() ? nullptr : &it->second;
}

bool DeliberationState::is_author(ParticipantId who, ProposalId what) const {
  const auto& authors = proposal(what).authors;
  return std::find(authors.begin(), authors.end(), who) != authors.end();
}

std::string_view to_string(Phase phase) {
  return phase == Phase::Proposal ? "proposal" : "evaluation";
}

std::string_view to_string(TaskStatus status) {
  switch (status) {
    case TaskStatus::Open: return "open";
    case TaskStatus::Completed: return "completed";
    case TaskStatus::Declined: return "declined";
    case TaskStatus::Expired: return "expired";
  }
  return "open";
}

std::string_view to_string(RewriteKind kind) {
  return kind == RewriteKind::ObscureClarification ? "obscure-clarification"
                                                   : "blocker-compromise";
}

std::string_view to_string(RewriteState state) {
  switch (state) {
    case RewriteState::Submitted: return "submitted";
    case RewriteState::Approved: return "approved";
    case RewriteState::Rejected: return "rejected";
    case RewriteState::Published: return "published";
  }
  return "submitted";
}

std::string_view to_string(AppraisalOrigin origin) {
  switch (origin) {
    case AppraisalOrigin::Voluntary: return "voluntary";
    case AppraisalOrigin::Requested: return "requested";
    case AppraisalOrigin::Automatic: return "automatic";
  }
  return "voluntary";
}

std::string_view task_kind_name(const TaskKind& kind) {
  struct Namer {
    std::string_view operator()(const task::AppraiseProposal&) const { return "AppraiseProposal"; }
    std::string_view operator()(const task::AppraisePair&) const { return "AppraisePair"; }
    std::string_view operator()(const task::RewriteObscure&) const { return "RewriteObscure"; }
    std::string_view operator()(const task::RewriteForBlocker&) const { return "RewriteForBlocker"; }
    std::string_view operator()(const task::ApproveRewrite&) const { return "ApproveRewrite"; }
  };
  return std::visit(Namer{}, kind);
}

}  // namespace delib
