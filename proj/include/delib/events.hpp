#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "delib/model.hpp"

namespace delib {

namespace ev {

struct ConfigSet {
  EngineConfig config;
  bool operator==(const ConfigSet&) const = default;
};

struct ParticipantJoined {
  ParticipantId participant;
  std::string name;
  bool operator==(const ParticipantJoined&) const = default;
};

struct ProposalSubmitted {
  ProposalId proposal;
  std::uint32_t generation = 0;
  std::vector<ParticipantId> authors;
  std::string body;
  bool operator==(const ProposalSubmitted&) const = default;
};

struct AppraisalRecorded {
  ParticipantId participant;
  ProposalId proposal;
  double u = 0.0;
  std::optional<int> a;
  std::optional<TaskId> task;
  AppraisalOrigin origin = AppraisalOrigin::Voluntary;
  bool operator==(const AppraisalRecorded&) const = default;
};

struct TaskIssued {
  TaskId task;
  TaskKind kind;
  ParticipantId assignee;
  bool operator==(const TaskIssued&) const = default;
};

struct TaskDeclined {
  TaskId task;
  bool operator==(const TaskDeclined&) const = default;
};

struct TaskCompleted {
  TaskId task;
  bool operator==(const TaskCompleted&) const = default;
};

struct RewriteSubmitted {
  RewriteId rewrite;
  TaskId task;
  ProposalId target;
  ParticipantId rewriter;
  RewriteKind kind = RewriteKind::ObscureClarification;
  std::optional<NearDomination> aim;
  std::string body;
  bool operator==(const RewriteSubmitted&) const = default;
};

struct RewriteApproved {
  RewriteId rewrite;
  bool operator==(const RewriteApproved&) const = default;
};

struct RewriteRejected {
  RewriteId rewrite;
  bool operator==(const RewriteRejected&) const = default;
};

/// Publication of a rewrite as a new proposal of the current generation,
/// with the participants it is advertised to.
struct RewritePublished {
  RewriteId rewrite;
  ProposalId proposal;
  std::uint32_t generation = 0;
  std::vector<ParticipantId> authors;
  std::vector<ParticipantId> audience;
  bool operator==(const RewritePublished&) const = default;
};

/// Phase change. Entering a new generation lists `carried` in it. Every
/// task still open at a phase change expires.
struct PhaseAdvanced {
  Phase phase = Phase::Proposal;
  std::uint32_t generation = 0;
  std::vector<ProposalId> carried;
  bool operator==(const PhaseAdvanced&) const = default;
};

}  // namespace ev

using EventPayload =
    std::variant<ev::ConfigSet, ev::ParticipantJoined, ev::ProposalSubmitted, ev::AppraisalRecorded,
                 ev::TaskIssued, ev::TaskDeclined, ev::TaskCompleted, ev::RewriteSubmitted,
                 ev::RewriteApproved, ev::RewriteRejected, ev::RewritePublished, ev::PhaseAdvanced>;

struct Event {
  std::uint64_t seq = 0;
  std::string timestamp;  // ISO 8601, UTC
  EventPayload payload;

  bool operator==(const Event&) const = default;
};

std::string_view event_kind(const EventPayload& payload);

/// The only state transition. Assumes the event was validated when it was
/// produced; throws CorruptLog on a sequence gap or a reference to an entity
/// the state does not hold.
void apply(DeliberationState& state, const Event& event);

}  // namespace delib
