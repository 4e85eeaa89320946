#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "delib/events.hpp"
#include "delib/model.hpp"

namespace delib {

/// Maps the sequence number of a new event to its timestamp.
using Clock = std::function<std::string(std::uint64_t seq)>;

/// Fixed epoch plus one second per event; used wherever output must be
/// reproducible byte for byte.
Clock logical_clock();
Clock wall_clock();

/// Receives each event before it is applied. Throwing aborts the command.
using EventSink = std::function<void(const Event&)>;

struct EngineOptions {
  Clock clock = logical_clock();
  EventSink sink;
};

enum class Verdict { Approve, Reject };

struct AppraisalOutcome {
  std::optional<TaskId> task;
  bool task_completed = false;
};

/// Command side of one deliberation. Every command validates against the
/// current state, then records its effects as events; the state is only ever
/// changed by applying those events, so replaying the log reproduces it.
class Deliberation {
 public:
  /// Starts a fresh deliberation whose log opens with a ConfigSet event.
  static Deliberation create(DeliberationId id, EngineConfig config = {}, EngineOptions options = {});

  /// Rebuilds a deliberation from its log. The sink is not invoked for the
  /// replayed events.
  static Deliberation replay(DeliberationId id, std::span<const Event> events,
                             EngineOptions options = {});

  const DeliberationState& state() const { return state_; }
  const std::vector<Event>& events() const { return events_; }
  const DeliberationId& id() const { return state_.id; }

  void set_config(const EngineConfig& config);

  ParticipantId join(const std::string& name);

  ProposalId submit_proposal(ParticipantId author, const std::string& body);

  AppraisalOutcome submit_appraisal(ParticipantId who, ProposalId proposal, double u,
                                    std::optional<int> a, std::optional<TaskId> task = std::nullopt);

  std::optional<Task> next_task(ParticipantId who);
  void decline_task(ParticipantId who, TaskId task);

  /// Issues every pending blocker and clarification invitation.
  std::vector<Task> issue_invitations();

  RewriteDraft submit_rewrite(ParticipantId who, TaskId task, const std::string& body);
  RewriteDraft record_approval(ParticipantId who, RewriteId rewrite, Verdict verdict);

  /// Publishes an approved clarification or a submitted compromise.
  ProposalId publish_rewrite(RewriteId rewrite);

  /// Closes the proposal phase.
  void open_evaluation();
  /// Closes the evaluation phase and opens the next generation with the
  /// current front carried forward.
  void advance_generation();
  /// Whichever of the two transitions applies to the current phase.
  void advance();

 private:
  Deliberation(DeliberationId id, EngineOptions options);

  void emit(EventPayload payload);
  ProposalId publish_unchecked(RewriteId rewrite);

  DeliberationState state_;
  std::vector<Event> events_;
  EngineOptions options_;
};

}  // namespace delib
