#include "delib/engine.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include "delib/appraisal.hpp"
#include "delib/error.hpp"
#include "delib/pareto.hpp"
#include "delib/rewrite.hpp"
#include "delib/scheduler.hpp"

namespace delib {

namespace {

std::string iso8601(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool covers(const TaskKind& kind, ProposalId p) {
  if (auto* ap = std::get_if<task::AppraiseProposal>(&kind)) return ap->proposal == p;
  if (auto* pr = std::get_if<task::AppraisePair>(&kind))
    return std::find(pr->to_appraise.begin(), pr->to_appraise.end(), p) != pr->to_appraise.end();
  return false;
}

}  // namespace

Clock logical_clock() {
  // 2020-01-01T00:00:00Z
  return [](std::uint64_t seq) { return iso8601(static_cast<std::time_t>(1577836800 + seq)); };
}

Clock wall_clock() {
  return [](std::uint64_t) {
    return iso8601(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
  };
}

Deliberation::Deliberation(DeliberationId id, EngineOptions options) : options_(std::move(options)) {
  if (!valid_deliberation_id(id)) fail(ErrorCode::Invalid, "invalid deliberation id '" + id + "'");
  state_.id = std::move(id);
  if (!options_.clock) options_.clock = logical_clock();
}

Deliberation Deliberation::create(DeliberationId id, EngineConfig config, EngineOptions options) {
  validate_config(config);
  Deliberation d(std::move(id), std::move(options));
  d.emit(ev::ConfigSet{std::move(config)});
  return d;
}

Deliberation Deliberation::replay(DeliberationId id, std::span<const Event> events,
                                  EngineOptions options) {
  Deliberation d(std::move(id), std::move(options));
  for (const auto& e : events) {
    apply(d.state_, e);
    d.events_.push_back(e);
  }
  return d;
}

void Deliberation::emit(EventPayload payload) {
  Event e;
  e.seq = state_.last_seq + 1;
  e.timestamp = options_.clock(e.seq);
  e.payload = std::move(payload);
  if (options_.sink) options_.sink(e);
  apply(state_, e);
  events_.push_back(std::move(e));
}

void Deliberation::set_config(const EngineConfig& config) {
  validate_config(config);
  emit(ev::ConfigSet{config});
}

ParticipantId Deliberation::join(const std::string& name) {
  const ParticipantId id{state_.next_participant};
  emit(ev::ParticipantJoined{id, name});
  return id;
}

ProposalId Deliberation::submit_proposal(ParticipantId author, const std::string& body) {
  state_.participant(author);
  if (state_.phase != Phase::Proposal)
    fail(ErrorCode::PhaseError, "proposals are accepted during the proposal phase only");
  if (body.empty()) fail(ErrorCode::Invalid, "proposal body is empty");
  const auto gate = incentive_gate(author, state_, state_.config.scheduler);
  if (!gate.allowed)
    throw Error(ErrorCode::Blocked,
                "complete " + std::to_string(gate.deficit) + " requested action(s) before contributing again",
                gate.deficit);
  const ProposalId id{state_.next_proposal};
  emit(ev::ProposalSubmitted{id, state_.generation, {author}, body});
  return id;
}

AppraisalOutcome Deliberation::submit_appraisal(ParticipantId who, ProposalId proposal, double u,
                                                std::optional<int> a, std::optional<TaskId> task) {
  state_.participant(who);
  state_.proposal(proposal);
  if (state_.phase != Phase::Evaluation)
    fail(ErrorCode::PhaseError, "appraisals are accepted during the evaluation phase only");
  const auto& roster = state_.roster();
  if (!std::binary_search(roster.begin(), roster.end(), proposal))
    fail(ErrorCode::Conflict, "proposal is not listed in the current generation");
  if (state_.is_author(who, proposal)) fail(ErrorCode::Forbidden, "authors do not appraise their own proposals");

  const auto check = validate_appraisal(u, a, state_.config.appraisal);
  if (check.violation == AppraisalViolation::Grid) fail(ErrorCode::GridViolation, check.reason);
  if (check.violation == AppraisalViolation::Triangle) fail(ErrorCode::TriangleViolation, check.reason);

  if (task) {
    const auto& t = state_.task(*task);
    if (t.assignee != who) fail(ErrorCode::Forbidden, "task belongs to another participant");
    if (t.status != TaskStatus::Open) fail(ErrorCode::Conflict, "task is no longer open");
    if (!covers(t.kind, proposal)) fail(ErrorCode::Invalid, "task does not request this appraisal");
  } else {
    for (const auto& [id, t] : state_.tasks)
      if (t.assignee == who && t.status == TaskStatus::Open && covers(t.kind, proposal)) {
        task = id;
        break;
      }
  }

  emit(ev::AppraisalRecorded{who, proposal, u, a, task,
                            task ? AppraisalOrigin::Requested : AppraisalOrigin::Voluntary});

  AppraisalOutcome out{task, false};
  if (task) {
    const auto& t = state_.task(*task);
    bool done = true;
    if (auto* pr = std::get_if<task::AppraisePair>(&t.kind)) {
      for (ProposalId p : pr->to_appraise) {
        const auto* ap = state_.find_appraisal(who, p);
        if (!ap || ap->seq < t.issued_seq) done = false;
      }
    }
    if (done) {
      emit(ev::TaskCompleted{*task});
      out.task_completed = true;
    }
  }
  return out;
}

std::optional<Task> Deliberation::next_task(ParticipantId who) {
  auto choice = choose_next_task(who, state_);
  if (choice.existing) return state_.task(*choice.existing);
  if (!choice.issue) return std::nullopt;
  const TaskId id{state_.next_task};
  emit(ev::TaskIssued{id, std::move(*choice.issue), who});
  return state_.task(id);
}

void Deliberation::decline_task(ParticipantId who, TaskId task) {
  const auto& t = state_.task(task);
  if (t.assignee != who) fail(ErrorCode::Forbidden, "task belongs to another participant");
  if (t.status != TaskStatus::Open) fail(ErrorCode::Conflict, "task is already closed");
  emit(ev::TaskDeclined{task});
}

std::vector<Task> Deliberation::issue_invitations() {
  if (state_.phase != Phase::Evaluation)
    fail(ErrorCode::PhaseError, "invitations are issued during the evaluation phase only");
  std::vector<Task> issued;
  auto issue_all = [&](std::vector<Task> batch) {
    for (auto& t : batch) {
      const TaskId id{state_.next_task};
      emit(ev::TaskIssued{id, std::move(t.kind), t.assignee});
      issued.push_back(state_.task(id));
    }
  };
  issue_all(blocker_rewrite_requests(state_, state_.config));
  issue_all(clarity_rewrite_requests(state_, state_.config));
  return issued;
}

RewriteDraft Deliberation::submit_rewrite(ParticipantId who, TaskId task, const std::string& body) {
  const Task t = state_.task(task);
  if (t.assignee != who) fail(ErrorCode::Forbidden, "task belongs to another participant");
  if (t.status != TaskStatus::Open) fail(ErrorCode::Forbidden, "task is no longer open");
  if (!is_rewrite_invitation(t.kind)) fail(ErrorCode::Invalid, "task is not a rewrite invitation");
  if (body.empty()) fail(ErrorCode::Invalid, "rewrite body is empty");

  ev::RewriteSubmitted sub;
  sub.rewrite = RewriteId{state_.next_rewrite};
  sub.task = task;
  sub.rewriter = who;
  sub.body = body;
  if (auto* ob = std::get_if<task::RewriteObscure>(&t.kind)) {
    sub.target = ob->proposal;
    sub.kind = RewriteKind::ObscureClarification;
  } else {
    const auto& aim = std::get<task::RewriteForBlocker>(t.kind).aim;
    sub.target = aim.dominator;
    sub.kind = RewriteKind::BlockerCompromise;
    sub.aim = aim;
  }
  const RewriteId rid = sub.rewrite;
  const ProposalId target = sub.target;
  const RewriteKind kind = sub.kind;

  emit(ev::TaskCompleted{task});
  emit(std::move(sub));
  if (kind == RewriteKind::ObscureClarification) {
    const ParticipantId originator = state_.proposal(target).authors.front();
    emit(ev::TaskIssued{TaskId{state_.next_task}, task::ApproveRewrite{rid}, originator});
  } else {
    publish_unchecked(rid);
  }
  return state_.rewrite(rid);
}

RewriteDraft Deliberation::record_approval(ParticipantId who, RewriteId rewrite, Verdict verdict) {
  const RewriteDraft d = state_.rewrite(rewrite);
  const ParticipantId originator = state_.proposal(d.target).authors.front();
  if (who != originator) fail(ErrorCode::Forbidden, "only the original author decides on a rewrite");
  if (d.kind != RewriteKind::ObscureClarification)
    fail(ErrorCode::Conflict, "compromise rewrites are not subject to approval");
  if (d.state != RewriteState::Submitted) fail(ErrorCode::Conflict, "rewrite was already decided");

  std::optional<TaskId> approval_task;
  for (const auto& [id, t] : state_.tasks) {
    auto* ap = std::get_if<task::ApproveRewrite>(&t.kind);
    if (ap && ap->rewrite == rewrite && t.status == TaskStatus::Open && t.assignee == who) approval_task = id;
  }

  if (verdict == Verdict::Approve) {
    emit(ev::RewriteApproved{rewrite});
    if (approval_task) emit(ev::TaskCompleted{*approval_task});
    publish_unchecked(rewrite);
  } else {
    emit(ev::RewriteRejected{rewrite});
    if (approval_task) emit(ev::TaskCompleted{*approval_task});
  }
  return state_.rewrite(rewrite);
}

ProposalId Deliberation::publish_rewrite(RewriteId rewrite) {
  const auto& d = state_.rewrite(rewrite);
  const bool ready = (d.kind == RewriteKind::ObscureClarification && d.state == RewriteState::Approved) ||
                     (d.kind == RewriteKind::BlockerCompromise && d.state == RewriteState::Submitted);
  if (!ready) fail(ErrorCode::Conflict, "rewrite is not ready for publication");
  return publish_unchecked(rewrite);
}

ProposalId Deliberation::publish_unchecked(RewriteId rewrite) {
  const RewriteDraft d = state_.rewrite(rewrite);
  const ProposalId id{state_.next_proposal};
  emit(ev::RewritePublished{rewrite, id, state_.generation, published_authors(d, state_),
                            advertisement_audience(d.target, state_)});
  if (d.kind == RewriteKind::BlockerCompromise) {
    // The rewriter's agreement with their own compromise is implied.
    emit(ev::AppraisalRecorded{d.rewriter, id, 1.0, state_.config.appraisal.a_max, std::nullopt,
                              AppraisalOrigin::Automatic});
  }
  return id;
}

void Deliberation::open_evaluation() {
  if (state_.phase != Phase::Proposal) fail(ErrorCode::PhaseError, "evaluation is already open");
  emit(ev::PhaseAdvanced{Phase::Evaluation, state_.generation, {}});
}

void Deliberation::advance_generation() {
  if (state_.phase != Phase::Evaluation)
    fail(ErrorCode::PhaseError, "a generation closes only from its evaluation phase");
  emit(ev::PhaseAdvanced{Phase::Proposal, state_.generation + 1, pareto_front(state_)});
}

void Deliberation::advance() {
  if (state_.phase == Phase::Proposal)
    open_evaluation();
  else
    advance_generation();
}

}  // namespace delib
