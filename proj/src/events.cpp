#include "delib/events.hpp"

#include <algorithm>

#include "delib/error.hpp"

namespace delib {

namespace {

template <class Map, class Key>
auto& must_find(Map& map, const Key& key, const char* what) {
  auto it = map.find(key);
  if (it == map.end()) fail(ErrorCode::CorruptLog, std::string("event references unknown ") + what);
  return it->second;
}

void list_in(std::vector<ProposalId>& roster, ProposalId id) {
  auto it = std::lower_bound(roster.begin(), roster.end(), id);
  if (it == roster.end() || *it != id) roster.insert(it, id);
}

void credit_author(DeliberationState& s, ParticipantId who, ProposalId p) {
  auto& authored = must_find(s.participants, who, "participant").authored;
  if (std::find(authored.begin(), authored.end(), p) == authored.end()) authored.push_back(p);
}

struct Reducer {
  DeliberationState& s;
  std::uint64_t seq;

  void operator()(const ev::ConfigSet& e) { s.config = e.config; }

  void operator()(const ev::ParticipantJoined& e) {
    if (s.participants.count(e.participant)) fail(ErrorCode::CorruptLog, "participant id reused");
    Participant p;
    p.id = e.participant;
    p.name = e.name;
    s.participants.emplace(e.participant, std::move(p));
    s.next_participant = std::max(s.next_participant, e.participant.value + 1);
  }

  void operator()(const ev::ProposalSubmitted& e) {
    if (s.proposals.count(e.proposal)) fail(ErrorCode::CorruptLog, "proposal id reused");
    if (e.authors.empty()) fail(ErrorCode::CorruptLog, "proposal without author");
    Proposal p;
    p.id = e.proposal;
    p.generation = e.generation;
    p.body = e.body;
    p.authors = e.authors;
    p.created_seq = seq;
    for (ParticipantId a : e.authors) credit_author(s, a, e.proposal);
    must_find(s.participants, e.authors.front(), "participant").voluntary_count++;
    s.proposals.emplace(e.proposal, std::move(p));
    list_in(s.rosters[e.generation], e.proposal);
    s.next_proposal = std::max(s.next_proposal, e.proposal.value + 1);
  }

  void operator()(const ev::AppraisalRecorded& e) {
    auto& who = must_find(s.participants, e.participant, "participant");
    must_find(s.proposals, e.proposal, "proposal");
    Appraisal ap{e.participant, e.proposal, e.u, e.a, seq, e.origin};
    s.appraisals.insert_or_assign({e.proposal, e.participant}, ap);
    if (e.origin == AppraisalOrigin::Voluntary) who.voluntary_count++;
  }

  void operator()(const ev::TaskIssued& e) {
    if (s.tasks.count(e.task)) fail(ErrorCode::CorruptLog, "task id reused");
    must_find(s.participants, e.assignee, "participant").requested_issued++;
    s.tasks.emplace(e.task, Task{e.task, e.kind, e.assignee, seq, TaskStatus::Open});
    s.next_task = std::max(s.next_task, e.task.value + 1);
  }

  void operator()(const ev::TaskDeclined& e) {
    auto& t = must_find(s.tasks, e.task, "task");
    if (t.status != TaskStatus::Open) fail(ErrorCode::CorruptLog, "declined a closed task");
    t.status = TaskStatus::Declined;
  }

  void operator()(const ev::TaskCompleted& e) {
    auto& t = must_find(s.tasks, e.task, "task");
    if (t.status != TaskStatus::Open) fail(ErrorCode::CorruptLog, "completed a closed task");
    t.status = TaskStatus::Completed;
    must_find(s.participants, t.assignee, "participant").requested_completed++;
  }

  void operator()(const ev::RewriteSubmitted& e) {
    if (s.rewrites.count(e.rewrite)) fail(ErrorCode::CorruptLog, "rewrite id reused");
    must_find(s.proposals, e.target, "proposal");
    RewriteDraft d;
    d.id = e.rewrite;
    d.task = e.task;
    d.target = e.target;
    d.rewriter = e.rewriter;
    d.kind = e.kind;
    d.aim = e.aim;
    d.body = e.body;
    s.rewrites.emplace(e.rewrite, std::move(d));
    s.next_rewrite = std::max(s.next_rewrite, e.rewrite.value + 1);
  }

  void operator()(const ev::RewriteApproved& e) {
    must_find(s.rewrites, e.rewrite, "rewrite").state = RewriteState::Approved;
  }

  void operator()(const ev::RewriteRejected& e) {
    must_find(s.rewrites, e.rewrite, "rewrite").state = RewriteState::Rejected;
  }

  void operator()(const ev::RewritePublished& e) {
    auto& d = must_find(s.rewrites, e.rewrite, "rewrite");
    if (s.proposals.count(e.proposal)) fail(ErrorCode::CorruptLog, "proposal id reused");
    if (e.authors.empty()) fail(ErrorCode::CorruptLog, "proposal without author");
    d.state = RewriteState::Published;
    d.published_as = e.proposal;
    Proposal p;
    p.id = e.proposal;
    p.generation = e.generation;
    p.body = d.body;
    p.authors = e.authors;
    p.lineage = e.rewrite;
    p.created_seq = seq;
    for (ParticipantId a : e.authors) credit_author(s, a, e.proposal);
    s.proposals.emplace(e.proposal, std::move(p));
    list_in(s.rosters[e.generation], e.proposal);
    s.next_proposal = std::max(s.next_proposal, e.proposal.value + 1);
  }

  void operator()(const ev::PhaseAdvanced& e) {
    for (auto& [id, t] : s.tasks)
      if (t.status == TaskStatus::Open) t.status = TaskStatus::Expired;
    s.phase = e.phase;
    if (e.generation != s.generation) {
      auto& roster = s.rosters[e.generation];
      for (ProposalId p : e.carried) {
        must_find(s.proposals, p, "proposal");
        list_in(roster, p);
      }
      s.generation = e.generation;
    }
  }
};

}  // namespace

std::string_view event_kind(const EventPayload& payload) {
  static constexpr std::string_view names[] = {
      "ConfigSet",     "ParticipantJoined", "ProposalSubmitted", "AppraisalRecorded",
      "TaskIssued",    "TaskDeclined",      "TaskCompleted",     "RewriteSubmitted",
      "RewriteApproved", "RewriteRejected", "RewritePublished",  "PhaseAdvanced"};
  static_assert(std::size(names) == std::variant_size_v<EventPayload>);
  return names[payload.index()];
}

void apply(DeliberationState& state, const Event& event) {
  if (event.seq != state.last_seq + 1)
    fail(ErrorCode::CorruptLog, "expected seq " + std::to_string(state.last_seq + 1) + ", got " +
                                    std::to_string(event.seq));
  std::visit(Reducer{state, event.seq}, event.payload);
  state.last_seq = event.seq;
}

}  // namespace delib
