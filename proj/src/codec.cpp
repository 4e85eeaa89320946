#include "delib/codec.hpp"

#include <initializer_list>

#include "delib/error.hpp"

namespace delib::codec {

namespace {

template <class E>
E parse_enum(const json& j, std::initializer_list<E> values, const char* what) {
  const auto s = j.get<std::string>();
  for (E v : values)
    if (to_string(v) == s) return v;
  fail(ErrorCode::Invalid, std::string("unknown ") + what + " '" + s + "'");
}

template <class Tag>
Id<Tag> id_of(const json& j) {
  return Id<Tag>{j.get<std::uint64_t>()};
}

template <class Tag>
json ids(const std::vector<Id<Tag>>& v) {
  json out = json::array();
  for (auto id : v) out.push_back(id.value);
  return out;
}

template <class Tag>
std::vector<Id<Tag>> ids_of(const json& j) {
  std::vector<Id<Tag>> out;
  for (const auto& e : j) out.push_back(id_of<Tag>(e));
  return out;
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* section) {
  if (!j.is_object()) fail(ErrorCode::Invalid, std::string(section) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) fail(ErrorCode::Invalid, "unknown key '" + k + "' in " + section);
  }
}

json opt_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

std::optional<int> read_opt_int(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<int>();
}

template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    fail(ErrorCode::Invalid, std::string("malformed document: ") + e.what());
  }
}

constexpr std::initializer_list<Phase> kPhases{Phase::Proposal, Phase::Evaluation};
constexpr std::initializer_list<AppraisalOrigin> kOrigins{
    AppraisalOrigin::Voluntary, AppraisalOrigin::Requested, AppraisalOrigin::Automatic};
constexpr std::initializer_list<TaskStatus> kStatuses{TaskStatus::Open, TaskStatus::Completed,
                                                      TaskStatus::Declined, TaskStatus::Expired};
constexpr std::initializer_list<RewriteKind> kRewriteKinds{RewriteKind::ObscureClarification,
                                                           RewriteKind::BlockerCompromise};
constexpr std::initializer_list<RewriteState> kRewriteStates{
    RewriteState::Submitted, RewriteState::Approved, RewriteState::Rejected,
    RewriteState::Published};

}  // namespace

json encode(const EngineConfig& c) {
  return {
      {"appraisal",
       {{"u_grid", c.appraisal.u_grid},
        {"a_max", c.appraisal.a_max},
        {"u_understood", c.appraisal.u_understood},
        {"u_incomprehensible", c.appraisal.u_incomprehensible}}},
      {"scheduler",
       {{"k_min_appraisals", c.scheduler.k_min_appraisals},
        {"theta_incomp", c.scheduler.theta_incomp},
        {"theta_support", c.scheduler.theta_support},
        {"small_cluster_pct", c.scheduler.small_cluster_pct},
        {"s_max", c.scheduler.s_max},
        {"max_open_requests", c.scheduler.max_open_requests},
        {"incentive_enabled", c.scheduler.incentive_enabled},
        {"gamma", c.scheduler.gamma},
        {"free_allowance", c.scheduler.free_allowance},
        {"rng_seed", c.scheduler.rng_seed}}},
      {"clustering",
       {{"threshold", c.clustering.threshold},
        {"top_k", c.clustering.top_k},
        {"c_min", c.clustering.c_min}}},
      {"metrics", {{"skill_min_appraisals", c.metrics.skill_min_appraisals}}},
  };
}

EngineConfig decode_config(const json& j, const EngineConfig& base) {
  return guarded([&] {
    EngineConfig c = base;
    reject_unknown(j, {"appraisal", "scheduler", "clustering", "metrics"}, "config");
    if (auto it = j.find("appraisal"); it != j.end()) {
      reject_unknown(*it, {"u_grid", "a_max", "u_understood", "u_incomprehensible"}, "appraisal");
      read(*it, "u_grid", c.appraisal.u_grid);
      read(*it, "a_max", c.appraisal.a_max);
      read(*it, "u_understood", c.appraisal.u_understood);
      read(*it, "u_incomprehensible", c.appraisal.u_incomprehensible);
    }
    if (auto it = j.find("scheduler"); it != j.end()) {
      reject_unknown(*it,
                     {"k_min_appraisals", "theta_incomp", "theta_support", "small_cluster_pct",
                      "s_max", "max_open_requests", "incentive_enabled", "gamma", "free_allowance",
                      "rng_seed"},
                     "scheduler");
      auto& s = c.scheduler;
      read(*it, "k_min_appraisals", s.k_min_appraisals);
      read(*it, "theta_incomp", s.theta_incomp);
      read(*it, "theta_support", s.theta_support);
      read(*it, "small_cluster_pct", s.small_cluster_pct);
      read(*it, "s_max", s.s_max);
      read(*it, "max_open_requests", s.max_open_requests);
      read(*it, "incentive_enabled", s.incentive_enabled);
      read(*it, "gamma", s.gamma);
      read(*it, "free_allowance", s.free_allowance);
      read(*it, "rng_seed", s.rng_seed);
    }
    if (auto it = j.find("clustering"); it != j.end()) {
      reject_unknown(*it, {"threshold", "top_k", "c_min"}, "clustering");
      read(*it, "threshold", c.clustering.threshold);
      read(*it, "top_k", c.clustering.top_k);
      read(*it, "c_min", c.clustering.c_min);
    }
    if (auto it = j.find("metrics"); it != j.end()) {
      reject_unknown(*it, {"skill_min_appraisals"}, "metrics");
      read(*it, "skill_min_appraisals", c.metrics.skill_min_appraisals);
    }
    return c;
  });
}

json encode(const NearDomination& nd) {
  return {{"dominator", nd.dominator.value},
          {"dominated", nd.dominated.value},
          {"blockers", ids(nd.blockers)}};
}

NearDomination decode_near_domination(const json& j) {
  return guarded([&] {
    return NearDomination{id_of<ProposalTag>(j.at("dominator")), id_of<ProposalTag>(j.at("dominated")),
                          ids_of<ParticipantTag>(j.at("blockers"))};
  });
}

json encode(const TaskKind& kind) {
  struct Enc {
    json operator()(const task::AppraiseProposal& t) const { return {{"proposal", t.proposal.value}}; }
    json operator()(const task::AppraisePair& t) const {
      return {{"first", t.first.value}, {"second", t.second.value}, {"to_appraise", ids(t.to_appraise)}};
    }
    json operator()(const task::RewriteObscure& t) const {
      return {{"proposal", t.proposal.value},
              {"incomprehension_rate", t.incomprehension_rate},
              {"support", t.support}};
    }
    json operator()(const task::RewriteForBlocker& t) const { return {{"aim", encode(t.aim)}}; }
    json operator()(const task::ApproveRewrite& t) const { return {{"rewrite", t.rewrite.value}}; }
  };
  json j = std::visit(Enc{}, kind);
  j["type"] = std::string(task_kind_name(kind));
  return j;
}

TaskKind decode_task_kind(const json& j) {
  return guarded([&]() -> TaskKind {
    const auto type = j.at("type").get<std::string>();
    if (type == "AppraiseProposal") return task::AppraiseProposal{id_of<ProposalTag>(j.at("proposal"))};
    if (type == "AppraisePair")
      return task::AppraisePair{id_of<ProposalTag>(j.at("first")), id_of<ProposalTag>(j.at("second")),
                                ids_of<ProposalTag>(j.at("to_appraise"))};
    if (type == "RewriteObscure")
      return task::RewriteObscure{id_of<ProposalTag>(j.at("proposal")),
                                  j.at("incomprehension_rate").get<double>(), j.at("support").get<double>()};
    if (type == "RewriteForBlocker") return task::RewriteForBlocker{decode_near_domination(j.at("aim"))};
    if (type == "ApproveRewrite") return task::ApproveRewrite{id_of<RewriteTag>(j.at("rewrite"))};
    fail(ErrorCode::Invalid, "unknown task type '" + type + "'");
  });
}

json encode_payload(const EventPayload& payload) {
  struct Enc {
    json operator()(const ev::ConfigSet& e) const { return {{"config", encode(e.config)}}; }
    json operator()(const ev::ParticipantJoined& e) const {
      return {{"participant", e.participant.value}, {"name", e.name}};
    }
    json operator()(const ev::ProposalSubmitted& e) const {
      return {{"proposal", e.proposal.value},
              {"generation", e.generation},
              {"authors", ids(e.authors)},
              {"body", e.body}};
    }
    json operator()(const ev::AppraisalRecorded& e) const {
      return {{"participant", e.participant.value},
              {"proposal", e.proposal.value},
              {"u", e.u},
              {"a", opt_int(e.a)},
              {"task", e.task ? json(e.task->value) : json(nullptr)},
              {"origin", std::string(to_string(e.origin))}};
    }
    json operator()(const ev::TaskIssued& e) const {
      return {{"task", e.task.value}, {"kind", encode(e.kind)}, {"assignee", e.assignee.value}};
    }
    json operator()(const ev::TaskDeclined& e) const { return {{"task", e.task.value}}; }
    json operator()(const ev::TaskCompleted& e) const { return {{"task", e.task.value}}; }
    json operator()(const ev::RewriteSubmitted& e) const {
      return {{"rewrite", e.rewrite.value},
              {"task", e.task.value},
              {"target", e.target.value},
              {"rewriter", e.rewriter.value},
              {"kind", std::string(to_string(e.kind))},
              {"aim", e.aim ? encode(*e.aim) : json(nullptr)},
              {"body", e.body}};
    }
    json operator()(const ev::RewriteApproved& e) const { return {{"rewrite", e.rewrite.value}}; }
    json operator()(const ev::RewriteRejected& e) const { return {{"rewrite", e.rewrite.value}}; }
    json operator()(const ev::RewritePublished& e) const {
      return {{"rewrite", e.rewrite.value},
              {"proposal", e.proposal.value},
              {"generation", e.generation},
              {"authors", ids(e.authors)},
              {"audience", ids(e.audience)}};
    }
    json operator()(const ev::PhaseAdvanced& e) const {
      return {{"phase", std::string(to_string(e.phase))},
              {"generation", e.generation},
              {"carried", ids(e.carried)}};
    }
  };
  return std::visit(Enc{}, payload);
}

EventPayload decode_payload(std::string_view kind, const json& j) {
  return guarded([&]() -> EventPayload {
    if (kind == "ConfigSet") return ev::ConfigSet{decode_config(j.at("config"))};
    if (kind == "ParticipantJoined")
      return ev::ParticipantJoined{id_of<ParticipantTag>(j.at("participant")), j.at("name").get<std::string>()};
    if (kind == "ProposalSubmitted")
      return ev::ProposalSubmitted{id_of<ProposalTag>(j.at("proposal")), j.at("generation").get<std::uint32_t>(),
                                   ids_of<ParticipantTag>(j.at("authors")), j.at("body").get<std::string>()};
    if (kind == "AppraisalRecorded") {
      ev::AppraisalRecorded e;
      e.participant = id_of<ParticipantTag>(j.at("participant"));
      e.proposal = id_of<ProposalTag>(j.at("proposal"));
      e.u = j.at("u").get<double>();
      e.a = read_opt_int(j.at("a"));
      if (!j.at("task").is_null()) e.task = id_of<TaskTag>(j.at("task"));
      e.origin = parse_enum(j.at("origin"), kOrigins, "origin");
      return e;
    }
    if (kind == "TaskIssued")
      return ev::TaskIssued{id_of<TaskTag>(j.at("task")), decode_task_kind(j.at("kind")),
                            id_of<ParticipantTag>(j.at("assignee"))};
    if (kind == "TaskDeclined") return ev::TaskDeclined{id_of<TaskTag>(j.at("task"))};
    if (kind == "TaskCompleted") return ev::TaskCompleted{id_of<TaskTag>(j.at("task"))};
    if (kind == "RewriteSubmitted") {
      ev::RewriteSubmitted e;
      e.rewrite = id_of<RewriteTag>(j.at("rewrite"));
      e.task = id_of<TaskTag>(j.at("task"));
      e.target = id_of<ProposalTag>(j.at("target"));
      e.rewriter = id_of<ParticipantTag>(j.at("rewriter"));
      e.kind = parse_enum(j.at("kind"), kRewriteKinds, "rewrite kind");
      if (!j.at("aim").is_null()) e.aim = decode_near_domination(j.at("aim"));
      e.body = j.at("body").get<std::string>();
      return e;
    }
    if (kind == "RewriteApproved") return ev::RewriteApproved{id_of<RewriteTag>(j.at("rewrite"))};
    if (kind == "RewriteRejected") return ev::RewriteRejected{id_of<RewriteTag>(j.at("rewrite"))};
    if (kind == "RewritePublished")
      return ev::RewritePublished{id_of<RewriteTag>(j.at("rewrite")), id_of<ProposalTag>(j.at("proposal")),
                                  j.at("generation").get<std::uint32_t>(),
                                  ids_of<ParticipantTag>(j.at("authors")),
                                  ids_of<ParticipantTag>(j.at("audience"))};
    if (kind == "PhaseAdvanced")
      return ev::PhaseAdvanced{parse_enum(j.at("phase"), kPhases, "phase"),
                               j.at("generation").get<std::uint32_t>(), ids_of<ProposalTag>(j.at("carried"))};
    fail(ErrorCode::CorruptLog, "unknown event kind '" + std::string(kind) + "'");
  });
}

json encode(const DeliberationState& s) {
  json participants = json::array();
  for (const auto& [id, p] : s.participants)
    participants.push_back({{"id", id.value},
                            {"name", p.name},
                            {"voluntary_count", p.voluntary_count},
                            {"requested_completed", p.requested_completed},
                            {"requested_issued", p.requested_issued},
                            {"authored", ids(p.authored)}});
  json proposals = json::array();
  for (const auto& [id, p] : s.proposals)
    proposals.push_back({{"id", id.value},
                         {"generation", p.generation},
                         {"body", p.body},
                         {"authors", ids(p.authors)},
                         {"lineage", p.lineage ? json(p.lineage->value) : json(nullptr)},
                         {"created_seq", p.created_seq}});
  json appraisals = json::array();
  for (const auto& [key, a] : s.appraisals)
    appraisals.push_back({{"participant", a.participant.value},
                          {"proposal", a.proposal.value},
                          {"u", a.u},
                          {"a", opt_int(a.a)},
                          {"seq", a.seq},
                          {"origin", std::string(to_string(a.origin))}});
  json tasks = json::array();
  for (const auto& [id, t] : s.tasks)
    tasks.push_back({{"id", id.value},
                     {"kind", encode(t.kind)},
                     {"assignee", t.assignee.value},
                     {"issued_seq", t.issued_seq},
                     {"status", std::string(to_string(t.status))}});
  json rewrites = json::array();
  for (const auto& [id, d] : s.rewrites)
    rewrites.push_back({{"id", id.value},
                        {"task", d.task.value},
                        {"target", d.target.value},
                        {"rewriter", d.rewriter.value},
                        {"kind", std::string(to_string(d.kind))},
                        {"aim", d.aim ? encode(*d.aim) : json(nullptr)},
                        {"body", d.body},
                        {"state", std::string(to_string(d.state))},
                        {"published_as", d.published_as ? json(d.published_as->value) : json(nullptr)}});
  json rosters = json::array();
  for (const auto& [gen, list] : s.rosters) rosters.push_back({{"generation", gen}, {"proposals", ids(list)}});

  return {{"schema_version", kSchemaVersion},
          {"id", s.id},
          {"phase", std::string(to_string(s.phase))},
          {"generation", s.generation},
          {"config", encode(s.config)},
          {"participants", participants},
          {"proposals", proposals},
          {"appraisals", appraisals},
          {"tasks", tasks},
          {"rewrites", rewrites},
          {"rosters", rosters},
          {"last_seq", s.last_seq},
          {"next_participant", s.next_participant},
          {"next_proposal", s.next_proposal},
          {"next_task", s.next_task},
          {"next_rewrite", s.next_rewrite}};
}

DeliberationState decode_state(const json& j) {
  return guarded([&] {
    if (j.at("schema_version").get<int>() != kSchemaVersion)
      fail(ErrorCode::VersionError, "unsupported snapshot schema_version " + j.at("schema_version").dump());
    DeliberationState s;
    s.id = j.at("id").get<std::string>();
    s.phase = parse_enum(j.at("phase"), kPhases, "phase");
    s.generation = j.at("generation").get<std::uint32_t>();
    s.config = decode_config(j.at("config"));
    for (const auto& e : j.at("participants")) {
      Participant p;
      p.id = id_of<ParticipantTag>(e.at("id"));
      p.name = e.at("name").get<std::string>();
      p.voluntary_count = e.at("voluntary_count").get<std::uint64_t>();
      p.requested_completed = e.at("requested_completed").get<std::uint64_t>();
      p.requested_issued = e.at("requested_issued").get<std::uint64_t>();
      p.authored = ids_of<ProposalTag>(e.at("authored"));
      s.participants.emplace(p.id, std::move(p));
    }
    for (const auto& e : j.at("proposals")) {
      Proposal p;
      p.id = id_of<ProposalTag>(e.at("id"));
      p.generation = e.at("generation").get<std::uint32_t>();
      p.body = e.at("body").get<std::string>();
      p.authors = ids_of<ParticipantTag>(e.at("authors"));
      if (!e.at("lineage").is_null()) p.lineage = id_of<RewriteTag>(e.at("lineage"));
      p.created_seq = e.at("created_seq").get<std::uint64_t>();
      s.proposals.emplace(p.id, std::move(p));
    }
    for (const auto& e : j.at("appraisals")) {
      Appraisal a;
      a.participant = id_of<ParticipantTag>(e.at("participant"));
      a.proposal = id_of<ProposalTag>(e.at("proposal"));
      a.u = e.at("u").get<double>();
      a.a = read_opt_int(e.at("a"));
      a.seq = e.at("seq").get<std::uint64_t>();
      a.origin = parse_enum(e.at("origin"), kOrigins, "origin");
      s.appraisals.emplace(std::make_pair(a.proposal, a.participant), a);
    }
    for (const auto& e : j.at("tasks")) {
      Task t;
      t.id = id_of<TaskTag>(e.at("id"));
      t.kind = decode_task_kind(e.at("kind"));
      t.assignee = id_of<ParticipantTag>(e.at("assignee"));
      t.issued_seq = e.at("issued_seq").get<std::uint64_t>();
      t.status = parse_enum(e.at("status"), kStatuses, "task status");
      s.tasks.emplace(t.id, std::move(t));
    }
    for (const auto& e : j.at("rewrites")) {
      RewriteDraft d;
      d.id = id_of<RewriteTag>(e.at("id"));
      d.task = id_of<TaskTag>(e.at("task"));
      d.target = id_of<ProposalTag>(e.at("target"));
      d.rewriter = id_of<ParticipantTag>(e.at("rewriter"));
      d.kind = parse_enum(e.at("kind"), kRewriteKinds, "rewrite kind");
      if (!e.at("aim").is_null()) d.aim = decode_near_domination(e.at("aim"));
      d.body = e.at("body").get<std::string>();
      d.state = parse_enum(e.at("state"), kRewriteStates, "rewrite state");
      if (!e.at("published_as").is_null()) d.published_as = id_of<ProposalTag>(e.at("published_as"));
      s.rewrites.emplace(d.id, std::move(d));
    }
    for (const auto& e : j.at("rosters"))
      s.rosters[e.at("generation").get<std::uint32_t>()] = ids_of<ProposalTag>(e.at("proposals"));
    s.last_seq = j.at("last_seq").get<std::uint64_t>();
    s.next_participant = j.at("next_participant").get<std::uint64_t>();
    s.next_proposal = j.at("next_proposal").get<std::uint64_t>();
    s.next_task = j.at("next_task").get<std::uint64_t>();
    s.next_rewrite = j.at("next_rewrite").get<std::uint64_t>();
    return s;
  });
}

std::string canonical(const json& j) { return j.dump(); }

}  // namespace delib::codec
