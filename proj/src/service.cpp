#include "delib/service.hpp"

#include <charconv>
#include <cmath>

#include <httplib.h>

#include "delib/codec.hpp"
#include "delib/report.hpp"
#include "delib/rewrite.hpp"

namespace delib {

using json = nlohmann::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Forbidden: return 403;
    case ErrorCode::Blocked: return 403;
    case ErrorCode::Conflict: return 409;
    case ErrorCode::PhaseError: return 409;
    case ErrorCode::TriangleViolation:
    case ErrorCode::GridViolation:
    case ErrorCode::Invalid:
    case ErrorCode::SelfEdge:
    case ErrorCode::CorruptLog:
    case ErrorCode::VersionError: return 422;
  }
  return 422;
}

std::string_view api_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::Forbidden:
    case ErrorCode::Conflict:
    case ErrorCode::TriangleViolation:
    case ErrorCode::PhaseError:
    case ErrorCode::Blocked: return to_string(code);
    default: return "Invalid";
  }
}

struct Service::Slot {
  std::mutex writer;
  std::unique_ptr<EventLog> log;
  std::optional<Deliberation> engine;

  mutable std::mutex pub_mu;
  std::shared_ptr<const DeliberationState> published;

  void publish() {
    auto next = std::make_shared<const DeliberationState>(engine->state());
    std::lock_guard lock(pub_mu);
    published = std::move(next);
  }

  std::shared_ptr<const DeliberationState> view() const {
    std::lock_guard lock(pub_mu);
    return published;
  }
};

namespace {

json error_body(ErrorCode code, const std::string& message, long long deficit = 0) {
  json err = {{"code", std::string(api_code(code))}, {"message", message}};
  if (code == ErrorCode::Blocked) err["deficit"] = deficit;
  return {{"error", err}};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < path.size()) {
    const auto next = path.find('/', pos);
    const auto end = next == std::string::npos ? path.size() : next;
    if (end > pos) out.push_back(path.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

PublicRef resolve(const std::string& text, char prefix) {
  auto ref = parse_public_id(text);
  if (!ref || ref->prefix != prefix) fail(ErrorCode::NotFound, "no such resource '" + text + "'");
  return *ref;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception&) {
    fail(ErrorCode::Invalid, "request body is not valid JSON");
  }
  if (!j.is_object()) fail(ErrorCode::Invalid, "request body must be an object");
  return j;
}

std::string required_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) fail(ErrorCode::Invalid, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

double parse_double(const std::string& text, const char* what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    fail(ErrorCode::Invalid, std::string(what) + " must be a number");
  return v;
}

int parse_int(const std::string& text, const char* what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) fail(ErrorCode::Invalid, std::string(what) + " must be an integer");
  return v;
}

json rewrite_view(const RewriteDraft& d, const DeliberationState& s) {
  json j = {{"id", public_id(s.id, d.id)},
            {"task", public_id(s.id, d.task)},
            {"target", public_id(s.id, d.target)},
            {"rewriter", public_id(s.id, d.rewriter)},
            {"kind", std::string(to_string(d.kind))},
            {"state", std::string(to_string(d.state))},
            {"body", d.body},
            {"published_as", d.published_as ? json(public_id(s.id, *d.published_as)) : json(nullptr)}};
  if (d.published_as) j["attribution"] = attribution(s.proposal(*d.published_as), s);
  return j;
}

json task_view(const Task& t, const DeliberationState& s) {
  json j = {{"id", public_id(s.id, t.id)},
            {"type", std::string(task_kind_name(t.kind))},
            {"assignee", public_id(s.id, t.assignee)},
            {"status", std::string(to_string(t.status))},
            {"issued_seq", t.issued_seq}};
  auto ids = [&](const std::vector<ProposalId>& v) {
    json out = json::array();
    for (auto p : v) out.push_back(public_id(s.id, p));
    return out;
  };
  if (auto* k = std::get_if<task::AppraiseProposal>(&t.kind)) {
    j["proposal"] = report::proposal_view(k->proposal, s);
  } else if (auto* k = std::get_if<task::AppraisePair>(&t.kind)) {
    j["first"] = public_id(s.id, k->first);
    j["second"] = public_id(s.id, k->second);
    j["to_appraise"] = ids(k->to_appraise);
  } else if (auto* k = std::get_if<task::RewriteObscure>(&t.kind)) {
    j["proposal"] = report::proposal_view(k->proposal, s);
    j["incomprehension_rate"] = k->incomprehension_rate;
    j["support"] = k->support;
  } else if (auto* k = std::get_if<task::RewriteForBlocker>(&t.kind)) {
    j["target"] = report::proposal_view(k->aim.dominator, s);
    j["preferred"] = report::proposal_view(k->aim.dominated, s);
    json blockers = json::array();
    for (auto b : k->aim.blockers) blockers.push_back(public_id(s.id, b));
    j["blockers"] = blockers;
  } else if (auto* k = std::get_if<task::ApproveRewrite>(&t.kind)) {
    const auto& d = s.rewrite(k->rewrite);
    j["rewrite"] = rewrite_view(d, s);
    j["original"] = report::proposal_view(d.target, s);
  }
  return j;
}

}  // namespace

Service::Service(std::filesystem::path data_dir, ServiceOptions options)
    : data_dir_(std::move(data_dir)), options_(std::move(options)) {
  if (!options_.persist) return;
  store_.emplace(data_dir_);
  for (const auto& id : store_->list()) {
    auto contents = read_log(store_->log_path(id));
    if (!contents.events.empty() && contents.deliberation != id)
      fail(ErrorCode::CorruptLog, "log of " + id + " names deliberation " + contents.deliberation);
    auto s = std::make_unique<Slot>();
    s->log = std::make_unique<EventLog>(store_->log_path(id), id, options_.sync);
    EngineOptions eo{options_.clock, [log = s->log.get()](const Event& e) { log->append(e); }};
    s->engine.emplace(Deliberation::replay(id, contents.events, eo));
    s->publish();
    slots_.emplace(id, std::move(s));
  }
}

Service::~Service() = default;

Service::Slot& Service::slot(const DeliberationId& id) const {
  std::shared_lock lock(registry_mu_);
  auto it = slots_.find(id);
  if (it == slots_.end()) fail(ErrorCode::NotFound, "unknown deliberation '" + id + "'");
  return *it->second;
}

Service::Slot& Service::create_slot(const DeliberationId& requested, const EngineConfig& config) {
  validate_config(config);
  std::unique_lock lock(registry_mu_);
  DeliberationId id = requested;
  if (id.empty()) {
    do id = "d" + std::to_string(next_auto_id_++);
    while (slots_.count(id) || (store_ && store_->exists(id)));
  }
  if (!valid_deliberation_id(id)) fail(ErrorCode::Invalid, "invalid deliberation id '" + id + "'");
  if (slots_.count(id) || (store_ && store_->exists(id)))
    fail(ErrorCode::Conflict, "deliberation '" + id + "' already exists");

  auto s = std::make_unique<Slot>();
  if (store_) s->log = std::make_unique<EventLog>(store_->log_path(id), id, options_.sync);
  EngineOptions eo{options_.clock, [log = s->log.get()](const Event& e) {
                     if (log) log->append(e);
                   }};
  s->engine.emplace(Deliberation::create(id, config, eo));
  s->publish();
  auto& ref = *s;
  slots_.emplace(id, std::move(s));
  return ref;
}

std::shared_ptr<const DeliberationState> Service::state(const DeliberationId& id) const {
  return slot(id).view();
}

template <class Fn>
auto Service::write(Slot& s, Fn&& fn) {
  std::lock_guard lock(s.writer);
  struct Publish {
    Slot& s;
    ~Publish() { s.publish(); }
  } guard{s};
  return fn(*s.engine);
}

ApiResponse Service::handle(const ApiRequest& request) {
  try {
    return route(request);
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e.code(), e.what(), e.deficit())};
  } catch (const json::exception& e) {
    return {422, error_body(ErrorCode::Invalid, e.what())};
  } catch (const std::exception& e) {
    return {422, error_body(ErrorCode::Invalid, e.what())};
  }
}

ApiResponse Service::route(const ApiRequest& req) {
  const auto seg = split_path(req.path);
  const bool get = req.method == "GET";
  const bool post = req.method == "POST";
  auto not_found = [&]() -> ApiResponse {
    fail(ErrorCode::NotFound, "no route for " + req.method + " " + req.path);
  };
  if (seg.empty()) return not_found();

  // Identity of the caller within deliberation `d`.
  auto caller = [&](const DeliberationId& d) {
    if (!req.participant) fail(ErrorCode::Forbidden, "missing X-Participant header");
    auto ref = parse_public_id(*req.participant);
    if (!ref || ref->prefix != 'u') fail(ErrorCode::Forbidden, "malformed participant id");
    if (ref->deliberation != d) fail(ErrorCode::Forbidden, "participant belongs to another deliberation");
    return ParticipantId{ref->value};
  };
  auto query = [&](const char* key) -> std::optional<std::string> {
    auto it = req.query.find(key);
    if (it == req.query.end()) return std::nullopt;
    return it->second;
  };

  const std::string& root = seg[0];

  if (root == "deliberations") {
    if (seg.size() == 1 && get) {
      std::shared_lock lock(registry_mu_);
      json ids = json::array();
      for (const auto& [id, s] : slots_) ids.push_back(id);
      return {200, {{"deliberations", ids}}};
    }
    if (seg.size() == 1 && post) {
      const auto body = parse_body(req.body);
      DeliberationId id;
      if (body.contains("id")) id = required_string(body, "id");
      EngineConfig cfg = body.contains("config") ? codec::decode_config(body.at("config"), options_.default_config)
                                                  : options_.default_config;
      auto& s = create_slot(id, cfg);
      const auto st = s.view();
      return {201, {{"id", st->id}, {"phase", std::string(to_string(st->phase))}, {"generation", st->generation}}};
    }
    if (seg.size() < 2) return not_found();
    const DeliberationId& id = seg[1];
    auto& s = slot(id);

    if (seg.size() == 2 && get) {
      const auto st = s.view();
      json participants = json::array();
      for (const auto& [pid, p] : st->participants)
        participants.push_back({{"id", public_id(id, pid)}, {"name", p.name}});
      json proposals = json::array();
      for (auto p : st->roster()) proposals.push_back(report::proposal_view(p, *st));
      return {200, {{"id", id},
                    {"phase", std::string(to_string(st->phase))},
                    {"generation", st->generation},
                    {"last_seq", st->last_seq},
                    {"config", codec::encode(st->config)},
                    {"participants", participants},
                    {"proposals", proposals}}};
    }
    if (seg.size() != 3) return not_found();
    const std::string& leaf = seg[2];

    if (leaf == "participants" && post) {
      const auto body = parse_body(req.body);
      const auto name = body.contains("name") ? required_string(body, "name") : std::string();
      const auto pid = write(s, [&](Deliberation& d) { return d.join(name); });
      return {201, {{"id", public_id(id, pid)}, {"name", name}}};
    }
    if (leaf == "proposals" && post) {
      const auto who = caller(id);
      const auto text = required_string(parse_body(req.body), "body");
      const auto pid = write(s, [&](Deliberation& d) { return d.submit_proposal(who, text); });
      return {201, {{"id", public_id(id, pid)}}};
    }
    if (leaf == "front" && get) return {200, report::front(*s.view())};
    if (leaf == "clusters" && get) {
      const auto st = s.view();
      const double x = query("x") ? parse_double(*query("x"), "x") : st->config.clustering.threshold;
      return {200, report::clusters(*st, x)};
    }
    if (leaf == "digest" && get) {
      const auto st = s.view();
      const double x = query("x") ? parse_double(*query("x"), "x") : st->config.clustering.threshold;
      const int k = query("top_k") ? parse_int(*query("top_k"), "top_k") : st->config.clustering.top_k;
      if (k < 1) fail(ErrorCode::Invalid, "top_k must be >= 1");
      return {200, report::digest(*st, x, k)};
    }
    if (leaf == "advance" && post) {
      const auto body = parse_body(req.body);
      const auto to = body.contains("to") ? std::optional(required_string(body, "to")) : std::nullopt;
      if (to && *to != "evaluation" && *to != "proposal")
        fail(ErrorCode::Invalid, "'to' must be \"evaluation\" or \"proposal\"");
      write(s, [&](Deliberation& d) {
        if (!to)
          d.advance();
        else if (*to == "evaluation")
          d.open_evaluation();
        else
          d.advance_generation();
        return 0;
      });
      const auto st = s.view();
      return {200, {{"id", id}, {"phase", std::string(to_string(st->phase))}, {"generation", st->generation}}};
    }
    if (leaf == "invitations" && post) {
      const auto tasks = write(s, [&](Deliberation& d) { return d.issue_invitations(); });
      const auto st = s.view();
      json list = json::array();
      for (const auto& t : tasks) list.push_back(task_view(st->task(t.id), *st));
      return {201, {{"issued", list}}};
    }
    return not_found();
  }

  if (seg.size() < 2) return not_found();
  const std::string& leaf = seg.size() == 3 ? seg[2] : std::string();
  if (seg.size() > 3) return not_found();

  if (root == "proposals") {
    const auto ref = resolve(seg[1], 'p');
    auto& s = slot(ref.deliberation);
    const ProposalId pid{ref.value};
    if (seg.size() == 2 && get) {
      const auto st = s.view();
      return {200, report::proposal_view(pid, *st)};
    }
    if (leaf == "appraisals" && post) {
      const auto who = caller(ref.deliberation);
      const auto body = parse_body(req.body);
      if (!body.contains("u") || !body.at("u").is_number()) fail(ErrorCode::Invalid, "'u' must be a number");
      const double u = body.at("u").get<double>();
      std::optional<int> a;
      if (body.contains("a") && !body.at("a").is_null()) {
        if (!body.at("a").is_number_integer()) fail(ErrorCode::Invalid, "'a' must be an integer or null");
        a = body.at("a").get<int>();
      }
      std::optional<TaskId> task;
      if (body.contains("task") && !body.at("task").is_null()) {
        const auto tref = resolve(required_string(body, "task"), 't');
        if (tref.deliberation != ref.deliberation) fail(ErrorCode::NotFound, "task belongs to another deliberation");
        task = TaskId{tref.value};
      }
      const auto out = write(s, [&](Deliberation& d) { return d.submit_appraisal(who, pid, u, a, task); });
      return {200, {{"proposal", public_id(ref.deliberation, pid)},
                    {"task", out.task ? json(public_id(ref.deliberation, *out.task)) : json(nullptr)},
                    {"task_completed", out.task_completed}}};
    }
    return not_found();
  }

  if (root == "participants") {
    const auto ref = resolve(seg[1], 'u');
    auto& s = slot(ref.deliberation);
    const ParticipantId pid{ref.value};
    if (leaf == "next-task" && get) {
      if (caller(ref.deliberation) != pid) fail(ErrorCode::Forbidden, "tasks are pulled by their assignee only");
      const auto task = write(s, [&](Deliberation& d) { return d.next_task(pid); });
      if (!task) return {204, nullptr};
      const auto st = s.view();
      return {200, task_view(*task, *st)};
    }
    if (seg.size() == 2 && get) {
      const auto st = s.view();
      const auto& p = st->participant(pid);
      return {200, {{"id", public_id(ref.deliberation, pid)}, {"name", p.name}}};
    }
    return not_found();
  }

  if (root == "tasks") {
    const auto ref = resolve(seg[1], 't');
    auto& s = slot(ref.deliberation);
    const TaskId tid{ref.value};
    if (seg.size() == 2 && get) {
      const auto st = s.view();
      const auto& t = st->task(tid);
      if (caller(ref.deliberation) != t.assignee) fail(ErrorCode::Forbidden, "task belongs to another participant");
      return {200, task_view(t, *st)};
    }
    if (leaf == "decline" && post) {
      const auto who = caller(ref.deliberation);
      write(s, [&](Deliberation& d) {
        d.decline_task(who, tid);
        return 0;
      });
      const auto st = s.view();
      return {200, task_view(st->task(tid), *st)};
    }
    if (leaf == "rewrite" && post) {
      const auto who = caller(ref.deliberation);
      const auto text = required_string(parse_body(req.body), "body");
      const auto draft = write(s, [&](Deliberation& d) { return d.submit_rewrite(who, tid, text); });
      const auto st = s.view();
      return {201, rewrite_view(st->rewrite(draft.id), *st)};
    }
    return not_found();
  }

  if (root == "rewrites") {
    const auto ref = resolve(seg[1], 'r');
    auto& s = slot(ref.deliberation);
    const RewriteId rid{ref.value};
    if (seg.size() == 2 && get) {
      const auto st = s.view();
      return {200, rewrite_view(st->rewrite(rid), *st)};
    }
    if (leaf == "approval" && post) {
      const auto who = caller(ref.deliberation);
      const auto verdict = required_string(parse_body(req.body), "verdict");
      if (verdict != "approve" && verdict != "reject")
        fail(ErrorCode::Invalid, "'verdict' must be \"approve\" or \"reject\"");
      const auto v = verdict == "approve" ? Verdict::Approve : Verdict::Reject;
      write(s, [&](Deliberation& d) { return d.record_approval(who, rid, v); });
      const auto st = s.view();
      return {200, rewrite_view(st->rewrite(rid), *st)};
    }
    return not_found();
  }

  return not_found();
}

void Service::mount(httplib::Server& server) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    r.body = req.body;
    if (req.has_header("X-Participant")) r.participant = req.get_header_value("X-Participant");
    const auto out = handle(r);
    res.status = out.status;
    if (out.status != 204) res.set_content(out.text(), "application/json");
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
}

}  // namespace delib
