#include "delib/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "delib/appraisal.hpp"
#include "delib/error.hpp"
#include "delib/pareto.hpp"

namespace delib {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Depends only on the seed and the log position, so a replayed state makes
// the same choice the live one did.
std::mt19937_64 tie_breaker(const DeliberationState& state, ParticipantId who) {
  std::uint64_t h = splitmix64(state.config.scheduler.rng_seed);
  h = splitmix64(h ^ state.last_seq);
  h = splitmix64(h ^ who.value);
  return std::mt19937_64(h);
}

std::optional<TaskId> oldest_open(ParticipantId who, const DeliberationState& state,
                                  bool (*pred)(const TaskKind&)) {
  for (const auto& [id, t] : state.tasks)
    if (t.assignee == who && t.status == TaskStatus::Open && pred(t.kind)) return id;
  return std::nullopt;
}

bool is_approval(const TaskKind& k) { return std::holds_alternative<task::ApproveRewrite>(k); }

std::set<ProposalId> declined_appraisals(ParticipantId who, const DeliberationState& state) {
  std::set<ProposalId> out;
  for (const auto& [id, t] : state.tasks) {
    if (t.assignee != who || t.status != TaskStatus::Declined) continue;
    if (auto* ap = std::get_if<task::AppraiseProposal>(&t.kind)) out.insert(ap->proposal);
  }
  return out;
}

bool declined_pair(ParticipantId who, ProposalId a, ProposalId b, const DeliberationState& state) {
  for (const auto& [id, t] : state.tasks) {
    if (t.assignee != who || t.status != TaskStatus::Declined) continue;
    if (auto* pr = std::get_if<task::AppraisePair>(&t.kind); pr && pr->first == a && pr->second == b)
      return true;
  }
  return false;
}

// Appraisals already recorded plus open requests still expected to land.
std::map<ProposalId, std::size_t> coverage(const DeliberationState& state) {
  std::map<ProposalId, std::size_t> out;
  for (ProposalId id : state.roster()) out[id] = 0;
  for (const auto& [key, ap] : state.appraisals) {
    auto it = out.find(key.first);
    if (it != out.end()) ++it->second;
  }
  for (const auto& [id, t] : state.tasks) {
    if (t.status != TaskStatus::Open) continue;
    if (auto* ap = std::get_if<task::AppraiseProposal>(&t.kind)) {
      if (auto it = out.find(ap->proposal); it != out.end()) ++it->second;
    } else if (auto* pr = std::get_if<task::AppraisePair>(&t.kind)) {
      for (ProposalId p : pr->to_appraise)
        if (auto it = out.find(p); it != out.end()) ++it->second;
    }
  }
  return out;
}

std::optional<TaskKind> blind_review_pick(ParticipantId who, const DeliberationState& state) {
  const auto counts = coverage(state);
  const auto declined = declined_appraisals(who, state);
  std::vector<ProposalId> best;
  std::size_t best_count = 0;
  for (ProposalId p : state.roster()) {
    if (state.is_author(who, p) || state.find_appraisal(who, p) || declined.count(p))
      continue;
    const std::size_t c = counts.at(p);
    if (best.empty() || c < best_count) {
      best.assign(1, p);
      best_count = c;
    } else if (c == best_count) {
      best.push_back(p);
    }
  }
  if (best.empty()) return std::nullopt;
  auto rng = tie_breaker(state, who);
  const ProposalId chosen = best[rng() % best.size()];
  return task::AppraiseProposal{chosen};
}

std::optional<TaskKind> pair_pick(ParticipantId who, const DeliberationState& state) {
  for (const auto& pair : uncertain_pairs(state, state.config.clustering)) {
    if (state.is_author(who, pair.first) || state.is_author(who, pair.second)) continue;
    const bool seen_first = state.find_appraisal(who, pair.first) != nullptr;
    const bool seen_second = state.find_appraisal(who, pair.second) != nullptr;
    if (seen_first == seen_second) continue;
    if (declined_pair(who, pair.first, pair.second, state)) continue;
    const ProposalId missing = seen_first ? pair.second : pair.first;
    return task::AppraisePair{pair.first, pair.second, {missing}};
  }
  return std::nullopt;
}

}  // namespace

std::size_t open_task_count(ParticipantId participant, const DeliberationState& state) {
  std::size_t n = 0;
  for (const auto& [id, t] : state.tasks)
    if (t.assignee == participant && t.status == TaskStatus::Open) ++n;
  return n;
}

TaskChoice choose_next_task(ParticipantId participant, const DeliberationState& state) {
  state.participant(participant);

  if (auto id = oldest_open(participant, state, is_approval)) return {id, std::nullopt};
  if (auto id = oldest_open(participant, state, is_rewrite_invitation)) return {id, std::nullopt};
  if (auto id = oldest_open(participant, state, is_appraisal_request)) return {id, std::nullopt};

  if (state.phase != Phase::Evaluation) return {};
  if (open_task_count(participant, state) >=
      static_cast<std::size_t>(state.config.scheduler.max_open_requests))
    return {};

  if (auto kind = blind_review_pick(participant, state)) return {std::nullopt, std::move(kind)};
  if (auto kind = pair_pick(participant, state)) return {std::nullopt, std::move(kind)};
  return {};
}

std::vector<Candidate> disambiguation_candidates(std::pair<ProposalId, ProposalId> pair,
                                                 const DeliberationState& state) {
  state.proposal(pair.first);
  state.proposal(pair.second);
  std::vector<Candidate> ones;
  std::vector<Candidate> twos;
  for (const auto& [id, who] : state.participants) {
    if (state.is_author(id, pair.first) || state.is_author(id, pair.second)) continue;
    const int seen = (state.find_appraisal(id, pair.first) ? 1 : 0) +
                     (state.find_appraisal(id, pair.second) ? 1 : 0);
    if (seen == 1) ones.push_back({id, 1});
    if (seen == 0) twos.push_back({id, 2});
  }
  ones.insert(ones.end(), twos.begin(), twos.end());
  return ones;
}

std::size_t percentile_size(std::vector<std::size_t> sizes, double pct) {
  if (sizes.empty()) return 0;
  std::sort(sizes.begin(), sizes.end());
  const double rank = std::ceil(pct / 100.0 * static_cast<double>(sizes.size()) - 1e-9);
  const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(sizes.size())));
  return sizes[idx - 1];
}

std::vector<RewriteTarget> select_rewrite_targets(const DeliberationState& state,
                                                  const EngineConfig& cfg) {
  const auto clustering = threshold_clusters(build_graph(state), cfg.clustering.threshold);
  std::vector<std::size_t> sizes;
  std::map<ProposalId, std::size_t> size_of;
  for (const auto& cl : clustering.clusters) {
    sizes.push_back(cl.members.size());
    for (ProposalId p : cl.members) size_of[p] = cl.members.size();
  }
  const std::size_t small = percentile_size(sizes, cfg.scheduler.small_cluster_pct);

  std::vector<RewriteTarget> out;
  for (ProposalId p : state.roster()) {
    auto m = proposal_metrics(p, state, cfg.appraisal);
    if (m.appraisal_count < static_cast<std::size_t>(cfg.scheduler.k_min_appraisals)) continue;
    if (!m.incomprehension_rate || *m.incomprehension_rate + 1e-12 < cfg.scheduler.theta_incomp) continue;
    if (!m.support || *m.support + 1e-12 < cfg.scheduler.theta_support) continue;
    if (size_of.at(p) > small) continue;
    out.push_back({p, m, size_of.at(p)});
  }
  std::stable_sort(out.begin(), out.end(), [](const RewriteTarget& a, const RewriteTarget& b) {
    return *a.metrics.incomprehension_rate > *b.metrics.incomprehension_rate;
  });
  return out;
}

std::optional<ParticipantId> select_rewriter(ProposalId p, const DeliberationState& state,
                                             const EngineConfig& cfg,
                                             const std::vector<ParticipantId>& exclude) {
  struct Option {
    ParticipantId id;
    bool agrees;
    double skill;
    std::size_t open;
  };
  std::vector<Option> options;
  auto it = state.appraisals.lower_bound({p, ParticipantId{0}});
  for (; it != state.appraisals.end() && it->first.first == p; ++it) {
    const auto& ap = it->second;
    if (ap.u + 1e-9 < cfg.appraisal.u_understood) continue;
    if (state.is_author(ap.participant, p)) continue;
    if (std::find(exclude.begin(), exclude.end(), ap.participant) != exclude.end()) continue;
    auto skill = writer_skill(ap.participant, state, cfg.metrics);
    if (!skill.skill) continue;
    options.push_back({ap.participant, ap.a && *ap.a > 0, *skill.skill,
                       open_task_count(ap.participant, state)});
  }
  // Agreement is preferred but not required.
  const bool any_agree = std::any_of(options.begin(), options.end(), [](const Option& o) { return o.agrees; });
  if (any_agree)
    options.erase(std::remove_if(options.begin(), options.end(), [](const Option& o) { return !o.agrees; }),
                  options.end());
  if (options.empty()) return std::nullopt;
  const auto best = std::min_element(options.begin(), options.end(), [](const Option& a, const Option& b) {
    if (a.skill != b.skill) return a.skill > b.skill;
    return std::tie(a.open, a.id) < std::tie(b.open, b.id);
  });
  return best->id;
}

std::vector<Task> blocker_rewrite_requests(const DeliberationState& state, const EngineConfig& cfg) {
  std::vector<Task> out;
  if (state.phase != Phase::Evaluation) return out;

  std::map<ParticipantId, std::size_t> load;
  for (const auto& [id, who] : state.participants) load[id] = open_task_count(id, state);

  auto already_invited = [&](ParticipantId who, const NearDomination& aim) {
    for (const auto& [id, t] : state.tasks) {
      if (t.assignee != who) continue;
      if (auto* r = std::get_if<task::RewriteForBlocker>(&t.kind); r && r->aim == aim) return true;
    }
    return false;
  };

  for (const auto& nd : near_dominations(state, cfg.scheduler.s_max)) {
    for (ParticipantId blocker : nd.blockers) {
      if (state.is_author(blocker, nd.dominator)) continue;
      if (already_invited(blocker, nd)) continue;
      if (load[blocker] >= static_cast<std::size_t>(cfg.scheduler.max_open_requests)) continue;
      ++load[blocker];
      Task t;
      t.kind = task::RewriteForBlocker{nd};
      t.assignee = blocker;
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<Task> clarity_rewrite_requests(const DeliberationState& state, const EngineConfig& cfg) {
  std::vector<Task> out;
  if (state.phase != Phase::Evaluation) return out;

  std::map<ParticipantId, std::size_t> batch;
  for (const auto& target : select_rewrite_targets(state, cfg)) {
    bool live = false;
    std::vector<ParticipantId> invited;
    for (const auto& [id, t] : state.tasks) {
      auto* r = std::get_if<task::RewriteObscure>(&t.kind);
      if (!r || r->proposal != target.proposal) continue;
      invited.push_back(t.assignee);
      if (t.status == TaskStatus::Open) live = true;
    }
    for (const auto& [id, d] : state.rewrites)
      if (d.target == target.proposal && d.kind == RewriteKind::ObscureClarification &&
          d.state != RewriteState::Rejected)
        live = true;
    if (live) continue;

    auto rewriter = select_rewriter(target.proposal, state, cfg, invited);
    if (!rewriter) continue;
    if (open_task_count(*rewriter, state) + batch[*rewriter] >=
        static_cast<std::size_t>(cfg.scheduler.max_open_requests))
      continue;
    ++batch[*rewriter];
    Task t;
    t.kind = task::RewriteObscure{target.proposal, *target.metrics.incomprehension_rate,
                                  *target.metrics.support};
    t.assignee = *rewriter;
    out.push_back(std::move(t));
  }
  return out;
}

GateResult incentive_gate(ParticipantId participant, const DeliberationState& state,
                          const SchedulerConfig& cfg) {
  const auto& who = state.participant(participant);
  if (!cfg.incentive_enabled) return {};
  const long long authored = static_cast<long long>(who.authored.size());
  const double required = cfg.gamma * static_cast<double>(std::max(0LL, authored - cfg.free_allowance));
  const double done = static_cast<double>(who.requested_completed);
  if (done + 1e-9 >= required) return {};
  return {false, static_cast<long long>(std::ceil(required - done - 1e-9))};
}

}  // namespace delib
