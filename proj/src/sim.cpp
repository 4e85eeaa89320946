#include "delib/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "delib/appraisal.hpp"
#include "delib/clustering.hpp"
#include "delib/codec.hpp"
#include "delib/error.hpp"
#include "delib/pareto.hpp"
#include "delib/report.hpp"
#include "delib/rewrite.hpp"
#include "delib/scheduler.hpp"
#include "delib/store.hpp"

namespace delib::sim {

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::ClusterRecovery: return "cluster-recovery";
    case Scenario::ObscureGem: return "obscure-gem";
    case Scenario::FrontShrink: return "front-shrink";
  }
  return "cluster-recovery";
}

// ---------------------------------------------------------------------------
// Spec parsing

namespace {

template <class T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const char* section) {
  if (!j.is_object()) fail(ErrorCode::Invalid, std::string(section) + " must be an object");
  for (const auto& [k, v] : j.items())
    if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; }))
      fail(ErrorCode::Invalid, "unknown key '" + k + "' in " + section);
}

}  // namespace

PopulationSpec parse_spec(const json& j) {
  PopulationSpec s;
  try {
    only_keys(j,
              {"scenario", "seed", "participants", "dimensions", "blocs", "skill", "clarity_noise",
               "clarity_spread", "position_noise", "p_accept", "agreement", "proposals", "generations",
               "new_per_generation", "gem", "engine"},
              "spec");
    const auto scenario = j.at("scenario").get<std::string>();
    if (scenario == "cluster-recovery")
      s.scenario = Scenario::ClusterRecovery;
    else if (scenario == "obscure-gem")
      s.scenario = Scenario::ObscureGem;
    else if (scenario == "front-shrink")
      s.scenario = Scenario::FrontShrink;
    else
      fail(ErrorCode::Invalid, "unknown scenario '" + scenario + "'");

    read(j, "seed", s.seed);
    s.participants = j.at("participants").get<int>();
    read(j, "dimensions", s.dimensions);
    if (auto it = j.find("blocs"); it != j.end()) {
      for (const auto& b : *it) {
        only_keys(b, {"size", "center", "spread"}, "bloc");
        Bloc bloc;
        bloc.size = b.at("size").get<int>();
        bloc.center = b.at("center").get<std::vector<double>>();
        read(b, "spread", bloc.spread);
        s.blocs.push_back(std::move(bloc));
      }
    } else {
      s.blocs.push_back({s.participants, std::vector<double>(static_cast<std::size_t>(std::max(1, s.dimensions)), 1.0), 0.5});
    }
    if (auto it = j.find("skill"); it != j.end()) {
      only_keys(*it, {"min", "max"}, "skill");
      read(*it, "min", s.skill_min);
      read(*it, "max", s.skill_max);
    }
    read(j, "clarity_noise", s.clarity_noise);
    read(j, "clarity_spread", s.clarity_spread);
    read(j, "position_noise", s.position_noise);
    read(j, "p_accept", s.p_accept);
    if (auto it = j.find("agreement"); it != j.end()) {
      only_keys(*it, {"model", "p_within", "p_cross"}, "agreement");
      const auto model = it->value("model", std::string("latent"));
      if (model == "latent")
        s.agreement = AgreementModel::Latent;
      else if (model == "planted")
        s.agreement = AgreementModel::Planted;
      else
        fail(ErrorCode::Invalid, "unknown agreement model '" + model + "'");
      read(*it, "p_within", s.p_within);
      read(*it, "p_cross", s.p_cross);
    }
    s.proposals = j.value("proposals", s.participants);
    read(j, "generations", s.generations);
    read(j, "new_per_generation", s.new_per_generation);
    if (auto it = j.find("gem"); it != j.end()) {
      only_keys(*it, {"clarity", "understood_clarity", "understander_share", "support"}, "gem");
      read(*it, "clarity", s.gem.clarity);
      read(*it, "understood_clarity", s.gem.understood_clarity);
      read(*it, "understander_share", s.gem.understander_share);
      read(*it, "support", s.gem.support);
    }
    s.engine.scheduler.rng_seed = s.seed;
    if (auto it = j.find("engine"); it != j.end()) s.engine = codec::decode_config(*it, s.engine);
  } catch (const json::exception& e) {
    fail(ErrorCode::Invalid, std::string("malformed spec: ") + e.what());
  }
  validate_spec(s);
  return s;
}

PopulationSpec load_spec(const std::filesystem::path& path) {
  const auto text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Invalid, "spec " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_spec(j);
}

void validate_spec(const PopulationSpec& s) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::Invalid, what);
  };
  need(s.participants >= 2, "participants must be >= 2");
  need(s.dimensions >= 1, "dimensions must be >= 1");
  need(!s.blocs.empty(), "at least one bloc is required");
  long long total = 0;
  for (const auto& b : s.blocs) {
    need(b.size >= 1, "bloc sizes must be >= 1");
    need(b.center.size() == static_cast<std::size_t>(s.dimensions), "bloc centers must have `dimensions` entries");
    need(b.spread >= 0.0, "bloc spread must be >= 0");
    total += b.size;
  }
  need(total == s.participants, "bloc sizes must sum to participants");
  need(0.0 <= s.skill_min && s.skill_min <= s.skill_max && s.skill_max <= 1.0, "need 0 <= skill.min <= skill.max <= 1");
  need(s.clarity_noise >= 0.0 && s.clarity_spread >= 0.0 && s.position_noise >= 0.0, "noise levels must be >= 0");
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  need(prob(s.p_accept) && prob(s.p_within) && prob(s.p_cross), "probabilities must lie in [0,1]");
  need(s.proposals >= 1, "proposals must be >= 1");
  need(s.generations >= 1, "generations must be >= 1");
  need(s.new_per_generation >= 0, "new_per_generation must be >= 0");
  need(prob(s.gem.clarity) && prob(s.gem.understood_clarity) && prob(s.gem.understander_share) &&
           prob(s.gem.support),
       "gem parameters must lie in [0,1]");
  validate_config(s.engine);
}

// ---------------------------------------------------------------------------
// Agent model

double Rng::uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

std::pair<double, std::optional<int>> agent_appraise(const Agent& agent, const AgentProposal& proposal,
                                                     const AppraisalConfig& cfg, const AppraisalModel& model,
                                                     Rng& rng) {
  const double perceived = std::clamp(proposal.clarity + model.clarity_noise * rng.normal(), 0.0, 1.0);
  const double u = nearest_grid_level(perceived, cfg);
  if (u <= cfg.u_incomprehensible + 1e-9) return {u, std::nullopt};
  const int span = agreement_span(u, cfg);
  if (model.kind == AgreementModel::Planted) {
    const double p = agent.bloc == proposal.bloc ? model.p_within : model.p_cross;
    return {u, rng.bernoulli(p) ? span : -span};
  }
  const double sim = cosine(agent.opinion, proposal.position);
  const int a = static_cast<int>(std::lround(sim * span));
  return {u, std::clamp(a, -span, span)};
}

double cluster_purity(const std::vector<std::vector<ProposalId>>& clusters,
                      const std::map<ProposalId, std::size_t>& bloc_of) {
  std::size_t blocs = 0;
  for (const auto& [p, b] : bloc_of) blocs = std::max(blocs, b + 1);
  if (bloc_of.empty()) return 1.0;
  if (blocs > 20) fail(ErrorCode::Invalid, "purity supports at most 20 blocs");

  std::vector<std::vector<std::size_t>> overlap(clusters.size(), std::vector<std::size_t>(blocs, 0));
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (ProposalId p : clusters[c])
      if (auto it = bloc_of.find(p); it != bloc_of.end()) ++overlap[c][it->second];

  // best[mask]: largest total overlap using the blocs in mask, each matched
  // to a distinct cluster among those seen so far.
  const std::size_t full = std::size_t{1} << blocs;
  std::vector<long long> best(full, -1);
  best[0] = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    auto next = best;
    for (std::size_t mask = 0; mask < full; ++mask) {
      if (best[mask] < 0) continue;
      for (std::size_t b = 0; b < blocs; ++b) {
        if (mask & (std::size_t{1} << b)) continue;
        const auto m = mask | (std::size_t{1} << b);
        next[m] = std::max(next[m], best[mask] + static_cast<long long>(overlap[c][b]));
      }
    }
    best = std::move(next);
  }
  const long long top = *std::max_element(best.begin(), best.end());
  return static_cast<double>(top) / static_cast<double>(bloc_of.size());
}

// ---------------------------------------------------------------------------
// Scenarios

namespace {

struct World {
  const PopulationSpec& spec;
  Rng rng;
  Deliberation d;
  std::vector<Agent> agents;
  std::map<ProposalId, AgentProposal> props;
  // Verdicts fixed in advance for particular (proposal, participant) pairs.
  std::map<std::pair<ProposalId, ParticipantId>, std::pair<double, std::optional<int>>> planted;

  World(const PopulationSpec& s, DeliberationId id)
      : spec(s), rng(s.seed), d(Deliberation::create(std::move(id), s.engine)) {}

  const Agent& agent(ParticipantId id) const { return agents.at(id.value - 1); }

  AppraisalModel model() const { return {spec.agreement, spec.clarity_noise, spec.p_within, spec.p_cross}; }

  void populate() {
    for (std::size_t b = 0; b < spec.blocs.size(); ++b) {
      const auto& bloc = spec.blocs[b];
      for (int i = 0; i < bloc.size; ++i) {
        Agent a;
        a.id = d.join("agent-" + std::to_string(agents.size() + 1));
        a.bloc = b;
        for (double c : bloc.center) a.opinion.push_back(c + bloc.spread * rng.normal());
        a.skill = spec.skill_min + (spec.skill_max - spec.skill_min) * rng.uniform01();
        agents.push_back(std::move(a));
      }
    }
  }

  ProposalId author(const Agent& a) {
    AgentProposal p;
    for (double c : a.opinion) p.position.push_back(c + spec.position_noise * rng.normal());
    p.clarity = std::clamp(a.skill + spec.clarity_spread * rng.normal(), 0.0, 1.0);
    p.bloc = a.bloc;
    const auto id = d.submit_proposal(a.id, "proposal by " + to_string(a.id));
    props.emplace(id, std::move(p));
    return id;
  }

  /// Proposal authors taken round-robin across blocs, cycling through each
  /// bloc's members.
  std::vector<ProposalId> author_round_robin(int count) {
    std::vector<std::vector<const Agent*>> by_bloc(spec.blocs.size());
    for (const auto& a : agents) by_bloc[a.bloc].push_back(&a);
    std::vector<std::size_t> next(spec.blocs.size(), 0);
    std::vector<ProposalId> out;
    for (int i = 0; i < count; ++i) {
      const auto b = static_cast<std::size_t>(i) % by_bloc.size();
      const Agent* a = by_bloc[b][next[b]++ % by_bloc[b].size()];
      out.push_back(author(*a));
    }
    return out;
  }

  std::pair<double, std::optional<int>> verdict(const Agent& a, ProposalId p) {
    if (auto it = planted.find({p, a.id}); it != planted.end()) return it->second;
    return agent_appraise(a, props.at(p), spec.engine.appraisal, model(), rng);
  }

  void appraise(const Agent& a, ProposalId p, std::optional<TaskId> task) {
    const auto [u, v] = verdict(a, p);
    d.submit_appraisal(a.id, p, u, v, task);
  }

  /// Round-robin readiness signals until a full round hands out nothing.
  /// Agents carry out appraisal requests and decline anything else.
  std::size_t pull_until_idle() {
    std::size_t handled = 0;
    for (bool any = true; any;) {
      any = false;
      for (const auto& a : agents) {
        auto t = d.next_task(a.id);
        if (!t) continue;
        any = true;
        ++handled;
        if (auto* ap = std::get_if<task::AppraiseProposal>(&t->kind)) {
          appraise(a, ap->proposal, t->id);
        } else if (auto* pr = std::get_if<task::AppraisePair>(&t->kind)) {
          for (ProposalId p : pr->to_appraise) appraise(a, p, t->id);
        } else {
          d.decline_task(a.id, t->id);
        }
      }
    }
    return handled;
  }

  template <class Tag>
  std::string pub(Id<Tag> id) const {
    return public_id(d.id(), id);
  }

  template <class Tag>
  json pubs(const std::vector<Id<Tag>>& v) const {
    json out = json::array();
    for (auto id : v) out.push_back(pub(id));
    return out;
  }

  void decline_open_invitations() {
    std::vector<std::pair<ParticipantId, TaskId>> open;
    for (const auto& [id, t] : d.state().tasks)
      if (t.status == TaskStatus::Open && is_rewrite_invitation(t.kind)) open.emplace_back(t.assignee, id);
    for (auto [who, id] : open) d.decline_task(who, id);
  }
};

json run_cluster_recovery(World& w) {
  w.populate();
  const auto ids = w.author_round_robin(w.spec.proposals);
  w.d.open_evaluation();
  const auto pulls = w.pull_until_idle();

  const auto& s = w.d.state();
  const double x = s.config.clustering.threshold;
  const auto clustering = cluster_generation(s, x);
  std::vector<std::vector<ProposalId>> clusters;
  json sizes = json::array();
  for (const auto& c : clustering.clusters) {
    clusters.push_back(c.members);
    sizes.push_back(c.members.size());
  }
  std::map<ProposalId, std::size_t> bloc_of;
  std::vector<std::vector<ProposalId>> members(w.spec.blocs.size());
  for (ProposalId p : ids) {
    bloc_of[p] = w.props.at(p).bloc;
    members[w.props.at(p).bloc].push_back(p);
  }
  json blocs = json::array();
  for (std::size_t b = 0; b < members.size(); ++b) blocs.push_back({{"bloc", b}, {"proposals", w.pubs(members[b])}});

  return {{"threshold", x},
          {"purity", cluster_purity(clusters, bloc_of)},
          {"cluster_count", clusters.size()},
          {"cluster_sizes", sizes},
          {"planted_blocs", blocs},
          {"tasks_handled", pulls}};
}

json run_obscure_gem(World& w) {
  w.populate();
  const auto& cfg = w.spec.engine;
  const auto gem_index = static_cast<int>(w.rng.below(static_cast<std::uint64_t>(w.spec.proposals)));

  // Authors cycle through the agents in join order, one proposal each.
  std::vector<ProposalId> ids;
  ProposalId gem;
  for (int i = 0; i < w.spec.proposals; ++i) {
    const Agent& a = w.agents[static_cast<std::size_t>(i) % w.agents.size()];
    ids.push_back(w.author(a));
    if (i == gem_index) gem = ids.back();
  }
  auto& gem_prop = w.props.at(gem);
  gem_prop.clarity = w.spec.gem.clarity;
  const auto gem_author = w.d.state().proposal(gem).authors.front();

  // Plant: understanders drawn from every bloc in proportion, a fixed share
  // of whom agree.
  std::vector<std::vector<ParticipantId>> pool(w.spec.blocs.size());
  std::size_t non_authors = 0;
  for (const auto& a : w.agents)
    if (a.id != gem_author) {
      pool[a.bloc].push_back(a.id);
      ++non_authors;
    }
  const auto want = static_cast<std::size_t>(std::lround(w.spec.gem.understander_share * static_cast<double>(non_authors)));
  std::vector<ParticipantId> understanders;
  {
    std::vector<std::size_t> quota(pool.size(), 0);
    std::size_t assigned = 0;
    for (std::size_t b = 0; b < pool.size(); ++b) {
      quota[b] = want * pool[b].size() / non_authors;
      assigned += quota[b];
    }
    for (std::size_t b = 0; assigned < want; b = (b + 1) % pool.size())
      if (quota[b] < pool[b].size()) {
        ++quota[b];
        ++assigned;
      }
    for (std::size_t b = 0; b < pool.size(); ++b) {
      w.rng.shuffle(pool[b]);
      understanders.insert(understanders.end(), pool[b].begin(), pool[b].begin() + static_cast<long>(quota[b]));
    }
  }
  w.rng.shuffle(understanders);
  const auto agree_n = static_cast<std::size_t>(std::lround(w.spec.gem.support * static_cast<double>(understanders.size())));
  std::vector<ParticipantId> agreers(understanders.begin(), understanders.begin() + static_cast<long>(agree_n));
  for (std::size_t i = 0; i < understanders.size(); ++i) {
    const double u = std::max(cfg.appraisal.u_understood,
                              nearest_grid_level(std::clamp(w.spec.gem.understood_clarity +
                                                                w.spec.clarity_noise * w.rng.normal(), 0.0, 1.0),
                                                 cfg.appraisal));
    const int span = agreement_span(u, cfg.appraisal);
    w.planted[{gem, understanders[i]}] = {u, i < agree_n ? span : -span};
  }
  std::sort(understanders.begin(), understanders.end());
  std::sort(agreers.begin(), agreers.end());

  w.d.open_evaluation();
  const auto pulls = w.pull_until_idle();

  const auto& s = w.d.state();
  const auto targets = select_rewrite_targets(s, cfg);
  json target_ids = json::array();
  bool selected = false;
  for (const auto& t : targets) {
    target_ids.push_back(w.pub(t.proposal));
    selected = selected || t.proposal == gem;
  }
  const auto metrics = proposal_metrics(gem, s, cfg.appraisal);
  const auto chosen = select_rewriter(gem, s, cfg);

  json out = {{"gem", w.pub(gem)},
              {"gem_author", w.pub(gem_author)},
              {"planted_understanders", w.pubs(understanders)},
              {"planted_agreers", w.pubs(agreers)},
              {"gem_incomprehension_rate", *metrics.incomprehension_rate},
              {"gem_support", metrics.support ? json(*metrics.support) : json(nullptr)},
              {"targets", target_ids},
              {"gem_selected", selected},
              {"selected_rewriter", chosen ? json(w.pub(*chosen)) : json(nullptr)},
              {"tasks_handled", pulls}};

  // Invitation, rewrite, approval, publication.
  std::optional<Task> invitation;
  for (const auto& t : w.d.issue_invitations())
    if (auto* r = std::get_if<task::RewriteObscure>(&t.kind); r && r->proposal == gem) invitation = t;
  out["invited_rewriter"] = invitation ? json(w.pub(invitation->assignee)) : json(nullptr);
  if (invitation) {
    const auto draft = w.d.submit_rewrite(invitation->assignee, invitation->id,
                                          "clarified: " + w.d.state().proposal(gem).body);
    w.decline_open_invitations();
    const auto approval = w.d.next_task(gem_author);
    if (approval && std::holds_alternative<task::ApproveRewrite>(approval->kind)) {
      const auto done = w.d.record_approval(gem_author, draft.id, Verdict::Approve);
      out["rewrite"] = w.pub(draft.id);
      out["published_as"] = done.published_as ? json(w.pub(*done.published_as)) : json(nullptr);
      if (done.published_as) {
        const auto& np = w.d.state().proposal(*done.published_as);
        out["attribution"] = attribution(np, w.d.state());
        for (const auto& e : w.d.events())
          if (auto* pub = std::get_if<ev::RewritePublished>(&e.payload); pub && pub->rewrite == draft.id)
            out["audience"] = w.pubs(pub->audience);
      }
    }
  } else {
    w.decline_open_invitations();
  }
  return out;
}

json run_front_shrink(World& w) {
  w.populate();
  json trajectory = json::array();
  for (int g = 0; g < w.spec.generations; ++g) {
    if (g == 0) {
      w.author_round_robin(w.spec.proposals);
    } else {
      for (int i = 0; i < w.spec.new_per_generation; ++i)
        w.author(w.agents[w.rng.below(w.agents.size())]);
    }
    w.d.open_evaluation();
    w.pull_until_idle();

    const auto before = pareto_front(w.d.state());
    const std::set<ProposalId> in_front(before.begin(), before.end());
    const auto issued = w.d.issue_invitations();

    std::set<ProposalId> handled;
    json exchanges = json::array();
    for (const auto& t : issued) {
      auto* r = std::get_if<task::RewriteForBlocker>(&t.kind);
      if (!r) continue;
      const auto& aim = r->aim;
      if (!in_front.count(aim.dominator) || !in_front.count(aim.dominated) || handled.count(aim.dominator)) continue;
      if (w.d.state().task(t.id).status != TaskStatus::Open) continue;
      handled.insert(aim.dominator);

      // Snapshot what the supporters and blockers said about A and B.
      const auto supporters = agree_set(aim.dominator, w.d.state());
      std::vector<std::pair<ParticipantId, Appraisal>> copies;
      for (ParticipantId s : supporters) copies.emplace_back(s, *w.d.state().find_appraisal(s, aim.dominator));
      for (ParticipantId b : aim.blockers)
        if (b != t.assignee) copies.emplace_back(b, *w.d.state().find_appraisal(b, aim.dominated));

      const auto draft = w.d.submit_rewrite(t.assignee, t.id,
                                            "compromise of " + to_string(aim.dominator) + " for " + to_string(t.assignee));
      const ProposalId a_prime = *w.d.state().rewrite(draft.id).published_as;
      AgentProposal clone = w.props.at(aim.dominator);
      w.props.emplace(a_prime, clone);
      for (const auto& [who, ap] : copies)
        if (w.rng.bernoulli(w.spec.p_accept)) w.d.submit_appraisal(who, a_prime, ap.u, ap.a);

      exchanges.push_back({{"target", w.pub(aim.dominator)},
                           {"preferred", w.pub(aim.dominated)},
                           {"blockers", w.pubs(aim.blockers)},
                           {"rewriter", w.pub(t.assignee)},
                           {"published", w.pub(a_prime)},
                           {"gain_check", rewrite_gain_check(a_prime, aim.dominator, aim.dominated, w.d.state())}});
    }
    w.decline_open_invitations();
    const auto after = pareto_front(w.d.state());
    trajectory.push_back({{"generation", w.d.state().generation},
                          {"roster_size", w.d.state().roster().size()},
                          {"front_before", before.size()},
                          {"front_after", after.size()},
                          {"front", w.pubs(after)},
                          {"exchanges", exchanges}});
    if (g + 1 < w.spec.generations) w.d.advance_generation();
  }
  return {{"p_accept", w.spec.p_accept}, {"generations", trajectory}};
}

}  // namespace

RunResult run_experiment(const PopulationSpec& spec) {
  validate_spec(spec);
  const DeliberationId id = std::string(to_string(spec.scenario)) + "-s" + std::to_string(spec.seed);
  World w(spec, id);
  json metrics;
  switch (spec.scenario) {
    case Scenario::ClusterRecovery: metrics = run_cluster_recovery(w); break;
    case Scenario::ObscureGem: metrics = run_obscure_gem(w); break;
    case Scenario::FrontShrink: metrics = run_front_shrink(w); break;
  }
  const auto& s = w.d.state();
  json analysis = report::analysis(s, s.config.clustering.threshold, s.config.clustering.top_k);
  json rep = {{"scenario", std::string(to_string(spec.scenario))},
              {"seed", spec.seed},
              {"deliberation", id},
              {"participants", spec.participants},
              {"events", s.last_seq},
              {"metrics", metrics},
              {"analysis", analysis}};
  return RunResult{std::move(w.d), std::move(rep), std::move(analysis)};
}

void write_outputs(const RunResult& result, const std::filesystem::path& out) {
  const auto& d = result.deliberation;
  Store store(out);
  write_file(store.log_path(d.id()), serialize_log(d.id(), d.events()));
  store.write_snapshot(d.state());
  write_file(out / "report.json", codec::canonical(result.report) + "\n");
  write_file(out / "analysis.json", codec::canonical(result.analysis) + "\n");
}

}  // namespace delib::sim
