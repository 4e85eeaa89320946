#include "delib/report.hpp"

#include "delib/appraisal.hpp"
#include "delib/clustering.hpp"
#include "delib/metrics.hpp"
#include "delib/pareto.hpp"
#include "delib/rewrite.hpp"
#include "delib/scheduler.hpp"

namespace delib::report {

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

template <class Tag>
json pub(const DeliberationState& s, const std::vector<Id<Tag>>& v) {
  json out = json::array();
  for (auto id : v) out.push_back(public_id(s.id, id));
  return out;
}

json stats(const ProposalMetrics& m) {
  return {{"appraisal_count", m.appraisal_count},
          {"clarity", opt(m.clarity)},
          {"incomprehension_rate", opt(m.incomprehension_rate)},
          {"support", opt(m.support)}};
}

json header(const DeliberationState& s) {
  return {{"deliberation", s.id},
          {"generation", s.generation},
          {"phase", std::string(to_string(s.phase))},
          {"last_seq", s.last_seq}};
}

}  // namespace

bool is_blind(ProposalId p, const DeliberationState& state) {
  return appraisal_count(p, state) < static_cast<std::size_t>(state.config.scheduler.k_min_appraisals);
}

json proposal_view(ProposalId p, const DeliberationState& s) {
  const auto& prop = s.proposal(p);
  json j = {{"id", public_id(s.id, p)},
            {"generation", prop.generation},
            {"body", prop.body},
            {"authors", pub(s, prop.authors)},
            {"attribution", attribution(prop, s)},
            {"lineage", prop.lineage ? json(public_id(s.id, *prop.lineage)) : json(nullptr)}};
  const bool blind = is_blind(p, s);
  j["blind"] = blind;
  j["stats"] = blind ? json(nullptr) : stats(proposal_metrics(p, s, s.config.appraisal));
  return j;
}

json front(const DeliberationState& s) {
  const auto rep = dominance_report(s);
  json nd = json::array();
  for (const auto& n : rep.near_dominations) {
    if (is_blind(n.dominator, s) || is_blind(n.dominated, s)) continue;
    nd.push_back({{"dominator", public_id(s.id, n.dominator)},
                  {"dominated", public_id(s.id, n.dominated)},
                  {"blockers", pub(s, n.blockers)}});
  }
  json j = header(s);
  j["front"] = pub(s, rep.front);
  j["near_dominations"] = nd;
  return j;
}

json clusters(const DeliberationState& s, double threshold) {
  const auto c = cluster_generation(s, threshold);
  json list = json::array();
  for (const auto& cl : c.clusters) {
    json members = json::array();
    for (ProposalId p : cl.ranked) members.push_back(proposal_view(p, s));
    list.push_back({{"label", public_id(s.id, cl.label)}, {"size", cl.members.size()}, {"ranked", members}});
  }
  json j = header(s);
  j["threshold"] = threshold;
  j["clusters"] = list;
  return j;
}

json digest(const DeliberationState& s, double threshold, int top_k) {
  const auto entries = delib::digest(cluster_generation(s, threshold), top_k);
  json list = json::array();
  for (const auto& e : entries) {
    json top = json::array();
    for (ProposalId p : e.top) top.push_back(proposal_view(p, s));
    list.push_back({{"cluster", public_id(s.id, e.label)}, {"size", e.size}, {"top", top}});
  }
  json j = header(s);
  j["threshold"] = threshold;
  j["top_k"] = top_k;
  j["digest"] = list;
  return j;
}

json rewrite_shortlist(const DeliberationState& s) {
  json list = json::array();
  for (const auto& t : select_rewrite_targets(s, s.config)) {
    const auto rewriter = select_rewriter(t.proposal, s, s.config);
    list.push_back({{"proposal", public_id(s.id, t.proposal)},
                    {"cluster_size", t.cluster_size},
                    {"stats", stats(t.metrics)},
                    {"rewriter", rewriter ? json(public_id(s.id, *rewriter)) : json(nullptr)}});
  }
  json j = header(s);
  j["targets"] = list;
  return j;
}

json analysis(const DeliberationState& s, double threshold, int top_k) {
  json j = header(s);
  j["front"] = front(s);
  j["clusters"] = clusters(s, threshold);
  j["digest"] = digest(s, threshold, top_k);
  j["rewrite_shortlist"] = rewrite_shortlist(s);
  return j;
}

}  // namespace delib::report
