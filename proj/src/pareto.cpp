#include "delib/pareto.hpp"

#include <algorithm>
#include <iterator>
#include <tuple>

#include "delib/error.hpp"

namespace delib {

namespace {

ParticipantSet difference(const ParticipantSet& a, const ParticipantSet& b) {
  ParticipantSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

const ParticipantSet& lookup(const std::map<ProposalId, ParticipantSet>& agree, ProposalId id) {
  static const ParticipantSet empty;
  auto it = agree.find(id);
  return it == agree.end() ? empty : it->second;
}

}  // namespace

bool dominates(const ParticipantSet& a, const ParticipantSet& b) {
  return a.size() > b.size() && std::includes(a.begin(), a.end(), b.begin(), b.end());
}

bool dominates(ProposalId a, ProposalId b, const DeliberationState& state) {
  return dominates(agree_set(a, state), agree_set(b, state));
}

std::vector<ProposalId> pareto_front(const std::vector<ProposalId>& candidates,
                                     const std::map<ProposalId, ParticipantSet>& agree) {
  std::vector<ProposalId> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<ProposalId> front;
  for (ProposalId b : sorted) {
    const auto& vb = lookup(agree, b);
    bool dominated = std::any_of(sorted.begin(), sorted.end(), [&](ProposalId a) {
      return a != b && dominates(lookup(agree, a), vb);
    });
    if (!dominated) front.push_back(b);
  }
  return front;
}

std::vector<ProposalId> pareto_front(const DeliberationState& state) {
  return pareto_front(state.roster(), agree_sets(state));
}

std::vector<NearDomination> near_dominations(const std::vector<ProposalId>& candidates,
                                             const std::map<ProposalId, ParticipantSet>& agree,
                                             int s_max) {
  if (s_max < 1) fail(ErrorCode::Invalid, "s_max must be >= 1");
  std::vector<ProposalId> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<NearDomination> out;
  for (ProposalId a : sorted) {
    const auto& va = lookup(agree, a);
    for (ProposalId b : sorted) {
      if (a == b) continue;
      const auto& vb = lookup(agree, b);
      auto blockers = difference(vb, va);
      if (blockers.empty() || blockers.size() > static_cast<std::size_t>(s_max)) continue;
      // A needs a voter of its own, otherwise B dominates A.
      if (difference(va, vb).empty()) continue;
      out.push_back({a, b, std::move(blockers)});
    }
  }
  std::sort(out.begin(), out.end(), [&](const NearDomination& x, const NearDomination& y) {
    auto key = [&](const NearDomination& n) {
      return std::make_tuple(n.blockers.size(), -static_cast<long long>(lookup(agree, n.dominator).size()),
                             n.dominator, n.dominated);
    };
    return key(x) < key(y);
  });
  return out;
}

std::vector<NearDomination> near_dominations(const DeliberationState& state, int s_max) {
  return near_dominations(state.roster(), agree_sets(state), s_max);
}

DominanceReport dominance_report(const DeliberationState& state) {
  const auto agree = agree_sets(state);
  DominanceReport report;
  report.generation = state.generation;
  report.front = pareto_front(state.roster(), agree);
  report.near_dominations = near_dominations(state.roster(), agree, state.config.scheduler.s_max);
  return report;
}

bool rewrite_gain_check(ProposalId a_prime, ProposalId a, ProposalId b,
                        const DeliberationState& state) {
  const auto& derived = state.proposal(a_prime);
  const auto va = agree_set(a, state);
  const auto vb = agree_set(b, state);
  const auto vprime = agree_set(a_prime, state);

  ParticipantSet blockers;
  bool from_invitation = false;
  if (derived.lineage) {
    auto it = state.rewrites.find(*derived.lineage);
    if (it != state.rewrites.end() && it->second.aim && it->second.aim->dominator == a &&
        it->second.aim->dominated == b) {
      blockers = it->second.aim->blockers;
      from_invitation = true;
    }
  }
  if (!from_invitation) blockers = difference(vb, va);

  ParticipantSet required;
  std::set_union(va.begin(), va.end(), blockers.begin(), blockers.end(),
                 std::back_inserter(required));
  return std::includes(vprime.begin(), vprime.end(), required.begin(), required.end());
}

}  // namespace delib
