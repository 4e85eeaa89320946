#include "delib/appraisal.hpp"

#include <algorithm>
#include <cmath>

#include "delib/error.hpp"

namespace delib {

namespace {
constexpr double kGridEps = 1e-9;
}

int agreement_span(double u, const AppraisalConfig& cfg) {
  // Half-up; the epsilon absorbs representation error in products like 0.5 * 5.
  return static_cast<int>(std::floor(u * cfg.a_max + 0.5 + kGridEps));
}

bool on_grid(double u, const AppraisalConfig& cfg) {
  return std::any_of(cfg.u_grid.begin(), cfg.u_grid.end(),
                     [u](double g) { return std::abs(g - u) < kGridEps; });
}

double nearest_grid_level(double u, const AppraisalConfig& cfg) {
  double best = cfg.u_grid.front();
  for (double g : cfg.u_grid) {
    if (std::abs(g - u) < std::abs(best - u) - kGridEps) best = g;
  }
  return best;
}

AppraisalCheck validate_appraisal(double u, std::optional<int> a, const AppraisalConfig& cfg) {
  if (!std::isfinite(u) || !on_grid(u, cfg))
    return {AppraisalViolation::Grid, "understanding level is not on the grid"};
  if (!a) return {};
  if (u <= kGridEps)
    return {AppraisalViolation::Triangle,
            "an incomprehensible proposal cannot be rated on the agreement axis"};
  const int span = agreement_span(u, cfg);
  if (std::abs(*a) > span)
    return {AppraisalViolation::Triangle, "|a| = " + std::to_string(std::abs(*a)) +
                                              " exceeds span " + std::to_string(span) +
                                              " at this understanding"};
  return {};
}

ParticipantSet agree_set(ProposalId proposal, const DeliberationState& state) {
  state.proposal(proposal);
  ParticipantSet out;
  auto it = state.appraisals.lower_bound({proposal, ParticipantId{0}});
  for (; it != state.appraisals.end() && it->first.first == proposal; ++it) {
    const auto& ap = it->second;
    if (ap.a && *ap.a > 0) out.push_back(ap.participant);
  }
  return out;  // map order already sorts by participant
}

std::map<ProposalId, ParticipantSet> agree_sets(const DeliberationState& state) {
  std::map<ProposalId, ParticipantSet> out;
  for (const auto& [id, p] : state.proposals) out[id];
  for (const auto& [key, ap] : state.appraisals) {
    if (ap.a && *ap.a > 0) out[key.first].push_back(ap.participant);
  }
  return out;
}

ParticipantSet appraisers(ProposalId proposal, const DeliberationState& state) {
  ParticipantSet out;
  auto it = state.appraisals.lower_bound({proposal, ParticipantId{0}});
  for (; it != state.appraisals.end() && it->first.first == proposal; ++it)
    out.push_back(it->first.second);
  return out;
}

std::size_t appraisal_count(ProposalId proposal, const DeliberationState& state) {
  auto lo = state.appraisals.lower_bound({proposal, ParticipantId{0}});
  auto hi = state.appraisals.lower_bound({ProposalId{proposal.value + 1}, ParticipantId{0}});
  return static_cast<std::size_t>(std::distance(lo, hi));
}

}  // namespace delib
