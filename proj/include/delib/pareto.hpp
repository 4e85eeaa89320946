#pragma once

#include <map>
#include <vector>

#include "delib/appraisal.hpp"
#include "delib/model.hpp"

namespace delib {

/// Selection filter of one generation: the non-dominated proposals plus the
/// pairs that could be merged by a compromise rewrite.
struct DominanceReport {
  std::uint32_t generation = 0;
  std::vector<ProposalId> front;  // ascending
  std::vector<NearDomination> near_dominations;

  bool operator==(const DominanceReport&) const = default;
};

/// A dominates B iff agree(B) is a strict subset of agree(A).
bool dominates(const ParticipantSet& a, const ParticipantSet& b);
bool dominates(ProposalId a, ProposalId b, const DeliberationState& state);

/// Non-dominated proposals among `candidates` given their agree-sets.
std::vector<ProposalId> pareto_front(const std::vector<ProposalId>& candidates,
                                     const std::map<ProposalId, ParticipantSet>& agree);
/// Front of the current generation.
std::vector<ProposalId> pareto_front(const DeliberationState& state);

std::vector<NearDomination> near_dominations(const std::vector<ProposalId>& candidates,
                                             const std::map<ProposalId, ParticipantSet>& agree,
                                             int s_max);
/// Near-dominations within the current generation; throws Invalid if s_max < 1.
std::vector<NearDomination> near_dominations(const DeliberationState& state, int s_max);

DominanceReport dominance_report(const DeliberationState& state);

/// True iff agree(a) together with the blockers S of (a, b) is contained in
/// agree(a_prime). S is the blocker set the rewrite was invited against when
/// a_prime descends from such an invitation, else agree(b) \ agree(a) now.
bool rewrite_gain_check(ProposalId a_prime, ProposalId a, ProposalId b,
                        const DeliberationState& state);

}  // namespace delib
