#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "delib/model.hpp"

namespace delib {

/// Largest admissible |a| at understanding u: round-half-up of u * a_max.
int agreement_span(double u, const AppraisalConfig& cfg);

bool on_grid(double u, const AppraisalConfig& cfg);

/// Index of the grid level nearest to u (ties resolve to the lower level).
double nearest_grid_level(double u, const AppraisalConfig& cfg);

enum class AppraisalViolation { None, Grid, Triangle };

struct AppraisalCheck {
  AppraisalViolation violation = AppraisalViolation::None;
  std::string reason;

  bool ok() const { return violation == AppraisalViolation::None; }
};

AppraisalCheck validate_appraisal(double u, std::optional<int> a,
                                  const AppraisalConfig& cfg);

using ParticipantSet = std::vector<ParticipantId>;  // sorted, unique

/// Participants whose latest appraisal of the proposal has a > 0.
/// Throws NotFound for an unknown proposal.
ParticipantSet agree_set(ProposalId proposal, const DeliberationState& state);

/// Agree-sets of every proposal in one pass over the appraisal table.
std::map<ProposalId, ParticipantSet> agree_sets(const DeliberationState& state);

/// Participants that have appraised the proposal at all, sorted.
ParticipantSet appraisers(ProposalId proposal, const DeliberationState& state);

std::size_t appraisal_count(ProposalId proposal, const DeliberationState& state);

}  // namespace delib
