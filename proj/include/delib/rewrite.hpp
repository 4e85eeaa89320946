#pragma once

#include <string>
#include <vector>

#include "delib/model.hpp"

namespace delib {

std::string display_name(ParticipantId id, const DeliberationState& state);

/// "written by A and B[ and C...] on an original idea of A" for co-authored
/// proposals, "written by A" for a single author.
std::string attribution(const Proposal& proposal, const DeliberationState& state);

/// Agreers of the target plus everyone whose latest appraisal declared it
/// incomprehensible, ascending.
std::vector<ParticipantId> advertisement_audience(ProposalId target, const DeliberationState& state);

/// Author list of the proposal a draft publishes as. Clarifications extend
/// the target's list with the rewriter; compromises belong to the rewriter.
std::vector<ParticipantId> published_authors(const RewriteDraft& draft, const DeliberationState& state);

}  // namespace delib
