#pragma once

#include <json.hpp>

#include "delib/model.hpp"

namespace delib::report {

using json = nlohmann::json;

// Read-side views shared by the HTTP service, `delib analyze` and the
// simulator. Proposals and participants appear under their public ids.
// Statistics of a proposal with fewer than k_min_appraisals appraisals are
// withheld ("stats": null, "blind": true), and near-dominations touching
// such a proposal are not listed.

bool is_blind(ProposalId p, const DeliberationState& state);

json proposal_view(ProposalId p, const DeliberationState& state);

json front(const DeliberationState& state);
json clusters(const DeliberationState& state, double threshold);
json digest(const DeliberationState& state, double threshold, int top_k);
json rewrite_shortlist(const DeliberationState& state);

/// Everything above in one document.
json analysis(const DeliberationState& state, double threshold, int top_k);

}  // namespace delib::report
