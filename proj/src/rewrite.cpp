#include "delib/rewrite.hpp"

#include <algorithm>
#include <iterator>

#include "delib/appraisal.hpp"

namespace delib {

std::string display_name(ParticipantId id, const DeliberationState& state) {
  auto it = state.participants.find(id);
  if (it == state.participants.end() || it->second.name.empty()) return to_string(id);
  return it->second.name;
}

std::string attribution(const Proposal& proposal, const DeliberationState& state) {
  const auto& authors = proposal.authors;
  if (authors.empty()) return {};
  std::string out = "written by " + display_name(authors.front(), state);
  if (authors.size() == 1) return out;
  for (std::size_t i = 1; i < authors.size(); ++i) out += " and " + display_name(authors[i], state);
  out += " on an original idea of " + display_name(authors.front(), state);
  return out;
}

std::vector<ParticipantId> advertisement_audience(ProposalId target, const DeliberationState& state) {
  const auto supporters = agree_set(target, state);
  const double lost = state.config.appraisal.u_incomprehensible;
  std::vector<ParticipantId> confused;
  auto it = state.appraisals.lower_bound({target, ParticipantId{0}});
  for (; it != state.appraisals.end() && it->first.first == target; ++it)
    if (it->second.u <= lost + 1e-9) confused.push_back(it->second.participant);

  std::vector<ParticipantId> out;
  std::set_union(supporters.begin(), supporters.end(), confused.begin(), confused.end(),
                 std::back_inserter(out));
  return out;
}

std::vector<ParticipantId> published_authors(const RewriteDraft& draft, const DeliberationState& state) {
  if (draft.kind == RewriteKind::BlockerCompromise) return {draft.rewriter};
  auto authors = state.proposal(draft.target).authors;
  if (std::find(authors.begin(), authors.end(), draft.rewriter) == authors.end())
    authors.push_back(draft.rewriter);
  return authors;
}

}  // namespace delib
