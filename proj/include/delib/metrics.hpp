#pragma once

#include <optional>

#include "delib/model.hpp"

namespace delib {

struct ProposalMetrics {
  ProposalId proposal;
  std::size_t appraisal_count = 0;
  std::optional<double> clarity;               // mean u
  std::optional<double> incomprehension_rate;  // share with u <= u_incomprehensible
  std::optional<double> support;               // share with a > 0 among u >= u_understood

  bool operator==(const ProposalMetrics&) const = default;
};

ProposalMetrics proposal_metrics(ProposalId p, const DeliberationState& state,
                                 const AppraisalConfig& cfg);

struct WriterSkill {
  ParticipantId participant;
  std::optional<double> skill;
  std::size_t basis = 0;

  bool operator==(const WriterSkill&) const = default;
};

/// Mean clarity of the participant's authored proposals that have at least
/// skill_min_appraisals appraisals.
WriterSkill writer_skill(ParticipantId r, const DeliberationState& state,
                         const MetricsConfig& cfg);

}  // namespace delib
