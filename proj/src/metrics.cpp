#include "delib/metrics.hpp"

#include "delib/appraisal.hpp"

namespace delib {

namespace {
constexpr double kEps = 1e-9;
}

ProposalMetrics proposal_metrics(ProposalId p, const DeliberationState& state,
                                 const AppraisalConfig& cfg) {
  state.proposal(p);
  ProposalMetrics m;
  m.proposal = p;

  double u_sum = 0.0;
  std::size_t lost = 0;
  std::size_t understood = 0;
  std::size_t supportive = 0;
  auto it = state.appraisals.lower_bound({p, ParticipantId{0}});
  for (; it != state.appraisals.end() && it->first.first == p; ++it) {
    const auto& ap = it->second;
    ++m.appraisal_count;
    u_sum += ap.u;
    if (ap.u <= cfg.u_incomprehensible + kEps) ++lost;
    if (ap.u + kEps >= cfg.u_understood) {
      ++understood;
      if (ap.a && *ap.a > 0) ++supportive;
    }
  }
  if (m.appraisal_count > 0) {
    const auto n = static_cast<double>(m.appraisal_count);
    m.clarity = u_sum / n;
    m.incomprehension_rate = static_cast<double>(lost) / n;
  }
  if (understood > 0) m.support = static_cast<double>(supportive) / static_cast<double>(understood);
  return m;
}

WriterSkill writer_skill(ParticipantId r, const DeliberationState& state,
                         const MetricsConfig& cfg) {
  const auto& who = state.participant(r);
  WriterSkill out;
  out.participant = r;
  double total = 0.0;
  for (ProposalId p : who.authored) {
    auto m = proposal_metrics(p, state, state.config.appraisal);
    if (m.appraisal_count < static_cast<std::size_t>(cfg.skill_min_appraisals) || !m.clarity) continue;
    total += *m.clarity;
    ++out.basis;
  }
  if (out.basis > 0) out.skill = total / static_cast<double>(out.basis);
  return out;
}

}  // namespace delib
