#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "delib/engine.hpp"
#include "delib/model.hpp"

namespace delib::sim {

using json = nlohmann::json;

enum class Scenario { ClusterRecovery, ObscureGem, FrontShrink };
enum class AgreementModel { Latent, Planted };

std::string_view to_string(Scenario s);

struct Bloc {
  int size = 0;
  std::vector<double> center;
  double spread = 0.0;
};

/// Parameters of the planted obscure proposal.
struct GemSpec {
  double clarity = 0.1;             // perceived by everyone outside the plant
  double understood_clarity = 0.9;  // perceived by the planted understanders
  double understander_share = 0.25; // of the non-authors
  double support = 0.8;             // share of understanders who agree
};

struct PopulationSpec {
  Scenario scenario = Scenario::ClusterRecovery;
  std::uint64_t seed = 1;

  int participants = 0;
  int dimensions = 1;
  std::vector<Bloc> blocs;
  double skill_min = 0.0;
  double skill_max = 1.0;
  double clarity_noise = 0.05;   // sigma of perceived clarity
  double clarity_spread = 0.05;  // sigma of intrinsic clarity around author skill
  double position_noise = 0.1;   // sigma of a proposal's position around its author
  double p_accept = 1.0;

  AgreementModel agreement = AgreementModel::Latent;
  double p_within = 0.9;
  double p_cross = 0.1;

  int proposals = 0;
  int generations = 1;
  int new_per_generation = 0;
  GemSpec gem;

  EngineConfig engine;
};

/// Throws Error(Invalid) for unknown keys, wrong types and violated
/// invariants (bloc sizes must sum to participants, dimensions >= 1, ...).
PopulationSpec parse_spec(const json& j);
PopulationSpec load_spec(const std::filesystem::path& path);
void validate_spec(const PopulationSpec& spec);

/// Seeded generator with distributions defined here rather than by the
/// standard library, whose distributions differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform01();  // [0, 1)
  double normal();     // standard normal, Box-Muller
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform01() < p; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

struct Agent {
  ParticipantId id;
  std::size_t bloc = 0;
  std::vector<double> opinion;
  double skill = 0.0;
};

struct AgentProposal {
  std::vector<double> position;
  double clarity = 0.0;
  std::size_t bloc = 0;
};

struct AppraisalModel {
  AgreementModel kind = AgreementModel::Latent;
  double clarity_noise = 0.0;
  double p_within = 0.9;
  double p_cross = 0.1;
};

/// Cosine similarity in [-1, 1]; 0 when either vector is zero.
double cosine(const std::vector<double>& a, const std::vector<double>& b);

/// Perceived understanding is the grid level nearest to the clamped, noisy
/// intrinsic clarity. At or below the incomprehensible level there is no
/// agreement value. Otherwise the latent model scales opinion similarity to
/// the admissible span, and the planted model agrees (+span) or disagrees
/// (-span) with the bloc-dependent probability.
std::pair<double, std::optional<int>> agent_appraise(const Agent& agent, const AgentProposal& proposal,
                                                     const AppraisalConfig& cfg, const AppraisalModel& model,
                                                     Rng& rng);

/// Share of proposals in the cluster matched to their bloc under the
/// one-to-one cluster/bloc assignment that maximizes total overlap.
double cluster_purity(const std::vector<std::vector<ProposalId>>& clusters,
                      const std::map<ProposalId, std::size_t>& bloc_of);

struct RunResult {
  Deliberation deliberation;
  json report;    // scenario metrics plus the final analysis
  json analysis;  // identical to `delib analyze` on the log
};

/// Drives one deliberation through the engine's public commands.
RunResult run_experiment(const PopulationSpec& spec);

/// Writes <out>/<deliberation>/events.log, the final snapshot, report.json
/// and analysis.json.
void write_outputs(const RunResult& result, const std::filesystem::path& out);

}  // namespace delib::sim
