#pragma once

#include <utility>
#include <vector>

#include "delib/appraisal.hpp"
#include "delib/model.hpp"

namespace delib {

double jaccard(const ParticipantSet& a, const ParticipantSet& b);

/// Jaccard weight of the agree-sets; 0 when both are empty. Throws SelfEdge
/// when a == b and NotFound for unknown ids.
double jaccard_weight(ProposalId a, ProposalId b, const DeliberationState& state);

/// Complete weighted graph over a generation's proposals.
class AgreementGraph {
 public:
  AgreementGraph() = default;
  /// Weights start at 0; nodes are sorted and deduplicated.
  explicit AgreementGraph(std::vector<ProposalId> nodes);

  const std::vector<ProposalId>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_count() const { return weights_.size(); }

  double weight(std::size_t i, std::size_t j) const;
  double weight(ProposalId a, ProposalId b) const;
  void set_weight(std::size_t i, std::size_t j, double w);

  std::size_t index_of(ProposalId id) const;  // NotFound

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;

  std::vector<ProposalId> nodes_;
  std::vector<double> weights_;  // strict upper triangle, row-major
};

AgreementGraph build_graph(const DeliberationState& state);

struct Cluster {
  ProposalId label;                  // smallest member
  std::vector<ProposalId> members;   // ascending
  std::vector<ProposalId> ranked;    // best first; empty until ranked

  bool operator==(const Cluster&) const = default;
};

struct Clustering {
  std::uint32_t generation = 0;
  double threshold = 0.0;
  std::vector<Cluster> clusters;  // ascending by label

  bool operator==(const Clustering&) const = default;
};

/// Connected components after deleting every edge with weight < x.
Clustering threshold_clusters(const AgreementGraph& graph, double x);

/// Sorted by clarity desc (undefined clarity last), then appraisal count
/// desc, then id asc.
std::vector<ProposalId> rank_within_cluster(const std::vector<ProposalId>& cluster,
                                            const DeliberationState& state);

/// Threshold clustering of the current generation with every cluster ranked.
Clustering cluster_generation(const DeliberationState& state, double x);

struct DigestEntry {
  ProposalId label;
  std::size_t size = 0;
  std::vector<ProposalId> top;

  bool operator==(const DigestEntry&) const = default;
};

/// Top min(top_k, size) of every cluster; clusters by size desc then label.
std::vector<DigestEntry> digest(const Clustering& clustering, int top_k);
std::vector<DigestEntry> digest(const DeliberationState& state, const ClusteringConfig& cfg);

struct UncertainPair {
  ProposalId first;
  ProposalId second;
  std::size_t co_appraisers = 0;

  bool operator==(const UncertainPair&) const = default;
};

/// Pairs of the current generation with fewer than c_min shared appraisers,
/// fewest shared first, then by ids.
std::vector<UncertainPair> uncertain_pairs(const DeliberationState& state,
                                           const ClusteringConfig& cfg);

}  // namespace delib
