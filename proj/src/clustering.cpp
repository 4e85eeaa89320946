#include "delib/clustering.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "delib/error.hpp"
#include "delib/metrics.hpp"

namespace delib {

namespace {

std::size_t intersection_size(const ParticipantSet& a, const ParticipantSet& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

double jaccard(const ParticipantSet& a, const ParticipantSet& b) {
  const std::size_t inter = intersection_size(a, b);
  const std::size_t uni = a.size() + b.size() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double jaccard_weight(ProposalId a, ProposalId b, const DeliberationState& state) {
  if (a == b) fail(ErrorCode::SelfEdge, "no edge from a proposal to itself");
  return jaccard(agree_set(a, state), agree_set(b, state));
}

AgreementGraph::AgreementGraph(std::vector<ProposalId> nodes) : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  const std::size_t n = nodes_.size();
  weights_.assign(n < 2 ? 0 : n * (n - 1) / 2, 0.0);
}

std::size_t AgreementGraph::slot(std::size_t i, std::size_t j) const {
  if (i == j || i >= nodes_.size() || j >= nodes_.size())
    fail(ErrorCode::SelfEdge, "edge index out of range");
  if (i > j) std::swap(i, j);
  const std::size_t n = nodes_.size();
  // Row i of the strict upper triangle starts after i rows of decreasing length.
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

double AgreementGraph::weight(std::size_t i, std::size_t j) const { return weights_[slot(i, j)]; }

double AgreementGraph::weight(ProposalId a, ProposalId b) const {
  return weight(index_of(a), index_of(b));
}

void AgreementGraph::set_weight(std::size_t i, std::size_t j, double w) {
  weights_[slot(i, j)] = w;
}

std::size_t AgreementGraph::index_of(ProposalId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) fail(ErrorCode::NotFound, "proposal not in graph");
  return static_cast<std::size_t>(it - nodes_.begin());
}

AgreementGraph build_graph(const DeliberationState& state) {
  AgreementGraph graph(state.roster());
  const auto agree = agree_sets(state);
  const auto& nodes = graph.nodes();
  std::vector<const ParticipantSet*> sets;
  sets.reserve(nodes.size());
  for (ProposalId id : nodes) sets.push_back(&agree.at(id));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      graph.set_weight(i, j, jaccard(*sets[i], *sets[j]));
  return graph;
}

Clustering threshold_clusters(const AgreementGraph& graph, double x) {
  const std::size_t n = graph.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (graph.weight(i, j) >= x) {
        auto ri = find(i);
        auto rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }

  // Roots are always the smallest index of their component, and nodes are
  // sorted, so iterating in index order yields clusters ordered by label.
  Clustering out;
  out.threshold = x;
  std::vector<std::size_t> slot_of(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto r = find(v);
    if (slot_of[r] == n) {
      slot_of[r] = out.clusters.size();
      out.clusters.push_back({graph.nodes()[v], {}, {}});
    }
    out.clusters[slot_of[r]].members.push_back(graph.nodes()[v]);
  }
  return out;
}

std::vector<ProposalId> rank_within_cluster(const std::vector<ProposalId>& cluster,
                                            const DeliberationState& state) {
  struct Key {
    ProposalId id;
    std::optional<double> clarity;
    std::size_t count;
  };
  std::vector<Key> keys;
  keys.reserve(cluster.size());
  for (ProposalId id : cluster) {
    auto m = proposal_metrics(id, state, state.config.appraisal);
    keys.push_back({id, m.clarity, m.appraisal_count});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
    const double cx = x.clarity.value_or(-1.0);
    const double cy = y.clarity.value_or(-1.0);
    if (cx != cy) return cx > cy;
    if (x.count != y.count) return x.count > y.count;
    return x.id < y.id;
  });
  std::vector<ProposalId> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(k.id);
  return out;
}

Clustering cluster_generation(const DeliberationState& state, double x) {
  Clustering c = threshold_clusters(build_graph(state), x);
  c.generation = state.generation;
  for (auto& cl : c.clusters) cl.ranked = rank_within_cluster(cl.members, state);
  return c;
}

std::vector<DigestEntry> digest(const Clustering& clustering, int top_k) {
  std::vector<DigestEntry> out;
  for (const auto& cl : clustering.clusters) {
    const auto& order = cl.ranked.empty() ? cl.members : cl.ranked;
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(std::max(top_k, 1)), order.size());
    out.push_back({cl.label, cl.members.size(), {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take)}});
  }
  std::stable_sort(out.begin(), out.end(), [](const DigestEntry& a, const DigestEntry& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.label < b.label;
  });
  return out;
}

std::vector<DigestEntry> digest(const DeliberationState& state, const ClusteringConfig& cfg) {
  return digest(cluster_generation(state, cfg.threshold), cfg.top_k);
}

std::vector<UncertainPair> uncertain_pairs(const DeliberationState& state,
                                           const ClusteringConfig& cfg) {
  const auto& roster = state.roster();
  std::vector<ParticipantSet> seen;
  seen.reserve(roster.size());
  for (ProposalId id : roster) seen.push_back(appraisers(id, state));

  std::vector<UncertainPair> out;
  for (std::size_t i = 0; i < roster.size(); ++i)
    for (std::size_t j = i + 1; j < roster.size(); ++j) {
      const auto shared = intersection_size(seen[i], seen[j]);
      if (shared < static_cast<std::size_t>(cfg.c_min)) out.push_back({roster[i], roster[j], shared});
    }
  std::sort(out.begin(), out.end(), [](const UncertainPair& a, const UncertainPair& b) {
    return std::tie(a.co_appraisers, a.first, a.second) < std::tie(b.co_appraisers, b.first, b.second);
  });
  return out;
}

}  // namespace delib
