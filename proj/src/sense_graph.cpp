#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "seldiac/clustering.hpp"
#include "seldiac/error.hpp"

namespace seldiac {

EgoGraphBuilder::EgoGraphBuilder(const EmbeddingTable& t, VectorSpace space)
    : table_(t), index_(t, space) {}

const std::vector<std::pair<std::size_t, double>>& EgoGraphBuilder::neighbors(
    std::size_t i, std::size_t n) {
  auto it = cache_.find(i);
  const std::size_t cap = index_.size() > 0 ? index_.size() - 1 : 0;
  if (it == cache_.end() || (it->second.size() < n && it->second.size() < cap)) {
    it = cache_.insert_or_assign(i, index_.top(i, n)).first;
  }
  return it->second;
}

SimilarityGraph EgoGraphBuilder::build(const std::string& w,
                                       std::size_t graph_size,
                                       std::size_t granularity) {
  auto id = table_.index(w);
  if (!id) throw UnknownWord(w);
  SimilarityGraph g;
  std::vector<std::size_t> node_ids;
  {
    const auto& top = neighbors(*id, graph_size);
    for (std::size_t r = 0; r < std::min(graph_size, top.size()); ++r) {
      node_ids.push_back(top[r].first);
    }
  }
  std::map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    local.emplace(node_ids[i], i);
    g.nodes.push_back(table_.vocab()[node_ids[i]]);
  }
  std::vector<std::set<std::size_t>> links(node_ids.size());
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    const auto& nb = neighbors(node_ids[i], granularity);
    for (std::size_t r = 0; r < std::min(granularity, nb.size()); ++r) {
      auto it = local.find(nb[r].first);
      if (it == local.end() || it->second == i || nb[r].second <= 0) continue;
      links[i].insert(it->second);
      links[it->second].insert(i);
    }
  }
  g.adj.resize(node_ids.size());
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    for (std::size_t j : links[i]) {
      g.adj[i].emplace_back(j, index_.cosine(node_ids[i], node_ids[j]));
    }
  }
  return g;
}

SimilarityGraph build_ego_graph(const EmbeddingTable& t, const std::string& w,
                                std::size_t graph_size, std::size_t granularity,
                                VectorSpace space) {
  EgoGraphBuilder b(t, space);
  return b.build(w, graph_size, granularity);
}

namespace {

using Adjacency = std::vector<std::vector<std::pair<std::size_t, double>>>;

// Class with the largest incident weight; smallest id on ties. Returns the
// node's current class when it has no neighbors.
std::size_t strongest_class(const Adjacency& adj, const std::vector<std::size_t>& labels,
                            std::size_t node) {
  if (adj[node].empty()) return labels[node];
  std::map<std::size_t, double> weight;
  for (const auto& [nb, w] : adj[node]) weight[labels[nb]] += w;
  std::size_t best = labels[node];
  double bw = -1;
  for (const auto& [cls, w] : weight) {
    if (w > bw) {
      bw = w;
      best = cls;
    }
  }
  return best;
}

}  // namespace

ClusterAssignment chinese_whispers(const SimilarityGraph& g,
                                   std::size_t iterations, std::uint64_t seed) {
  const std::size_t n = g.nodes.size();
  // Work in node-name order so that the result does not depend on how the
  // caller numbered the nodes.
  std::vector<std::size_t> by_name(n);
  for (std::size_t i = 0; i < n; ++i) by_name[i] = i;
  std::sort(by_name.begin(), by_name.end(),
            [&](std::size_t a, std::size_t b) { return g.nodes[a] < g.nodes[b]; });
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[by_name[r]] = r;
  Adjacency adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, w] : g.adj[by_name[i]]) adj[i].emplace_back(rank[j], w);
    std::sort(adj[i].begin(), adj[i].end());
  }

  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    for (std::size_t node : order) labels[node] = strongest_class(adj, labels, node);
  }

  ClusterAssignment ca;
  ca.algo = ClusterAlgo::kChineseWhispers;
  {
    auto probe = labels;
    for (std::size_t node = 0; node < n; ++node) {
      probe[node] = strongest_class(adj, probe, node);
    }
    ca.converged = probe == labels;
  }
  relabel_contiguous(labels);
  for (std::size_t i = 0; i < n; ++i) ca.labels.emplace(g.nodes[by_name[i]], labels[i]);
  ca.k = n == 0 ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  return ca;
}

}  // namespace seldiac
