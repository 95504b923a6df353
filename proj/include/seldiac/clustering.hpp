#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "seldiac/corpus.hpp"
#include "seldiac/embeddings.hpp"

namespace seldiac {

enum class ClusterAlgo { kKMeans, kGmm, kBrown, kChineseWhispers };

std::string algo_code(ClusterAlgo a);  // KM, EM, BR, CW
ClusterAlgo parse_algo_code(const std::string& s);

struct ClusterAssignment {
  ClusterAlgo algo = ClusterAlgo::kKMeans;
  std::size_t k = 0;
  std::map<std::string, std::size_t> labels;
  // Inertia (KM), log-likelihood (EM), average mutual information of the
  // class bigram model (BR); zero for CW.
  double objective = 0.0;

  // Per-iteration objective where the algorithm is iterative.
  std::vector<double> history;
  // CW: false when one more deterministic pass would still move a label.
  bool converged = true;
  // EM: number of times a component variance hit the floor.
  std::size_t degenerate_events = 0;
  // KM centroids or EM means, indexed by cluster id.
  std::vector<std::vector<double>> centers;
};

// Renumbers labels in place so that ids are contiguous from 0 in order of
// first appearance. Returns old id -> new id.
std::map<std::size_t, std::size_t> relabel_contiguous(
    std::vector<std::size_t>& labels);

using VectorSet = std::map<std::string, std::vector<double>>;

VectorSet vectors_from(const EmbeddingTable& t, VectorSpace space = VectorSpace::kWord);

struct KMeansOptions {
  std::size_t k = 500;
  std::size_t n_init = 1;
  std::uint64_t seed = 1;
  std::size_t max_iter = 300;
  double tol = 1e-4;
};

// Lloyd iterations from k-means++ seeds, best of n_init restarts.
ClusterAssignment kmeans(const VectorSet& vectors, const KMeansOptions& opts);

struct GmmOptions {
  std::size_t k = 500;
  std::uint64_t seed = 1;
  std::size_t max_iter = 1000;
  double tol = 1e-3;
};

inline constexpr double kVarianceFloor = 1e-6;

struct GmmModel {
  std::vector<double> weights;
  std::vector<std::vector<double>> means;
  std::vector<double> variances;  // one per component (spherical)

  // Per-component log(weight * density) of x.
  std::vector<double> log_joint(std::span<const double> x) const;
  std::vector<double> responsibilities(std::span<const double> x) const;
};

struct GmmResult {
  ClusterAssignment assignment;
  GmmModel model;
};

GmmResult fit_gmm(const VectorSet& vectors, const GmmOptions& opts);
ClusterAssignment gmm_em(const VectorSet& vectors, const GmmOptions& opts);

struct BrownOptions {
  std::size_t k = 500;
  std::size_t min_count = 1;
};

// State handed to the observer before every merge. `classes` lists the
// active classes; the pair (a, b) indexes into it.
struct BrownMergeStep {
  const std::vector<std::vector<std::string>>& classes;
  std::size_t a;
  std::size_t b;
  double ami_before;
  double ami_after;
};

using BrownObserver = std::function<void(const BrownMergeStep&)>;

// Class-based bigram clustering. Bigrams are adjacent token pairs inside a
// sentence with both tokens in the vocabulary. Class marginals are the row
// and column sums of the full word-bigram matrix, so they do not depend on
// which words have been inserted so far.
ClusterAssignment brown(const Corpus& c, const BrownOptions& opts,
                        const BrownObserver& observer = {});

struct SimilarityGraph {
  std::vector<std::string> nodes;
  // Sorted by neighbor index; symmetric; no self-loops; weights > 0.
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;

  std::size_t edge_count() const;
};

// Caches nearest-neighbor lists so that ego graphs for many words share
// one similarity pass.
class EgoGraphBuilder {
 public:
  EgoGraphBuilder(const EmbeddingTable& t, VectorSpace space);

  // Nodes: the top-N neighbors of w (w excluded). Edge u-v when v is among
  // the top-n vocabulary neighbors of u (or u among those of v) and the
  // cosine is positive; weight is the cosine.
  SimilarityGraph build(const std::string& w, std::size_t graph_size,
                        std::size_t granularity);

 private:
  const std::vector<std::pair<std::size_t, double>>& neighbors(
      std::size_t i, std::size_t n);

  const EmbeddingTable& table_;
  NeighborIndex index_;
  std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> cache_;
};

SimilarityGraph build_ego_graph(const EmbeddingTable& t, const std::string& w,
                                std::size_t graph_size, std::size_t granularity,
                                VectorSpace space = VectorSpace::kCombined);

ClusterAssignment chinese_whispers(const SimilarityGraph& g,
                                   std::size_t iterations, std::uint64_t seed);

// "#algo=<KM|EM|BR|CW> k=<k> objective=<float>" then "<word>\t<id>" lines.
void write_clusters(const std::string& path, const ClusterAssignment& ca);
void write_clusters(std::ostream& out, const ClusterAssignment& ca);
ClusterAssignment read_clusters(const std::string& path);

}  // namespace seldiac
