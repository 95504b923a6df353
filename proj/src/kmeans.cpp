#include <algorithm>
#include <limits>
#include <random>

#include "seldiac/clustering.hpp"
#include "seldiac/error.hpp"

namespace seldiac {

namespace {

using Matrix = std::vector<std::vector<double>>;

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t distinct_rows(Matrix rows) {
  std::sort(rows.begin(), rows.end());
  return static_cast<std::size_t>(std::unique(rows.begin(), rows.end()) -
                                  rows.begin());
}

Matrix plus_plus_seeds(const Matrix& pts, std::size_t k, std::mt19937_64& rng) {
  Matrix centers;
  centers.push_back(pts[rng() % pts.size()]);
  std::vector<double> d2(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = sqdist(pts[i], centers[0]);
  while (centers.size() < k) {
    double total = 0;
    for (double d : d2) total += d;
    std::size_t pick = 0;
    if (total > 0) {
      double u = uniform01(rng) * total;
      for (pick = 0; pick + 1 < pts.size(); ++pick) {
        if (u < d2[pick]) break;
        u -= d2[pick];
      }
      // Rounding can land on an existing center; take the farthest point.
      if (d2[pick] == 0) {
        pick = static_cast<std::size_t>(
            std::max_element(d2.begin(), d2.end()) - d2.begin());
      }
    } else {
      pick = rng() % pts.size();
    }
    centers.push_back(pts[pick]);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d2[i] = std::min(d2[i], sqdist(pts[i], centers.back()));
    }
  }
  return centers;
}

// Nearest center, lowest index on ties.
std::size_t nearest(const std::vector<double>& p, const Matrix& centers,
                    double* dist = nullptr) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = sqdist(p, centers[c]);
    if (d < bd) {
      bd = d;
      best = c;
    }
  }
  if (dist) *dist = bd;
  return best;
}

// Mean of each labeled group; empty groups keep their previous center.
Matrix cluster_means(const Matrix& pts, const std::vector<std::size_t>& labels,
                     const Matrix& previous) {
  Matrix sums(previous.size(), std::vector<double>(pts[0].size(), 0.0));
  std::vector<std::size_t> sizes(previous.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t d = 0; d < pts[i].size(); ++d) sums[labels[i]][d] += pts[i][d];
    ++sizes[labels[i]];
  }
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (sizes[c] == 0) {
      sums[c] = previous[c];
      continue;
    }
    for (auto& x : sums[c]) x /= static_cast<double>(sizes[c]);
  }
  return sums;
}

struct Run {
  std::vector<std::size_t> labels;
  Matrix centers;
  double inertia = 0;
  std::vector<double> history;
};

Run lloyd(const Matrix& pts, std::size_t k, const KMeansOptions& opts,
          std::mt19937_64& rng) {
  const std::size_t dim = pts[0].size();
  Run run;
  run.centers = plus_plus_seeds(pts, k, rng);
  run.labels.assign(pts.size(), 0);
  std::vector<double> dist(pts.size());
  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    double inertia = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      run.labels[i] = nearest(pts[i], run.centers, &dist[i]);
      inertia += dist[i];
    }
    run.history.push_back(inertia);

    Matrix next(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      auto& c = next[run.labels[i]];
      for (std::size_t d = 0; d < dim; ++d) c[d] += pts[i][d];
      ++sizes[run.labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) {
        // Reseed at the point farthest from its own centroid.
        const std::size_t far = static_cast<std::size_t>(
            std::max_element(dist.begin(), dist.end()) - dist.begin());
        next[c] = pts[far];
        dist[far] = 0;
        continue;
      }
      for (auto& x : next[c]) x /= static_cast<double>(sizes[c]);
    }
    double shift = 0;
    for (std::size_t c = 0; c < k; ++c) shift += sqdist(next[c], run.centers[c]);
    run.centers = std::move(next);
    if (shift <= opts.tol) break;
  }
  // Settle the partition so that labels and centroid means agree, then
  // score it about those means, visiting clusters by first member.
  for (std::size_t i = 0; i < pts.size(); ++i) run.labels[i] = nearest(pts[i], run.centers);
  for (std::size_t round = 0; round < opts.max_iter; ++round) {
    run.centers = cluster_means(pts, run.labels, run.centers);
    bool moved = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::size_t l = nearest(pts[i], run.centers);
      moved = moved || l != run.labels[i];
      run.labels[i] = l;
    }
    if (!moved) break;
  }
  std::vector<std::size_t> order;
  for (std::size_t l : run.labels) {
    if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
  }
  run.inertia = 0;
  for (std::size_t c : order) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (run.labels[i] == c) run.inertia += sqdist(pts[i], run.centers[c]);
    }
  }
  return run;
}

}  // namespace

ClusterAssignment kmeans(const VectorSet& vectors, const KMeansOptions& opts) {
  if (opts.k == 0 || opts.n_init == 0 || opts.max_iter == 0) {
    throw std::invalid_argument("k, n_init and max_iter must be positive");
  }
  Matrix pts;
  std::vector<std::string> words;
  for (const auto& [w, v] : vectors) {
    if (!pts.empty() && v.size() != pts[0].size()) {
      throw Error("vectors differ in dimension");
    }
    words.push_back(w);
    pts.push_back(v);
  }
  const std::size_t distinct = pts.empty() ? 0 : distinct_rows(pts);
  if (distinct < opts.k) throw TooFewPoints(distinct, opts.k);

  std::mt19937_64 rng(opts.seed);
  Run best;
  bool have = false;
  for (std::size_t r = 0; r < opts.n_init; ++r) {
    Run run = lloyd(pts, opts.k, opts, rng);
    if (!have || run.inertia < best.inertia) {
      best = std::move(run);
      have = true;
    }
  }

  ClusterAssignment ca;
  ca.algo = ClusterAlgo::kKMeans;
  ca.objective = best.inertia;
  ca.history = best.history;
  auto remap = relabel_contiguous(best.labels);
  ca.k = remap.size();
  ca.centers.resize(ca.k);
  for (const auto& [old_id, new_id] : remap) {
    ca.centers[new_id] = best.centers[old_id];
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    ca.labels.emplace(words[i], best.labels[i]);
  }
  return ca;
}

}  // namespace seldiac
