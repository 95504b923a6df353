#include <cmath>
#include <limits>
#include <numbers>

#include "seldiac/clustering.hpp"
#include "seldiac/error.hpp"

namespace seldiac {

namespace {

double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

std::vector<double> GmmModel::log_joint(std::span<const double> x) const {
  const double dim = static_cast<double>(x.size());
  std::vector<double> out(weights.size());
  for (std::size_t c = 0; c < weights.size(); ++c) {
    if (weights[c] <= 0) {
      out[c] = -std::numeric_limits<double>::infinity();
      continue;
    }
    double d2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - means[c][i];
      d2 += d * d;
    }
    out[c] = std::log(weights[c]) -
             0.5 * dim * std::log(2.0 * std::numbers::pi * variances[c]) -
             0.5 * d2 / variances[c];
  }
  return out;
}

std::vector<double> GmmModel::responsibilities(std::span<const double> x) const {
  auto lj = log_joint(x);
  const double norm = log_sum_exp(lj);
  for (auto& v : lj) v = std::exp(v - norm);
  return lj;
}

GmmResult fit_gmm(const VectorSet& vectors, const GmmOptions& opts) {
  if (opts.k == 0 || opts.max_iter == 0) {
    throw std::invalid_argument("k and max_iter must be positive");
  }
  KMeansOptions km;
  km.k = opts.k;
  km.seed = opts.seed;
  ClusterAssignment init = kmeans(vectors, km);

  std::vector<std::string> words;
  std::vector<std::vector<double>> pts;
  std::vector<std::size_t> init_labels;
  for (const auto& [w, v] : vectors) {
    words.push_back(w);
    pts.push_back(v);
    init_labels.push_back(init.labels.at(w));
  }
  const std::size_t n = pts.size();
  const std::size_t dim = pts[0].size();
  const std::size_t k = init.k;
  const double eps = 10 * std::numeric_limits<double>::epsilon();

  GmmResult res;
  GmmModel& m = res.model;
  ClusterAssignment& ca = res.assignment;

  // Responsibilities, n x k, row-major.
  std::vector<double> resp(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) resp[i * k + init_labels[i]] = 1.0;

  auto m_step = [&] {
    m.weights.assign(k, 0.0);
    m.means.assign(k, std::vector<double>(dim, 0.0));
    m.variances.assign(k, 0.0);
    std::vector<double> nk(k, eps);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < k; ++c) {
        const double r = resp[i * k + c];
        nk[c] += r;
        for (std::size_t d = 0; d < dim; ++d) m.means[c][d] += r * pts[i][d];
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      for (auto& x : m.means[c]) x /= nk[c];
      m.weights[c] = nk[c] / (static_cast<double>(n) + k * eps);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < k; ++c) {
        double d2 = 0;
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff = pts[i][d] - m.means[c][d];
          d2 += diff * diff;
        }
        m.variances[c] += resp[i * k + c] * d2;
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      m.variances[c] /= nk[c] * static_cast<double>(dim);
      if (m.variances[c] < kVarianceFloor) {
        m.variances[c] = kVarianceFloor;
        ++ca.degenerate_events;
      }
    }
  };

  auto e_step = [&] {
    double ll = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto lj = m.log_joint(pts[i]);
      const double norm = log_sum_exp(lj);
      ll += norm;
      for (std::size_t c = 0; c < k; ++c) resp[i * k + c] = std::exp(lj[c] - norm);
    }
    return ll;
  };

  m_step();
  ca.converged = false;
  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    const double ll = e_step();
    ca.history.push_back(ll);
    if (iter > 0 && ll - ca.history[iter - 1] < opts.tol) {
      ca.converged = true;
      break;
    }
    m_step();
  }
  if (!ca.converged) ca.history.push_back(e_step());

  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < k; ++c) {
      if (resp[i * k + c] > resp[i * k + best]) best = c;
    }
    labels[i] = best;
  }
  auto remap = relabel_contiguous(labels);
  ca.algo = ClusterAlgo::kGmm;
  ca.k = remap.size();
  ca.objective = ca.history.back();
  ca.centers.resize(ca.k);
  for (const auto& [old_id, new_id] : remap) ca.centers[new_id] = m.means[old_id];
  for (std::size_t i = 0; i < n; ++i) ca.labels.emplace(words[i], labels[i]);
  return res;
}

ClusterAssignment gmm_em(const VectorSet& vectors, const GmmOptions& opts) {
  return fit_gmm(vectors, opts).assignment;
}

}  // namespace seldiac
