#include "seldiac/embeddings.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "seldiac/error.hpp"

namespace seldiac {

EmbeddingTable::EmbeddingTable(std::vector<std::string> vocab, std::size_t dim,
                               bool with_context)
    : dim_(dim), vocab_(std::move(vocab)) {
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!ids_.emplace(vocab_[i], i).second) {
      throw Error("duplicate vocabulary entry: " + vocab_[i]);
    }
  }
  words_.assign(vocab_.size() * dim_, 0.0f);
  if (with_context) ctx_.assign(vocab_.size() * dim_, 0.0f);
}

std::optional<std::size_t> EmbeddingTable::index(const std::string& w) const {
  auto it = ids_.find(w);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Noise distribution proportional to count^0.75, sampled by inverting the
// cumulative sum.
class NoiseSampler {
 public:
  explicit NoiseSampler(const std::vector<std::size_t>& counts) {
    cdf_.reserve(counts.size());
    double acc = 0;
    for (auto c : counts) {
      acc += std::pow(static_cast<double>(c), 0.75);
      cdf_.push_back(acc);
    }
    for (auto& v : cdf_) v /= acc;
  }

  std::size_t sample(std::mt19937_64& rng) const {
    const double u = uniform01(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::size_t>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

template <bool Shared>
float load(float& x) {
  if constexpr (Shared) {
    return std::atomic_ref<float>(x).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool Shared>
void store(float& x, float v) {
  if constexpr (Shared) {
    std::atomic_ref<float>(x).store(v, std::memory_order_relaxed);
  } else {
    x = v;
  }
}

struct Trainer {
  const SgnsOptions& opts;
  EmbeddingTable& table;
  const NoiseSampler& noise;
  const std::vector<std::vector<std::size_t>>& sentences;
  const std::vector<double>& keep_prob;
  std::size_t total_words;
  std::atomic<std::size_t> processed{0};

  template <bool Shared>
  void train_pair(std::size_t center, std::size_t target, float alpha,
                  std::mt19937_64& rng, std::vector<float>& grad) {
    const std::size_t dim = table.dim();
    float* in = table.word(center).data();
    std::fill(grad.begin(), grad.end(), 0.0f);
    for (std::size_t k = 0; k <= opts.negatives; ++k) {
      std::size_t out_id = target;
      float label = 1.0f;
      if (k > 0) {
        out_id = noise.sample(rng);
        if (out_id == target) continue;
        label = 0.0f;
      }
      float* out = table.context(out_id).data();
      double f = 0;
      for (std::size_t d = 0; d < dim; ++d) {
        f += static_cast<double>(load<Shared>(in[d])) * load<Shared>(out[d]);
      }
      const float g = static_cast<float>((label - sigmoid(f)) * alpha);
      for (std::size_t d = 0; d < dim; ++d) {
        grad[d] += g * load<Shared>(out[d]);
        store<Shared>(out[d], load<Shared>(out[d]) + g * load<Shared>(in[d]));
      }
    }
    for (std::size_t d = 0; d < dim; ++d) {
      store<Shared>(in[d], load<Shared>(in[d]) + grad[d]);
    }
  }

  template <bool Shared>
  void run_shard(std::size_t begin, std::size_t end, std::size_t epoch,
                 std::mt19937_64& rng) {
    std::vector<float> grad(table.dim());
    std::vector<std::size_t> kept;
    const double denom =
        static_cast<double>(opts.epochs) * static_cast<double>(total_words) + 1;
    for (std::size_t s = begin; s < end; ++s) {
      const auto& sent = sentences[s];
      kept.clear();
      for (auto id : sent) {
        if (keep_prob[id] >= 1.0 || uniform01(rng) < keep_prob[id]) {
          kept.push_back(id);
        }
      }
      const std::size_t done =
          processed.fetch_add(sent.size(), std::memory_order_relaxed);
      const double progress =
          (static_cast<double>(epoch) * total_words + done) / denom;
      const float alpha = static_cast<float>(
          opts.alpha * std::max(1.0 - progress, 1e-4));
      for (std::size_t pos = 0; pos < kept.size(); ++pos) {
        const std::size_t shrink = rng() % opts.window;
        const std::size_t span = opts.window - shrink;
        const std::size_t lo = pos >= span ? pos - span : 0;
        const std::size_t hi = std::min(kept.size() - 1, pos + span);
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          train_pair<Shared>(kept[pos], kept[c], alpha, rng, grad);
        }
      }
    }
  }
};

struct ProbePair {
  std::size_t center;
  std::size_t context;
  std::vector<std::size_t> negatives;
};

double probe_loss(const EmbeddingTable& t, const std::vector<ProbePair>& probe) {
  if (probe.empty()) return 0.0;
  auto dot = [&](std::size_t a, std::size_t b) {
    auto u = t.word(a);
    auto v = t.context(b);
    double s = 0;
    for (std::size_t d = 0; d < t.dim(); ++d) s += static_cast<double>(u[d]) * v[d];
    return s;
  };
  double loss = 0;
  for (const auto& p : probe) {
    loss -= log_sigmoid(dot(p.center, p.context));
    for (auto n : p.negatives) loss -= log_sigmoid(-dot(p.center, n));
  }
  return loss / static_cast<double>(probe.size());
}

}  // namespace

SgnsResult train_sgns(const Corpus& c, const SgnsOptions& opts) {
  if (opts.dim < 2) throw std::invalid_argument("embedding dim must be >= 2");
  if (opts.window == 0 || opts.epochs == 0 || opts.negatives == 0 ||
      opts.min_count == 0) {
    throw std::invalid_argument("window, epochs, negatives, min_count must be positive");
  }

  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : c.sentences) {
    for (const auto& tok : s) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [w, n] : counts) {
    if (n >= opts.min_count) kept.emplace_back(w, n);
  }
  if (kept.empty()) throw EmptyVocabulary();
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  std::vector<std::string> vocab;
  std::vector<std::size_t> freq;
  for (auto& [w, n] : kept) {
    vocab.push_back(w);
    freq.push_back(n);
  }
  SgnsResult res{EmbeddingTable(vocab, opts.dim, true), {}};
  EmbeddingTable& table = res.table;
  table.trained_on = c.scheme;

  std::vector<std::vector<std::size_t>> sentences;
  std::size_t total = 0;
  for (const auto& s : c.sentences) {
    std::vector<std::size_t> ids;
    for (const auto& tok : s) {
      if (auto id = table.index(tok)) ids.push_back(*id);
    }
    total += ids.size();
    if (ids.size() >= 2) sentences.push_back(std::move(ids));
  }

  std::vector<double> keep_prob(vocab.size(), 1.0);
  if (opts.subsample > 0) {
    const double thresh = opts.subsample * static_cast<double>(total);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      const double f = static_cast<double>(freq[i]);
      keep_prob[i] = (std::sqrt(f / thresh) + 1.0) * thresh / f;
    }
  }

  std::mt19937_64 rng(opts.seed);
  for (auto& x : table.word_data()) {
    x = static_cast<float>((uniform01(rng) - 0.5) / static_cast<double>(opts.dim));
  }

  NoiseSampler noise(freq);

  std::vector<ProbePair> probe;
  {
    std::mt19937_64 prng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 0; i < opts.probe_pairs && !sentences.empty(); ++i) {
      const auto& s = sentences[prng() % sentences.size()];
      const std::size_t pos = prng() % s.size();
      std::size_t other = prng() % (s.size() - 1);
      if (other >= pos) ++other;
      ProbePair p{s[pos], s[other], {}};
      for (std::size_t k = 0; k < opts.negatives; ++k) {
        p.negatives.push_back(noise.sample(prng));
      }
      probe.push_back(std::move(p));
    }
  }

  Trainer trainer{opts, table, noise, sentences, keep_prob, total, {}};
  const std::size_t threads = std::max<std::size_t>(1, opts.threads);
  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    trainer.processed.store(0);
    if (threads == 1) {
      trainer.run_shard<false>(0, sentences.size(), epoch, rng);
    } else {
      std::vector<std::thread> pool;
      const std::size_t per = (sentences.size() + threads - 1) / threads;
      for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t b = std::min(sentences.size(), t * per);
        const std::size_t e = std::min(sentences.size(), b + per);
        const std::uint64_t tseed = opts.seed + 7919 * (epoch * threads + t + 1);
        pool.emplace_back([&trainer, b, e, epoch, tseed] {
          std::mt19937_64 trng(tseed);
          trainer.run_shard<true>(b, e, epoch, trng);
        });
      }
      for (auto& th : pool) th.join();
    }
    res.epoch_loss.push_back(probe_loss(table, probe));
  }
  return res;
}

double cosine(std::span<const float> a, std::span<const float> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / std::sqrt(na * nb);
}

NeighborIndex::NeighborIndex(const EmbeddingTable& t, VectorSpace space)
    : n_(t.size()) {
  if ((space == VectorSpace::kContext || space == VectorSpace::kCombined) &&
      !t.has_context()) {
    space = VectorSpace::kWord;
  }
  const std::size_t d = t.dim();
  const bool combined = space == VectorSpace::kCombined;
  dim_ = combined ? 2 * d : d;
  scale_ = combined ? 0.5 : 1.0;
  unit_.assign(n_ * dim_, 0.0);
  auto put = [&](std::span<const float> v, double* dst) {
    double norm = 0;
    for (float x : v) norm += static_cast<double>(x) * x;
    if (norm == 0) return;
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < v.size(); ++k) dst[k] = v[k] / norm;
  };
  for (std::size_t i = 0; i < n_; ++i) {
    double* row = &unit_[i * dim_];
    if (space == VectorSpace::kWord) {
      put(t.word(i), row);
    } else if (space == VectorSpace::kContext) {
      put(t.context(i), row);
    } else {
      put(t.word(i), row);
      put(t.context(i), row + d);
    }
  }
}

double NeighborIndex::cosine(std::size_t a, std::size_t b) const {
  const double* u = &unit_[a * dim_];
  const double* v = &unit_[b * dim_];
  double s = 0;
  for (std::size_t k = 0; k < dim_; ++k) s += u[k] * v[k];
  return s * scale_;
}

std::vector<std::pair<std::size_t, double>> NeighborIndex::top(
    std::size_t i, std::size_t n) const {
  std::vector<std::pair<std::size_t, double>> all;
  all.reserve(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    if (j != i) all.emplace_back(j, cosine(i, j));
  }
  n = std::min(n, all.size());
  auto better = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n),
                    all.end(), better);
  all.resize(n);
  return all;
}

std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingTable& t, const std::string& w, std::size_t n,
    VectorSpace space) {
  auto id = t.index(w);
  if (!id) throw UnknownWord(w);
  if (n == 0) return {};
  NeighborIndex index(t, space);
  std::vector<std::pair<std::string, double>> out;
  for (auto& [j, cos] : index.top(*id, n)) out.emplace_back(t.vocab()[j], cos);
  return out;
}

namespace {

void write_matrix(const std::string& path, const EmbeddingTable& t,
                  bool context) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << t.size() << ' ' << t.dim() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << t.vocab()[i];
    auto v = context ? t.context(i) : t.word(i);
    for (float x : v) {
      std::snprintf(buf, sizeof buf, " %.9g", static_cast<double>(x));
      out << buf;
    }
    out << '\n';
  }
}

std::pair<std::vector<std::string>, std::vector<float>> read_matrix(
    const std::string& path, std::size_t& dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
  std::size_t n = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> dim) || dim == 0) {
      throw ParseError(path, 1, "header must be \"<vocab_size> <dim>\"");
    }
  }
  std::vector<std::string> vocab;
  std::vector<float> data;
  data.reserve(n * dim);
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_tokens(line);
    if (toks.empty()) continue;
    if (toks.size() != dim + 1) {
      throw ParseError(path, lineno, "expected word and " +
                                         std::to_string(dim) + " components");
    }
    vocab.push_back(toks[0]);
    for (std::size_t k = 1; k < toks.size(); ++k) {
      char* end = nullptr;
      const float x = std::strtof(toks[k].c_str(), &end);
      if (end == toks[k].c_str() || *end != '\0' || !std::isfinite(x)) {
        throw ParseError(path, lineno, "bad component: " + toks[k]);
      }
      data.push_back(x);
    }
  }
  if (vocab.size() != n) {
    throw ParseError(path, lineno, "header announces " + std::to_string(n) +
                                       " rows, found " +
                                       std::to_string(vocab.size()));
  }
  return {std::move(vocab), std::move(data)};
}

}  // namespace

void save_embeddings(const std::string& path, const EmbeddingTable& t) {
  write_matrix(path, t, false);
  if (t.has_context()) write_matrix(path + ".ctx", t, true);
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::size_t dim = 0;
  auto [vocab, words] = read_matrix(path, dim);
  const std::string ctx_path = path + ".ctx";
  const bool with_ctx = std::filesystem::exists(ctx_path);
  EmbeddingTable t(vocab, dim, with_ctx);
  t.word_data() = std::move(words);
  if (with_ctx) {
    std::size_t cdim = 0;
    auto [cvocab, ctx] = read_matrix(ctx_path, cdim);
    if (cdim != dim || cvocab != vocab) {
      throw ParseError(ctx_path, 1, "context file does not match " + path);
    }
    t.context_data() = std::move(ctx);
  }
  return t;
}

}  // namespace seldiac
