#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seldiac/corpus.hpp"

namespace seldiac {

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> vocab, std::size_t dim,
                 bool with_context = true);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }
  std::optional<std::size_t> index(const std::string& w) const;
  bool has_context() const { return !ctx_.empty(); }

  std::span<float> word(std::size_t i) { return {&words_[i * dim_], dim_}; }
  std::span<const float> word(std::size_t i) const {
    return {&words_[i * dim_], dim_};
  }
  std::span<float> context(std::size_t i) { return {&ctx_[i * dim_], dim_}; }
  std::span<const float> context(std::size_t i) const {
    return {&ctx_[i * dim_], dim_};
  }

  std::vector<float>& word_data() { return words_; }
  std::vector<float>& context_data() { return ctx_; }
  const std::vector<float>& word_data() const { return words_; }
  const std::vector<float>& context_data() const { return ctx_; }

  SchemeTag trained_on;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<float> words_;
  std::vector<float> ctx_;
};

struct SgnsOptions {
  std::size_t dim = 300;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  std::size_t min_count = 2;
  double subsample = 1e-4;  // 0 disables
  double alpha = 0.025;
  std::uint64_t seed = 1;
  // More than one thread runs lock-free asynchronous SGD, which is fast but
  // not reproducible run to run.
  std::size_t threads = 1;
  std::size_t probe_pairs = 2000;
};

struct SgnsResult {
  EmbeddingTable table;
  // Negative-sampling loss on a fixed probe set, measured after each epoch.
  std::vector<double> epoch_loss;
};

SgnsResult train_sgns(const Corpus& c, const SgnsOptions& opts = {});

enum class VectorSpace { kWord, kContext, kCombined };

// Cosine search over one vector space. kCombined averages the word-space
// and context-space cosines.
class NeighborIndex {
 public:
  NeighborIndex(const EmbeddingTable& t, VectorSpace space);

  double cosine(std::size_t a, std::size_t b) const;
  // Top-n by cosine, excluding `i` itself; ties go to the lower index.
  std::vector<std::pair<std::size_t, double>> top(std::size_t i,
                                                  std::size_t n) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::size_t dim_ = 0;  // row width of unit_
  std::vector<double> unit_;
  double scale_ = 1.0;
};

std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingTable& t, const std::string& w, std::size_t n,
    VectorSpace space = VectorSpace::kWord);

double cosine(std::span<const float> a, std::span<const float> b);

// "<vocab_size> <dim>" header, then "<word> <components...>". Context
// vectors go to `path + ".ctx"` in the same format.
void save_embeddings(const std::string& path, const EmbeddingTable& t);
EmbeddingTable load_embeddings(const std::string& path);

}  // namespace seldiac
