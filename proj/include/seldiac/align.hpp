#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seldiac/corpus.hpp"

namespace seldiac {

inline constexpr double kProbFloor = 1e-9;
inline constexpr double kMaxTension = 14.0;

struct AlignOptions {
  std::size_t iterations = 5;
  double lambda0 = 4.0;
  double p_null = 0.08;
  bool optimize_tension = true;
  std::size_t threads = 1;
};

// Translation model t(target | source) with a diagonal position prior.
struct AlignmentModel {
  // source word -> (target word -> probability); each row sums to one.
  std::map<std::string, std::map<std::string, double>> ttable;
  // t(target | NULL).
  std::map<std::string, double> null_row;
  double lambda = 4.0;
  double p_null = 0.08;
  // Corpus log-likelihood measured in each E-step.
  std::vector<double> log_likelihood;

  double prob(const std::string& src, const std::string& tgt) const;
  double null_prob(const std::string& tgt) const;
};

// Prior over source positions 0..m-1 for target position j (0-based) of a
// length-n target, followed by the null probability at index m.
std::vector<double> alignment_prior(std::size_t j, std::size_t n, std::size_t m,
                                    double lambda, double p_null);

AlignmentModel train_ibm2(const ParallelCorpus& p, const AlignOptions& opts = {});

using Link = std::pair<std::size_t, std::size_t>;  // (source i, target j)

std::vector<Link> viterbi_align(const AlignmentModel& m, const Sentence& src,
                                const Sentence& tgt);

struct TranslationTable {
  // Descending probability; ties by target string.
  std::map<std::string, std::vector<std::pair<std::string, double>>> entries;
};

// nullopt keeps every translation above the floor.
TranslationTable top_n_translations(const AlignmentModel& m,
                                    std::optional<std::size_t> n);
TranslationTable truncate(const TranslationTable& tt, std::optional<std::size_t> n);

// Pharaoh "i-j" links separated by spaces.
std::string format_links(const std::vector<Link>& links);

// "<source>\t<target>\t<probability:%.6f>" grouped by source.
void write_ttable(std::ostream& out, const TranslationTable& tt);
void write_ttable(const std::string& path, const TranslationTable& tt);
TranslationTable read_ttable(const std::string& path);

}  // namespace seldiac
