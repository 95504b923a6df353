#include <random>

#include "seldiac/error.hpp"
#include "seldiac/evalkit.hpp"

namespace seldiac {

std::vector<std::string> PosTagger::features(const std::vector<std::string>& words,
                                             std::size_t i, const std::string& prev_tag) {
  const std::string& w = words[i];
  std::vector<std::string> f;
  f.reserve(9);
  f.emplace_back("bias");
  f.push_back("w=" + w);
  f.push_back("p=" + (i > 0 ? words[i - 1] : std::string("<s>")));
  f.push_back("n=" + (i + 1 < words.size() ? words[i + 1] : std::string("</s>")));
  f.push_back("t=" + prev_tag);
  const std::u32string cps = utf8::decode_lossy(w);
  for (std::size_t k = 1; k <= 3 && k <= cps.size(); ++k) {
    f.push_back("s" + std::to_string(k) + "=" +
                utf8::encode(std::u32string_view(cps).substr(cps.size() - k)));
  }
  f.push_back(has_diacritic(w) ? "d=1" : "d=0");
  return f;
}

std::size_t PosTagger::predict(const std::vector<std::string>& feats) const {
  std::vector<double> score(tags_.size(), 0.0);
  for (const auto& f : feats) {
    auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (std::size_t t = 0; t < tags_.size(); ++t) score[t] += it->second[t];
  }
  std::size_t best = 0;
  for (std::size_t t = 1; t < tags_.size(); ++t) {
    if (score[t] > score[best]) best = t;
  }
  return best;
}

std::vector<std::string> PosTagger::tag(const std::vector<std::string>& words) const {
  std::vector<std::string> out;
  std::string prev = "<s>";
  for (std::size_t i = 0; i < words.size(); ++i) {
    out.push_back(tags_[predict(features(words, i, prev))]);
    prev = out.back();
  }
  return out;
}

PosTagger PosTagger::train(const TaggedCorpus& data, std::size_t epochs,
                           std::uint64_t seed) {
  const auto tagset = data.tagset();
  if (tagset.empty()) throw EmptyTagset();
  PosTagger m;
  m.scheme_ = data.scheme;
  m.tags_.assign(tagset.begin(), tagset.end());
  std::map<std::string, std::size_t> tag_id;
  for (std::size_t t = 0; t < m.tags_.size(); ++t) tag_id[m.tags_[t]] = t;
  for (const auto& s : data.sentences) {
    for (const auto& t : s) m.vocab_.insert(t.word);
  }

  // Lazily averaged weights: `total` holds the running sum up to `stamp`.
  struct Param {
    std::vector<double> w, total;
    std::vector<std::size_t> stamp;
  };
  std::unordered_map<std::string, Param> params;
  const std::size_t nt = m.tags_.size();
  std::size_t clock = 0;
  auto bump = [&](const std::string& feat, std::size_t t, double delta) {
    auto& p = params[feat];
    if (p.w.empty()) {
      p.w.assign(nt, 0.0);
      p.total.assign(nt, 0.0);
      p.stamp.assign(nt, 0);
    }
    p.total[t] += static_cast<double>(clock - p.stamp[t]) * p.w[t];
    p.stamp[t] = clock;
    p.w[t] += delta;
  };

  std::vector<std::size_t> order(data.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t e = 0; e < epochs; ++e) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    for (std::size_t si : order) {
      const auto& sent = data.sentences[si];
      std::vector<std::string> words;
      for (const auto& t : sent) words.push_back(t.word);
      std::string prev = "<s>";
      for (std::size_t i = 0; i < sent.size(); ++i) {
        const auto feats = features(words, i, prev);
        // Score with the live (non-averaged) weights.
        std::vector<double> score(nt, 0.0);
        for (const auto& f : feats) {
          auto it = params.find(f);
          if (it == params.end()) continue;
          for (std::size_t t = 0; t < nt; ++t) score[t] += it->second.w[t];
        }
        std::size_t guess = 0;
        for (std::size_t t = 1; t < nt; ++t) {
          if (score[t] > score[guess]) guess = t;
        }
        const std::size_t gold = tag_id.at(sent[i].tag);
        ++clock;
        if (guess != gold) {
          for (const auto& f : feats) {
            bump(f, gold, 1.0);
            bump(f, guess, -1.0);
          }
        }
        prev = m.tags_[guess];
      }
    }
  }

  for (auto& [feat, p] : params) {
    std::vector<double> avg(nt);
    for (std::size_t t = 0; t < nt; ++t) {
      const double total = p.total[t] + static_cast<double>(clock - p.stamp[t]) * p.w[t];
      avg[t] = clock ? total / static_cast<double>(clock) : p.w[t];
    }
    m.weights_.emplace(feat, std::move(avg));
  }
  return m;
}

}  // namespace seldiac
