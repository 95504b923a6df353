#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "seldiac/clustering.hpp"
#include "seldiac/error.hpp"

namespace seldiac {

namespace {

// Greedy agglomerative state over at most k+1 active class slots. Every
// quantity is kept in raw counts; q() converts a cell to its mutual
// information term.
class BrownState {
 public:
  BrownState(std::size_t slots, double total)
      : k_(slots),
        total_(total),
        n_(slots * slots, 0.0),
        q_(slots * slots, 0.0),
        loss_(slots * slots, 0.0),
        ml_(slots, 0.0),
        mr_(slots, 0.0),
        s_(slots, 0.0),
        active_(slots, false),
        members_(slots) {}

  double q(double n, double l, double r) const {
    if (n <= 0) return 0.0;
    return n / total_ * std::log(n * total_ / (l * r));
  }

  double& N(std::size_t a, std::size_t b) { return n_[a * k_ + b]; }
  double& Q(std::size_t a, std::size_t b) { return q_[a * k_ + b]; }
  double& L(std::size_t a, std::size_t b) { return loss_[std::min(a, b) * k_ + std::max(a, b)]; }

  std::size_t free_slot() const {
    for (std::size_t s = 0; s < k_; ++s) {
      if (!active_[s]) return s;
    }
    return k_;
  }

  std::vector<std::size_t> active() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < k_; ++s) {
      if (active_[s]) out.push_back(s);
    }
    return out;
  }

  // Mutual information terms between x and the union c+d, both directions.
  double q_union_with(std::size_t c, std::size_t d, std::size_t x) {
    return q(N(c, x) + N(d, x), ml_[c] + ml_[d], mr_[x]) +
           q(N(x, c) + N(x, d), ml_[x], mr_[c] + mr_[d]);
  }

  double fresh_s(std::size_t c) {
    double s = 0;
    for (std::size_t d = 0; d < k_; ++d) {
      if (!active_[d]) continue;
      s += Q(c, d) + Q(d, c);
    }
    return s - Q(c, c);
  }

  double fresh_loss(std::size_t a, std::size_t b) {
    double after = q(N(a, a) + N(a, b) + N(b, a) + N(b, b), ml_[a] + ml_[b],
                     mr_[a] + mr_[b]);
    for (std::size_t d = 0; d < k_; ++d) {
      if (!active_[d] || d == a || d == b) continue;
      after += q_union_with(a, b, d);
    }
    return s_[a] + s_[b] - Q(a, b) - Q(b, a) - after;
  }

  void refresh_q(std::size_t s) {
    for (std::size_t d = 0; d < k_; ++d) {
      if (!active_[d]) continue;
      Q(s, d) = q(N(s, d), ml_[s], mr_[d]);
      Q(d, s) = q(N(d, s), ml_[d], mr_[s]);
    }
  }

  // `counts_out[c]` / `counts_in[c]`: bigram counts from / into the new
  // word for every active slot c; `self` is the (w, w) count.
  void insert(std::size_t s, std::size_t word, double left, double right,
              const std::vector<double>& counts_out,
              const std::vector<double>& counts_in, double self) {
    const auto act = active();
    for (std::size_t c : act) {
      N(s, c) = counts_out[c];
      N(c, s) = counts_in[c];
    }
    N(s, s) = self;
    ml_[s] = left;
    mr_[s] = right;
    active_[s] = true;
    refresh_q(s);

    for (std::size_t i = 0; i < act.size(); ++i) {
      for (std::size_t j = i + 1; j < act.size(); ++j) {
        const std::size_t a = act[i], b = act[j];
        L(a, b) += Q(a, s) + Q(s, a) + Q(b, s) + Q(s, b) - q_union_with(a, b, s);
      }
    }
    for (std::size_t c : act) s_[c] += Q(c, s) + Q(s, c);
    s_[s] = fresh_s(s);
    ami_ += s_[s];
    for (std::size_t c : act) L(s, c) = fresh_loss(std::min(s, c), std::max(s, c));
    members_[s] = {word};
  }

  std::pair<std::size_t, std::size_t> best_pair() {
    const auto act = active();
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> arg{0, 0};
    for (std::size_t i = 0; i < act.size(); ++i) {
      for (std::size_t j = i + 1; j < act.size(); ++j) {
        const double l = L(act[i], act[j]);
        if (l < best) {
          best = l;
          arg = {act[i], act[j]};
        }
      }
    }
    return arg;
  }

  // Merges b into a.
  void merge(std::size_t a, std::size_t b) {
    const auto act = active();
    std::vector<double> delta_s(k_, 0.0);
    for (std::size_t c : act) {
      if (c == a || c == b) continue;
      delta_s[c] = q(N(c, a) + N(c, b), ml_[c], mr_[a] + mr_[b]) +
                   q(N(a, c) + N(b, c), ml_[a] + ml_[b], mr_[c]) - Q(c, a) -
                   Q(a, c) - Q(c, b) - Q(b, c);
    }
    for (std::size_t i = 0; i < act.size(); ++i) {
      const std::size_t c = act[i];
      if (c == a || c == b) continue;
      for (std::size_t j = i + 1; j < act.size(); ++j) {
        const std::size_t d = act[j];
        if (d == a || d == b) continue;
        const double to_m =
            q(N(c, a) + N(c, b) + N(d, a) + N(d, b), ml_[c] + ml_[d],
              mr_[a] + mr_[b]) +
            q(N(a, c) + N(b, c) + N(a, d) + N(b, d), ml_[a] + ml_[b],
              mr_[c] + mr_[d]);
        L(c, d) += delta_s[c] + delta_s[d] -
                   (to_m - q_union_with(c, d, a) - q_union_with(c, d, b));
      }
    }
    ami_ -= L(a, b);

    N(a, a) = N(a, a) + N(a, b) + N(b, a) + N(b, b);
    for (std::size_t d : act) {
      if (d == a || d == b) continue;
      N(a, d) += N(b, d);
      N(d, a) += N(d, b);
    }
    ml_[a] += ml_[b];
    mr_[a] += mr_[b];
    for (std::size_t d = 0; d < k_; ++d) {
      N(b, d) = N(d, b) = 0.0;
      Q(b, d) = Q(d, b) = 0.0;
    }
    active_[b] = false;
    ml_[b] = mr_[b] = 0.0;
    members_[a].insert(members_[a].end(), members_[b].begin(), members_[b].end());
    members_[b].clear();

    refresh_q(a);
    for (std::size_t c : act) {
      if (c != a && c != b) s_[c] += delta_s[c];
    }
    s_[a] = fresh_s(a);
    s_[b] = 0.0;
    for (std::size_t c : act) {
      if (c == a || c == b) continue;
      L(a, c) = fresh_loss(std::min(a, c), std::max(a, c));
    }
  }

  double loss(std::size_t a, std::size_t b) { return L(a, b); }
  double ami() const { return ami_; }

  double fresh_ami() {
    double s = 0;
    for (std::size_t a = 0; a < k_; ++a) {
      if (!active_[a]) continue;
      for (std::size_t b = 0; b < k_; ++b) {
        if (active_[b]) s += Q(a, b);
      }
    }
    return s;
  }

  const std::vector<std::size_t>& members(std::size_t s) const { return members_[s]; }

 private:
  std::size_t k_;
  double total_;
  std::vector<double> n_, q_, loss_;
  std::vector<double> ml_, mr_, s_;
  std::vector<bool> active_;
  std::vector<std::vector<std::size_t>> members_;
  double ami_ = 0.0;
};

}  // namespace

ClusterAssignment brown(const Corpus& c, const BrownOptions& opts,
                        const BrownObserver& observer) {
  if (opts.k == 0) throw std::invalid_argument("k must be positive");
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& s : c.sentences) {
    for (const auto& tok : s) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> vocab;
  for (auto& [w, n] : freq) {
    if (n >= opts.min_count) vocab.emplace_back(w, n);
  }
  if (vocab.size() < opts.k) throw TooFewTypes(vocab.size(), opts.k);
  std::sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::unordered_map<std::string, std::size_t> id;
  for (std::size_t i = 0; i < vocab.size(); ++i) id.emplace(vocab[i].first, i);

  const std::size_t v = vocab.size();
  std::vector<std::unordered_map<std::size_t, double>> out(v), in(v);
  std::vector<double> left(v, 0.0), right(v, 0.0);
  double total = 0;
  for (const auto& s : c.sentences) {
    for (std::size_t i = 1; i < s.size(); ++i) {
      auto x = id.find(s[i - 1]);
      auto y = id.find(s[i]);
      if (x == id.end() || y == id.end()) continue;
      out[x->second][y->second] += 1;
      in[y->second][x->second] += 1;
      left[x->second] += 1;
      right[y->second] += 1;
      total += 1;
    }
  }

  const std::size_t slots = std::min(v, opts.k + 1);
  BrownState st(slots, total > 0 ? total : 1.0);
  std::vector<std::size_t> slot_of(v, slots);
  std::vector<double> counts_out(slots), counts_in(slots);

  auto insert = [&](std::size_t w) {
    const std::size_t s = st.free_slot();
    std::fill(counts_out.begin(), counts_out.end(), 0.0);
    std::fill(counts_in.begin(), counts_in.end(), 0.0);
    double self = 0;
    for (const auto& [y, n] : out[w]) {
      if (y == w) self = n;
      else if (slot_of[y] < slots) counts_out[slot_of[y]] += n;
    }
    for (const auto& [x, n] : in[w]) {
      if (x != w && slot_of[x] < slots) counts_in[slot_of[x]] += n;
    }
    st.insert(s, w, left[w], right[w], counts_out, counts_in, self);
    slot_of[w] = s;
  };

  ClusterAssignment ca;
  ca.algo = ClusterAlgo::kBrown;
  for (std::size_t w = 0; w < v; ++w) {
    insert(w);
    if (w < opts.k) continue;
    auto [a, b] = st.best_pair();
    const double before = st.ami();
    const double after = before - st.loss(a, b);
    if (observer) {
      std::vector<std::vector<std::string>> classes;
      std::size_t ia = 0, ib = 0;
      for (std::size_t s : st.active()) {
        if (s == a) ia = classes.size();
        if (s == b) ib = classes.size();
        std::vector<std::string> names;
        for (auto m : st.members(s)) names.push_back(vocab[m].first);
        classes.push_back(std::move(names));
      }
      observer(BrownMergeStep{classes, ia, ib, before, after});
    }
    st.merge(a, b);
    for (auto m : st.members(a)) slot_of[m] = a;
    ca.history.push_back(after);
  }

  std::vector<std::size_t> labels(v);
  for (std::size_t w = 0; w < v; ++w) labels[w] = slot_of[w];
  auto remap = relabel_contiguous(labels);
  ca.k = remap.size();
  ca.objective = total > 0 ? st.fresh_ami() : 0.0;
  for (std::size_t w = 0; w < v; ++w) ca.labels.emplace(vocab[w].first, labels[w]);
  return ca;
}

}  // namespace seldiac
