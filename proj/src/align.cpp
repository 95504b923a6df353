#include "seldiac/align.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

#include "seldiac/error.hpp"

namespace seldiac {

namespace {

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  void add(const CompensatedSum& o) {
    add(o.sum);
    add(o.comp);
  }
  double value() const { return sum + comp; }
};

// Diagonal feature for 0-based positions.
double diag_feature(std::size_t i, std::size_t j, std::size_t m, std::size_t n) {
  return -std::abs(static_cast<double>(i + 1) / static_cast<double>(m) -
                   static_cast<double>(j + 1) / static_cast<double>(n));
}

// Normalized softmax over source positions of lambda * h.
void position_prior(std::size_t j, std::size_t n, std::size_t m, double lambda,
                    std::vector<double>& out) {
  out.resize(m);
  double mx = -1e300;
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = lambda * diag_feature(i, j, m, n);
    mx = std::max(mx, out[i]);
  }
  double z = 0;
  for (auto& v : out) {
    v = std::exp(v - mx);
    z += v;
  }
  for (auto& v : out) v /= z;
}

struct SizeKey {
  std::size_t m, n;
  friend auto operator<=>(const SizeKey&, const SizeKey&) = default;
};

// Posterior statistics needed by the tension update, per target position.
struct PositionStats {
  CompensatedSum mass;  // non-null posterior mass
  CompensatedSum feat;  // posterior-weighted diagonal feature
};

struct Accum {
  std::vector<std::unordered_map<std::size_t, CompensatedSum>> counts;
  std::vector<CompensatedSum> null_counts;
  std::map<SizeKey, std::vector<PositionStats>> positions;
  CompensatedSum ll;
};

struct Encoded {
  std::vector<std::string> src_vocab, tgt_vocab;
  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> pairs;
};

Encoded encode(const ParallelCorpus& p) {
  Encoded e;
  std::unordered_map<std::string, std::size_t> sid, tid;
  auto id_of = [](auto& ids, auto& vocab, const std::string& w) {
    auto [it, fresh] = ids.emplace(w, vocab.size());
    if (fresh) vocab.push_back(w);
    return it->second;
  };
  for (const auto& [src, tgt] : p.pairs) {
    std::vector<std::size_t> s, t;
    for (const auto& w : src) s.push_back(id_of(sid, e.src_vocab, w));
    for (const auto& w : tgt) t.push_back(id_of(tid, e.tgt_vocab, w));
    e.pairs.emplace_back(std::move(s), std::move(t));
  }
  return e;
}

// Expected complete-data log prior as a function of lambda (the part of
// the EM auxiliary function that depends on it), with first and second
// derivatives.
struct TensionObjective {
  const std::map<SizeKey, std::vector<PositionStats>>& stats;

  void eval(double lambda, double& value, double& grad, double& hess) const {
    value = grad = hess = 0;
    std::vector<double> prior;
    for (const auto& [key, per_j] : stats) {
      for (std::size_t j = 0; j < per_j.size(); ++j) {
        const double mass = per_j[j].mass.value();
        const double feat = per_j[j].feat.value();
        if (mass == 0 && feat == 0) continue;
        double mx = -1e300;
        for (std::size_t i = 0; i < key.m; ++i) {
          mx = std::max(mx, lambda * diag_feature(i, j, key.m, key.n));
        }
        double z = 0, eh = 0, eh2 = 0;
        for (std::size_t i = 0; i < key.m; ++i) {
          const double h = diag_feature(i, j, key.m, key.n);
          const double w = std::exp(lambda * h - mx);
          z += w;
          eh += w * h;
          eh2 += w * h * h;
        }
        eh /= z;
        eh2 /= z;
        value += lambda * feat - mass * (mx + std::log(z));
        grad += feat - mass * eh;
        hess -= mass * (eh2 - eh * eh);
      }
    }
  }
};

double update_tension(const std::map<SizeKey, std::vector<PositionStats>>& stats,
                      double lambda) {
  TensionObjective obj{stats};
  for (int it = 0; it < 8; ++it) {
    double v, g, h;
    obj.eval(lambda, v, g, h);
    if (std::abs(g) < 1e-12) break;
    double step = h < 0 ? -g / h : g;
    bool moved = false;
    for (int tries = 0; tries < 30; ++tries) {
      const double cand = std::clamp(lambda + step, 0.0, kMaxTension);
      double cv, cg, ch;
      obj.eval(cand, cv, cg, ch);
      if (cv > v) {
        lambda = cand;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return lambda;
}

}  // namespace

std::vector<double> alignment_prior(std::size_t j, std::size_t n, std::size_t m,
                                    double lambda, double p_null) {
  std::vector<double> prior;
  position_prior(j, n, m, lambda, prior);
  for (auto& v : prior) v *= 1.0 - p_null;
  prior.push_back(p_null);
  return prior;
}

double AlignmentModel::prob(const std::string& src, const std::string& tgt) const {
  auto r = ttable.find(src);
  if (r == ttable.end()) return 0.0;
  auto c = r->second.find(tgt);
  return c == r->second.end() ? 0.0 : c->second;
}

double AlignmentModel::null_prob(const std::string& tgt) const {
  auto c = null_row.find(tgt);
  return c == null_row.end() ? 0.0 : c->second;
}

AlignmentModel train_ibm2(const ParallelCorpus& p, const AlignOptions& opts) {
  if (p.pairs.empty()) throw EmptyCorpus();
  if (!(opts.p_null >= 0.0 && opts.p_null < 1.0)) {
    throw std::invalid_argument("p_null must lie in [0, 1)");
  }
  if (opts.lambda0 < 0) throw std::invalid_argument("lambda0 must be >= 0");
  if (opts.iterations == 0) throw std::invalid_argument("iterations must be positive");

  const Encoded enc = encode(p);
  const std::size_t sv = enc.src_vocab.size();
  const std::size_t tv = enc.tgt_vocab.size();

  std::vector<std::unordered_map<std::size_t, double>> t(sv);
  std::vector<double> t_null(tv, 1.0 / static_cast<double>(tv));
  for (const auto& [src, tgt] : enc.pairs) {
    for (auto s : src) {
      for (auto f : tgt) t[s].emplace(f, 1.0 / static_cast<double>(tv));
    }
  }

  AlignmentModel model;
  model.lambda = opts.lambda0;
  model.p_null = opts.p_null;
  const double p0 = opts.p_null;

  auto run_shard = [&](std::size_t begin, std::size_t end, Accum& acc) {
    acc.counts.assign(sv, {});
    acc.null_counts.assign(tv, {});
    std::vector<double> prior, probs;
    for (std::size_t k = begin; k < end; ++k) {
      const auto& [src, tgt] = enc.pairs[k];
      const std::size_t m = src.size(), n = tgt.size();
      auto& pos = acc.positions[{m, n}];
      pos.resize(n);
      probs.resize(m);
      for (std::size_t j = 0; j < n; ++j) {
        position_prior(j, n, m, model.lambda, prior);
        const std::size_t f = tgt[j];
        const double pn = p0 * t_null[f];
        double denom = pn;
        for (std::size_t i = 0; i < m; ++i) {
          probs[i] = (1.0 - p0) * prior[i] * t[src[i]].at(f);
          denom += probs[i];
        }
        acc.ll.add(std::log(denom));
        acc.null_counts[f].add(pn / denom);
        for (std::size_t i = 0; i < m; ++i) {
          const double post = probs[i] / denom;
          acc.counts[src[i]][f].add(post);
          pos[j].mass.add(post);
          pos[j].feat.add(post * diag_feature(i, j, m, n));
        }
      }
    }
  };

  const std::size_t threads =
      std::max<std::size_t>(1, std::min(opts.threads, enc.pairs.size()));
  for (std::size_t iter = 0; iter < opts.iterations; ++iter) {
    std::vector<Accum> shards(threads);
    if (threads == 1) {
      run_shard(0, enc.pairs.size(), shards[0]);
    } else {
      std::vector<std::thread> pool;
      const std::size_t per = (enc.pairs.size() + threads - 1) / threads;
      for (std::size_t w = 0; w < threads; ++w) {
        const std::size_t b = std::min(enc.pairs.size(), w * per);
        const std::size_t e = std::min(enc.pairs.size(), b + per);
        pool.emplace_back([&, b, e, w] { run_shard(b, e, shards[w]); });
      }
      for (auto& th : pool) th.join();
    }
    Accum& total = shards[0];
    for (std::size_t w = 1; w < threads; ++w) {
      for (std::size_t s = 0; s < sv; ++s) {
        for (auto& [f, c] : shards[w].counts[s]) total.counts[s][f].add(c);
      }
      for (std::size_t f = 0; f < tv; ++f) total.null_counts[f].add(shards[w].null_counts[f]);
      for (auto& [key, per_j] : shards[w].positions) {
        auto& dst = total.positions[key];
        dst.resize(per_j.size());
        for (std::size_t j = 0; j < per_j.size(); ++j) {
          dst[j].mass.add(per_j[j].mass);
          dst[j].feat.add(per_j[j].feat);
        }
      }
      total.ll.add(shards[w].ll);
    }
    model.log_likelihood.push_back(total.ll.value());

    for (std::size_t s = 0; s < sv; ++s) {
      double z = 0;
      for (auto& [f, c] : total.counts[s]) z += c.value();
      if (z <= 0) continue;
      for (auto& [f, c] : total.counts[s]) t[s][f] = c.value() / z;
    }
    {
      double z = 0;
      for (auto& c : total.null_counts) z += c.value();
      if (z > 0) {
        for (std::size_t f = 0; f < tv; ++f) t_null[f] = total.null_counts[f].value() / z;
      }
    }
    if (opts.optimize_tension) model.lambda = update_tension(total.positions, model.lambda);
  }

  for (std::size_t s = 0; s < sv; ++s) {
    auto& row = model.ttable[enc.src_vocab[s]];
    for (auto& [f, prob] : t[s]) row[enc.tgt_vocab[f]] = prob;
  }
  if (p0 > 0) {
    for (std::size_t f = 0; f < tv; ++f) model.null_row[enc.tgt_vocab[f]] = t_null[f];
  }
  return model;
}

std::vector<Link> viterbi_align(const AlignmentModel& m, const Sentence& src,
                                const Sentence& tgt) {
  std::vector<Link> links;
  if (src.empty() || tgt.empty()) return links;
  std::vector<const std::map<std::string, double>*> rows(src.size(), nullptr);
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto it = m.ttable.find(src[i]);
    if (it != m.ttable.end()) rows[i] = &it->second;
  }
  std::vector<double> prior;
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    position_prior(j, tgt.size(), src.size(), m.lambda, prior);
    std::size_t best = 0;
    double bs = -1;
    for (std::size_t i = 0; i < src.size(); ++i) {
      double tp = 0;
      if (rows[i]) {
        auto c = rows[i]->find(tgt[j]);
        if (c != rows[i]->end()) tp = c->second;
      }
      const double score = (1.0 - m.p_null) * prior[i] * std::max(tp, kProbFloor);
      if (score > bs) {
        bs = score;
        best = i;
      }
    }
    const double null_score = m.p_null * std::max(m.null_prob(tgt[j]), kProbFloor);
    if (m.p_null > 0 && null_score > bs) continue;
    links.emplace_back(best, j);
  }
  return links;
}

namespace {

void rank(std::vector<std::pair<std::string, double>>& row) {
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
}

}  // namespace

TranslationTable top_n_translations(const AlignmentModel& m,
                                    std::optional<std::size_t> n) {
  TranslationTable tt;
  for (const auto& [src, row] : m.ttable) {
    std::vector<std::pair<std::string, double>> ranked;
    for (const auto& [tgt, p] : row) {
      if (p > kProbFloor) ranked.emplace_back(tgt, p);
    }
    rank(ranked);
    if (n && ranked.size() > *n) ranked.resize(*n);
    tt.entries.emplace(src, std::move(ranked));
  }
  return tt;
}

TranslationTable truncate(const TranslationTable& tt, std::optional<std::size_t> n) {
  TranslationTable out;
  for (const auto& [src, row] : tt.entries) {
    auto r = row;
    rank(r);
    if (n && r.size() > *n) r.resize(*n);
    out.entries.emplace(src, std::move(r));
  }
  return out;
}

std::string format_links(const std::vector<Link>& links) {
  std::string out;
  for (const auto& [i, j] : links) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(i) + "-" + std::to_string(j);
  }
  return out;
}

void write_ttable(std::ostream& out, const TranslationTable& tt) {
  char buf[64];
  for (const auto& [src, row] : tt.entries) {
    for (const auto& [tgt, p] : row) {
      std::snprintf(buf, sizeof buf, "%.6f", p);
      out << src << '\t' << tgt << '\t' << buf << '\n';
    }
  }
}

void write_ttable(const std::string& path, const TranslationTable& tt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_ttable(out, tt);
}

TranslationTable read_ttable(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  TranslationTable tt;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw ParseError(path, lineno, "expected <source>\\t<target>\\t<probability>");
    }
    double p = 0;
    try {
      std::size_t used = 0;
      p = std::stod(line.substr(t2 + 1), &used);
      if (used != line.size() - t2 - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(path, lineno, "bad probability");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw ParseError(path, lineno, "probability outside [0,1]");
    tt.entries[line.substr(0, t1)].emplace_back(line.substr(t1 + 1, t2 - t1 - 1), p);
  }
  for (auto& [src, row] : tt.entries) rank(row);
  return tt;
}

}  // namespace seldiac
