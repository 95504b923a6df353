#include <cstdio>
#include <fstream>
#include <sstream>

#include "seldiac/clustering.hpp"
#include "seldiac/error.hpp"

namespace seldiac {

std::string algo_code(ClusterAlgo a) {
  switch (a) {
    case ClusterAlgo::kKMeans:
      return "KM";
    case ClusterAlgo::kGmm:
      return "EM";
    case ClusterAlgo::kBrown:
      return "BR";
    case ClusterAlgo::kChineseWhispers:
      return "CW";
  }
  return "KM";
}

ClusterAlgo parse_algo_code(const std::string& s) {
  if (s == "KM") return ClusterAlgo::kKMeans;
  if (s == "EM") return ClusterAlgo::kGmm;
  if (s == "BR") return ClusterAlgo::kBrown;
  if (s == "CW") return ClusterAlgo::kChineseWhispers;
  throw Error("unknown clustering algorithm: " + s);
}

std::map<std::size_t, std::size_t> relabel_contiguous(
    std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::size_t> remap;
  for (auto& l : labels) {
    auto [it, fresh] = remap.emplace(l, remap.size());
    l = it->second;
  }
  return remap;
}

VectorSet vectors_from(const EmbeddingTable& t, VectorSpace space) {
  if (space != VectorSpace::kWord && !t.has_context()) space = VectorSpace::kWord;
  VectorSet out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<double> v;
    if (space != VectorSpace::kContext) {
      for (float x : t.word(i)) v.push_back(x);
    }
    if (space != VectorSpace::kWord) {
      for (float x : t.context(i)) v.push_back(x);
    }
    out.emplace(t.vocab()[i], std::move(v));
  }
  return out;
}

void write_clusters(std::ostream& out, const ClusterAssignment& ca) {
  char obj[64];
  std::snprintf(obj, sizeof obj, "%.10g", ca.objective);
  out << "#algo=" << algo_code(ca.algo) << " k=" << ca.k << " objective=" << obj
      << '\n';
  for (const auto& [w, id] : ca.labels) out << w << '\t' << id << '\n';
}

void write_clusters(const std::string& path, const ClusterAssignment& ca) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_clusters(out, ca);
}

ClusterAssignment read_clusters(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#algo=")) {
    throw ParseError(path, 1, "missing \"#algo=... k=... objective=...\" header");
  }
  ClusterAssignment ca;
  {
    std::istringstream hs(line.substr(1));
    std::string field;
    bool have_k = false;
    while (hs >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos) throw ParseError(path, 1, "bad header field " + field);
      const std::string key = field.substr(0, eq);
      const std::string val = field.substr(eq + 1);
      try {
        if (key == "algo") {
          ca.algo = parse_algo_code(val);
        } else if (key == "k") {
          ca.k = std::stoul(val);
          have_k = true;
        } else if (key == "objective") {
          ca.objective = std::stod(val);
        }
      } catch (const std::exception& e) {
        throw ParseError(path, 1, "bad header field " + field);
      }
    }
    if (!have_k) throw ParseError(path, 1, "header lacks k=");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(path, lineno, "expected <word>\\t<id>");
    std::size_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoul(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(path, lineno, "bad cluster id");
    }
    if (!ca.labels.emplace(line.substr(0, tab), id).second) {
      throw ParseError(path, lineno, "duplicate word " + line.substr(0, tab));
    }
  }
  return ca;
}

std::size_t SimilarityGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& a : adj) n += a.size();
  return n / 2;
}

}  // namespace seldiac
