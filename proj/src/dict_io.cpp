#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "seldiac/ambig.hpp"
#include "seldiac/error.hpp"

namespace seldiac {

namespace {

bool clean_param_text(const std::string& s) {
  return s.find_first_of(",= \t\n") == std::string::npos;
}

}  // namespace

void write_dict(std::ostream& out, const AmbigDict& d) {
  out << "#keying=" << keying_name(d.keying) << " method=" << method_name(d.method)
      << " params=";
  bool first = true;
  for (const auto& [k, v] : d.params) {
    if (!clean_param_text(k) || !clean_param_text(v)) {
      throw Error("dictionary parameter cannot be serialized: " + k + "=" + v);
    }
    if (!first) out << ',';
    out << k << '=' << v;
    first = false;
  }
  out << '\n';
  for (const auto& [w, l] : d.labels) {
    out << w << '\t' << (l == Label::kAmbiguous ? 'A' : 'U') << '\n';
  }
}

void write_dict(const std::string& path, const AmbigDict& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_dict(out, d);
}

AmbigDict read_dict(std::istream& in, const std::string& source) {
  AmbigDict d;
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#keying=")) {
    throw ParseError(source, 1, "missing \"#keying=... method=... params=...\" header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool have_method = false;
  {
    std::istringstream hs(line.substr(1));
    std::string field;
    while (hs >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw ParseError(source, 1, "bad header field " + field);
      const std::string key = field.substr(0, eq);
      const std::string val = field.substr(eq + 1);
      try {
        if (key == "keying") {
          d.keying = parse_keying(val);
        } else if (key == "method") {
          d.method = parse_method(val);
          have_method = true;
        } else if (key == "params") {
          std::size_t start = 0;
          while (start < val.size()) {
            std::size_t comma = val.find(',', start);
            if (comma == std::string::npos) comma = val.size();
            const std::string kv = val.substr(start, comma - start);
            const auto e = kv.find('=');
            if (e == std::string::npos || e == 0) {
              throw ParseError(source, 1, "bad parameter " + kv);
            }
            d.params[kv.substr(0, e)] = kv.substr(e + 1);
            start = comma + 1;
          }
        } else {
          throw ParseError(source, 1, "unknown header field " + key);
        }
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(source, 1, e.what());
      }
    }
  }
  if (!have_method) throw ParseError(source, 1, "header lacks method=");

  std::size_t lineno = 1;
  const DiacriticSet& ds = default_diacritics();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 2 != line.size() ||
        (line[tab + 1] != 'A' && line[tab + 1] != 'U')) {
      throw ParseError(source, lineno, "expected <word>\\t<A|U>");
    }
    const std::string word = line.substr(0, tab);
    const Label l = line[tab + 1] == 'A' ? Label::kAmbiguous : Label::kUnambiguous;
    if (is_unified_token(word)) {
      throw ParseError(source, lineno, "placeholder token in dictionary: " + word);
    }
    if (d.keying == Keying::kUndiac && has_diacritic(word, ds)) {
      throw ParseError(source, lineno, "UNDIAC entry carries diacritics: " + word);
    }
    auto [it, fresh] = d.labels.emplace(word, l);
    if (!fresh && it->second != l) {
      throw ParseError(source, lineno, "conflicting labels for " + word);
    }
  }
  return d;
}

AmbigDict read_dict(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_dict(in, path);
}

}  // namespace seldiac
