#include "coxkl/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace coxkl {

namespace {

constexpr int kCacheFormat = 1;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

std::string_view strip_prefix(std::string_view s, std::string_view prefix) {
  s = trim(s);
  if (s.substr(0, prefix.size()) == prefix) s.remove_prefix(prefix.size());
  return trim(s);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Greedy longest-name tokenization of a concatenated word.
Word tokenize_compact(const CoxeterSystem& W, std::string_view text) {
  Word out;
  while (!text.empty()) {
    std::size_t best = 0;
    Gen which = 0;
    for (Gen s = 0; s < W.rank(); ++s) {
      const std::string& n = W.name(s);
      if (n.size() > best && text.substr(0, n.size()) == n) {
        best = n.size();
        which = s;
      }
    }
    if (best == 0) throw std::invalid_argument("cannot read '" + std::string(text) + "' as a word in the generators");
    out.push_back(which);
    text.remove_prefix(best);
  }
  return out;
}

Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw std::invalid_argument("polynomial coefficient must be an integer");
}

json names_of(const Element& x) {
  json out = json::array();
  for (Gen s : x.word()) out.push_back(x.system().name(s));
  return out;
}

json names_of(const CoxeterSystem& W, GenSet I) {
  json out = json::array();
  for (Gen s : I.members()) out.push_back(W.name(s));
  return out;
}

template <class Key>
void write_entries(std::ostream& out, PolyKind kind, const std::vector<std::pair<std::pair<Key, Key>, LaurentPoly>>& entries,
                   json (*key)(const Key&)) {
  for (const auto& [xy, p] : entries) {
    json line;
    line["x"] = key(xy.first);
    line["y"] = key(xy.second);
    line["kind"] = to_string(kind);
    line["poly"] = poly_u_json(p);
    out << line.dump() << '\n';
  }
}

}  // namespace

std::unique_ptr<CoxeterSystem> system_from_json(const json& j) {
  if (!j.is_object() || !j.contains("generators") || !j.contains("matrix"))
    throw std::invalid_argument("system JSON needs \"generators\" and \"matrix\"");
  std::vector<std::string> names;
  for (const auto& g : j.at("generators")) {
    if (!g.is_string()) throw std::invalid_argument("generator names must be strings");
    names.push_back(g.get<std::string>());
  }
  std::vector<std::vector<int>> matrix;
  for (const auto& row : j.at("matrix")) {
    if (!row.is_array()) throw std::invalid_argument("matrix rows must be arrays");
    std::vector<int>& out = matrix.emplace_back();
    for (const auto& m : row) {
      if (m.is_string() && (m == "inf" || m == "infinity" || m == "∞")) out.push_back(kInfinity);
      else if (m.is_number_integer() && m.get<int>() >= 1) out.push_back(m.get<int>());
      else throw std::invalid_argument("matrix entries must be positive integers or \"inf\"");
    }
  }
  return std::make_unique<CoxeterSystem>(std::move(names), std::move(matrix));
}

json system_to_json(const CoxeterSystem& W) {
  json m = json::array();
  for (int r = 0; r < W.rank(); ++r) {
    json row = json::array();
    for (int s = 0; s < W.rank(); ++s) {
      if (W.bond(r, s) == kInfinity) row.push_back("inf");
      else row.push_back(W.bond(r, s));
    }
    m.push_back(std::move(row));
  }
  return json{{"generators", W.generator_names()}, {"matrix", std::move(m)}};
}

std::unique_ptr<CoxeterSystem> load_system(const std::string& path) { return system_from_json(read_json_file(path)); }

HatConfig hat_config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("hat config must be a JSON object");
  HatConfig config;
  auto bond = [](const json& m) {
    if (m.is_string() && (m == "inf" || m == "infinity" || m == "∞")) return kInfinity;
    if (m.is_number_integer()) return m.get<int>();
    throw std::invalid_argument("bond orders must be integers or \"inf\"");
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "hat_bonds") {
      if (!value.is_object()) throw std::invalid_argument("\"hat_bonds\" must be an object");
      for (const auto& [name, m] : value.items()) config.hat_bonds[name] = bond(m);
    } else if (key == "theta_bonds") {
      if (!value.is_array()) throw std::invalid_argument("\"theta_bonds\" must be an array");
      for (const auto& t : value) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string())
          throw std::invalid_argument("each theta bond is [name, name, order]");
        config.theta_bonds.emplace_back(t[0].get<std::string>(), t[1].get<std::string>(), bond(t[2]));
      }
    } else {
      throw std::invalid_argument("unknown hat config key '" + key + "'");
    }
  }
  return config;
}

json hat_config_to_json(const HatConfig& config) {
  json hb = json::object(), tb = json::array();
  for (const auto& [name, m] : config.hat_bonds) hb[name] = m == kInfinity ? json("inf") : json(m);
  for (const auto& [r, s, m] : config.theta_bonds) tb.push_back({r, s, m == kInfinity ? json("inf") : json(m)});
  return json{{"hat_bonds", hb}, {"theta_bonds", tb}};
}

HatConfig load_hat_config(const std::string& path) {
  if (path.empty() || path == "default") return {};
  return hat_config_from_json(read_json_file(path));
}

Element parse_element(const CoxeterSystem& W, std::string_view text) {
  text = trim(text);
  if (text.empty() || text == "1" || text == "e") return W.identity();
  Word word;
  for (auto token : split(text, ',')) {
    if (token.empty()) throw std::invalid_argument("empty generator name in '" + std::string(text) + "'");
    if (auto s = W.find_generator(token)) {
      word.push_back(*s);
    } else {
      const Word part = tokenize_compact(W, token);
      word.insert(word.end(), part.begin(), part.end());
    }
  }
  return W.reduce(word);
}

GenSet parse_gen_set(const CoxeterSystem& W, std::string_view text) {
  text = trim(text);
  if (text == "S") return W.all();
  if (text.size() >= 2 && text.front() == '{' && text.back() == '}') text = trim(text.substr(1, text.size() - 2));
  if (text.empty() || text == "∅") return GenSet();
  GenSet out;
  for (auto token : split(text, ',')) {
    auto s = W.find_generator(token);
    if (!s) throw std::invalid_argument("unknown generator '" + std::string(token) + "'");
    out.insert(*s);
  }
  return out;
}

VElement parse_velement(const CoxeterSystem& W, std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw std::invalid_argument("a triple is written [I;a;b]");
  const auto parts = split(text.substr(1, text.size() - 2), ';');
  if (parts.size() != 3) throw std::invalid_argument("a triple is written [I;a;b]");
  return VElement(parse_gen_set(W, strip_prefix(parts[0], "I=")), parse_element(W, strip_prefix(parts[1], "a=")),
                  parse_element(W, strip_prefix(parts[2], "b=")));
}

std::string velement_text(const VElement& v) {
  const CoxeterSystem& W = v.system();
  std::string I;
  if (v.I().empty()) I = "∅";
  else if (v.I() == W.all()) I = "S";
  else for (Gen s : v.I().members()) I += (I.empty() ? "" : ",") + W.name(s);
  return "[" + I + ";" + W.format(v.a()) + ";" + W.format(v.b()) + "]";
}

json element_to_json(const Element& x) { return names_of(x); }

Element element_from_json(const CoxeterSystem& W, const json& j) {
  if (j.is_string()) return parse_element(W, j.get<std::string>());
  if (!j.is_array()) throw std::invalid_argument("an element is a list of generator names");
  Word w;
  for (const auto& n : j) {
    if (!n.is_string()) throw std::invalid_argument("an element is a list of generator names");
    w.push_back(W.generator_index(n.get<std::string>()));
  }
  return W.reduce(w);
}

json velement_to_json(const VElement& v) {
  return json{{"I", names_of(v.system(), v.I())}, {"a", names_of(v.a())}, {"b", names_of(v.b())}};
}

VElement velement_from_json(const CoxeterSystem& W, const json& j) {
  if (!j.is_object() || !j.contains("I") || !j.contains("a") || !j.contains("b"))
    throw std::invalid_argument("a triple is {\"I\": [...], \"a\": [...], \"b\": [...]}");
  GenSet I;
  for (const auto& n : j.at("I")) I.insert(W.generator_index(n.get<std::string>()));
  return VElement(I, element_from_json(W, j.at("a")), element_from_json(W, j.at("b")));
}

OmegaElement parse_omega(const HatSystem& h, std::string_view text) {
  text = trim(text);
  if (text.find('*') == std::string_view::npos) return omega_decompose(h, parse_element(h.hat(), text));
  const auto parts = split(text, '*');
  if (parts.size() != 3 || parts[1].size() < 3 || parts[1].substr(0, 2) != "z[" || parts[1].back() != ']')
    throw std::invalid_argument("an Omega element is written a * z[I] * b");
  const CoxeterSystem& W = h.base();
  return make_omega(h, parse_element(W, parts[0]), parse_gen_set(W, parts[1].substr(2, parts[1].size() - 3)),
                    parse_element(W, parts[2]));
}

json omega_to_json(const HatSystem& h, const OmegaElement& x) {
  return json{{"a", names_of(x.a)}, {"I", names_of(h.base(), x.I)}, {"b", names_of(x.b)}};
}

json int_to_json(const Int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return json(static_cast<std::int64_t>(v));
  return json(v.str());
}

json poly_u_json(const LaurentPoly& p) {
  json terms = json::object();
  for (const auto& [e, c] : p.terms()) terms[std::to_string(e)] = int_to_json(c);
  return json{{"u", terms}};
}

json poly_q_json(const QPoly& p) {
  json terms = json::object();
  for (int k = 0; k <= p.degree(); ++k)
    if (p.coeffs()[k] != 0) terms[std::to_string(k)] = int_to_json(p.coeffs()[k]);
  return json{{"q", terms}};
}

json poly_abar_json(const LaurentPoly& p) {
  json terms = json::object();
  for (const auto& [k, c] : p.to_abar()) terms[std::to_string(k)] = int_to_json(c);
  return json{{"abar", terms}};
}

LaurentPoly poly_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) throw std::invalid_argument("a polynomial is {\"u\"|\"q\"|\"abar\": {...}}");
  const auto& [form, terms] = *j.items().begin();
  if (form != "u" && form != "q" && form != "abar") throw std::invalid_argument("unknown polynomial form '" + form + "'");
  std::vector<LaurentPoly::Term> parsed;
  std::map<int, Int> abar;
  for (const auto& [e, c] : terms.items()) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(e, &used);
      if (used != e.size()) throw std::invalid_argument(e);
    } catch (const std::exception&) {
      throw std::invalid_argument("polynomial exponents must be integers, got '" + e + "'");
    }
    if (form == "u") parsed.emplace_back(k, int_from_json(c));
    else if (form == "q") parsed.emplace_back(2 * k, int_from_json(c));
    else abar[k] = int_from_json(c);
  }
  if (form == "abar") return LaurentPoly::from_abar(abar);
  return LaurentPoly::from_terms(std::move(parsed));
}

void write_table_jsonl(std::ostream& out, const ElementTable& table) {
  write_entries<Element>(out, table.kind(), table.entries(), [](const Element& x) { return names_of(x); });
}

void write_table_jsonl(std::ostream& out, const VTable& table) {
  write_entries<VElement>(out, table.kind(), table.entries(), [](const VElement& v) { return velement_to_json(v); });
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string system_digest(const CoxeterSystem& W) { return digest(system_to_json(W).dump()); }

std::size_t load_cache(const std::string& path, const CoxeterSystem& W, const ElementTable& table) {
  std::ifstream in(path);
  if (!in) return 0;
  std::string line;
  if (!std::getline(in, line)) return 0;
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != "coxkl-cache" || header.value("version", 0) != kCacheFormat ||
      header.value("system", "") != system_digest(W) || header.value("kind", "") != to_string(table.kind()))
    return 0;
  std::size_t loaded = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const json entry = json::parse(line, nullptr, false);
    if (entry.is_discarded()) throw std::runtime_error("cache '" + path + "' has a malformed line");
    table.insert(element_from_json(W, entry.at("x")), element_from_json(W, entry.at("y")), poly_from_json(entry.at("poly")));
    ++loaded;
  }
  return loaded;
}

void save_cache(const std::string& path, const CoxeterSystem& W, const ElementTable& table) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write cache '" + path + "'");
    json header{{"format", "coxkl-cache"}, {"version", kCacheFormat}, {"tool", COXKL_VERSION},
                {"system", system_digest(W)}, {"kind", to_string(table.kind())}};
    out << header.dump() << '\n';
    write_table_jsonl(out, table);
  }
  std::rename(tmp.c_str(), path.c_str());
}

}  // namespace coxkl
