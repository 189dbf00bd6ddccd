// coxkl: queries, tables, Hasse diagrams and verification suites for
// Springer's poset V and the twisted KL machinery of its hat system.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "coxkl/errors.hpp"
#include "coxkl/hat.hpp"
#include "coxkl/io.hpp"
#include "coxkl/kl.hpp"
#include "coxkl/springer.hpp"
#include "coxkl/verify.hpp"

namespace {

using namespace coxkl;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Common {
  std::string system;
  std::string hat = "default";
  std::string cache;
  std::string report = "json";
  bool slow = false;
};

struct Args {
  std::string op;
  std::string word, x, y, w, v, kind, out;
  std::uint64_t seed = VerifyOptions{}.seed;
  std::size_t samples = 0;
  int max_length = VerifyOptions{}.max_length;
};

void emit(const Common& c, const json& j, const std::string& text) {
  if (c.report == "text") std::cout << text << '\n';
  else std::cout << j.dump(2) << '\n';
}

std::string need(const std::string& value, const std::string& flag) {
  if (value.empty()) throw std::invalid_argument("missing " + flag);
  return value;
}

// R-tilde caches live in one directory, one file per system.
class CacheScope {
 public:
  CacheScope(const std::string& dir, std::vector<std::pair<const CoxeterSystem*, const ClassicalKL*>> tables)
      : dir_(dir), tables_(std::move(tables)) {
    if (dir_.empty()) return;
    std::filesystem::create_directories(dir_);
    for (auto [W, kl] : tables_) load_cache(path(*W), *W, kl->r_table());
  }
  ~CacheScope() {
    if (dir_.empty()) return;
    try {
      for (auto [W, kl] : tables_) save_cache(path(*W), *W, kl->r_table());
    } catch (const std::exception& e) {
      std::cerr << "warning: cache not saved: " << e.what() << '\n';
    }
  }

 private:
  std::string path(const CoxeterSystem& W) const { return dir_ + "/" + system_digest(W) + ".rtilde.jsonl"; }
  std::string dir_;
  std::vector<std::pair<const CoxeterSystem*, const ClassicalKL*>> tables_;
};

int cmd_element(const Common& c, const Args& a) {
  const auto W = load_system(need(c.system, "--system"));
  json j;
  std::string text;
  if (a.op == "reduce") {
    const Element x = parse_element(*W, need(a.word, "--word"));
    j = {{"element", element_to_json(x)}, {"word", W->format(x)}};
    text = W->format(x);
  } else if (a.op == "length") {
    const Element x = parse_element(*W, need(a.word, "--word"));
    j = {{"element", element_to_json(x)}, {"length", x.length()}};
    text = std::to_string(x.length());
  } else if (a.op == "inverse") {
    const Element x = W->inv(parse_element(*W, need(a.word, "--word")));
    j = {{"element", element_to_json(x)}, {"word", W->format(x)}};
    text = W->format(x);
  } else if (a.op == "mul") {
    const Element x = W->mul(parse_element(*W, need(a.x, "--x")), parse_element(*W, need(a.y, "--y")));
    j = {{"element", element_to_json(x)}, {"word", W->format(x)}};
    text = W->format(x);
  } else if (a.op == "descents") {
    const Element x = parse_element(*W, need(a.word, "--word"));
    auto names = [&](GenSet I) {
      json out = json::array();
      for (Gen s : I.members()) out.push_back(W->name(s));
      return out;
    };
    j = {{"element", element_to_json(x)}, {"left", names(W->descents(x, Side::Left))}, {"right", names(W->descents(x, Side::Right))}};
    text = "left " + W->format_set(W->descents(x, Side::Left)) + " right " + W->format_set(W->descents(x, Side::Right));
  } else if (a.op == "bruhat-leq") {
    const bool le = W->bruhat_leq(parse_element(*W, need(a.x, "--x")), parse_element(*W, need(a.y, "--y")));
    j = {{"leq", le}};
    text = le ? "true" : "false";
  } else {
    throw std::invalid_argument("unknown element operation '" + a.op + "'");
  }
  emit(c, j, text);
  return kPass;
}

json r_form(const LaurentPoly& p) {
  json j = poly_u_json(p);
  j["abar"] = poly_abar_json(p)["abar"];
  return j;
}

json p_form(const QPoly& p) {
  json j = poly_q_json(p);
  j["u"] = poly_u_json(p.in_u())["u"];
  return j;
}

void write_table(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  write(out);
}

int cmd_poly_table(const Common& c, const Args& a, const CoxeterSystem& W, const SpringerPoset& V) {
  if (!W.is_finite()) throw InfiniteGroupError("table export enumerates all pairs and needs a finite W");
  const std::string kind = need(a.kind, "--kind");
  if (kind == "btilde" || kind == "b" || kind == "c") {
    const auto& E = V.elements();
    for (const auto& w : E)
      for (const auto& v : E) {
        V.b_poly(w, v);
        if (kind == "c" && V.leq(w, v)) V.c_poly(w, v);
      }
    if (kind == "c") {
      // c lives in its own memo; rebuild it as a table of u-forms.
      VTable out(PolyKind::C);
      for (const auto& w : E)
        for (const auto& v : E)
          if (V.leq(w, v)) out.insert(w, v, V.c_poly(w, v).in_u());
      write_table(a.out, [&](std::ostream& os) { write_table_jsonl(os, out); });
    } else {
      write_table(a.out, [&](std::ostream& os) { write_table_jsonl(os, V.b_table()); });
    }
  } else if (kind == "rtilde" || kind == "P" || kind == "Q") {
    const auto group = W.enumerate(W.all(), CosetKind::Parabolic);
    const ClassicalKL& kl = V.classical();
    for (const auto& x : group)
      for (const auto& y : group) {
        if (kind == "rtilde") kl.r_tilde(x, y);
        else if (kind == "P") kl.kl_p(x, y);
        else kl.kl_q(x, y);
      }
    const ElementTable& t = kind == "rtilde" ? kl.r_table() : kind == "P" ? kl.p_table() : kl.q_table();
    write_table(a.out, [&](std::ostream& os) { write_table_jsonl(os, t); });
  } else {
    throw std::invalid_argument("--kind must be one of rtilde, P, Q, btilde, c");
  }
  (void)c;
  return kPass;
}

int cmd_poly(const Common& c, const Args& a) {
  const auto W = load_system(need(c.system, "--W"));
  const HatSystem h(*W, load_hat_config(c.hat));
  SpringerPoset V(*W);
  TwistedKL T(h);
  CacheScope cache(c.cache, {{W.get(), &V.classical()}, {&h.hat(), &T.hat_kl()}});

  if (a.op == "table") return cmd_poly_table(c, a, *W, V);

  json j;
  std::string text;
  if (a.op == "r" || a.op == "p" || a.op == "q") {
    const Element x = parse_element(*W, need(a.x, "--x")), y = parse_element(*W, need(a.y, "--y"));
    j = {{"x", element_to_json(x)}, {"y", element_to_json(y)}};
    if (a.op == "r") {
      const LaurentPoly r = V.classical().r_tilde(x, y);
      j["kind"] = "rtilde";
      j.update(r_form(r));
      j["R"] = poly_q_json(V.classical().r_q(x, y))["q"];
      text = r.abar_string();
    } else {
      const QPoly p = a.op == "p" ? V.classical().kl_p(x, y) : V.classical().kl_q(x, y);
      j["kind"] = a.op == "p" ? "P" : "Q";
      j.update(p_form(p));
      text = p.to_string();
    }
  } else if (a.op == "b" || a.op == "c" || a.op == "cinv") {
    const VElement w = parse_velement(*W, need(a.w, "--w")), v = parse_velement(*W, need(a.v, "--v"));
    j = {{"w", velement_to_json(w)}, {"v", velement_to_json(v)}};
    if (a.op == "b") {
      const LaurentPoly b = V.b_poly(w, v);
      j["kind"] = "btilde";
      j.update(r_form(b));
      text = b.abar_string();
    } else {
      const QPoly p = a.op == "c" ? V.c_poly(w, v) : V.c_inv_poly(w, v);
      j["kind"] = a.op;
      j.update(p_form(p));
      text = p.to_string();
    }
  } else if (a.op == "ra" || a.op == "pa" || a.op == "pc") {
    const OmegaElement x = parse_omega(h, need(a.x, "--x")), y = parse_omega(h, need(a.y, "--y"));
    j = {{"x", format(h, x)}, {"y", format(h, y)}};
    if (a.op == "ra") {
      const LaurentPoly r = T.r_a(x, y);
      j["kind"] = "RA";
      j.update(r_form(r));
      text = r.abar_string();
    } else {
      const QPoly p = a.op == "pa" ? T.p_a(x, y) : T.p_complement(x, y);
      j["kind"] = a.op == "pa" ? "PA" : "P_complement";
      j.update(p_form(p));
      text = p.to_string();
    }
  } else {
    throw std::invalid_argument("unknown poly operation '" + a.op + "'");
  }
  emit(c, j, text);
  return kPass;
}

std::string dot_label(const VElement& v) { return format(v); }

int cmd_poset(const Common& c, const Args& a) {
  const auto W = load_system(need(c.system, "--W"));
  SpringerPoset V(*W);
  std::vector<VElement> elems;
  std::optional<std::pair<VElement, VElement>> range;
  if (!a.w.empty() || !a.v.empty()) {
    range.emplace(parse_velement(*W, need(a.w, "--w")), parse_velement(*W, need(a.v, "--v")));
    elems = V.interval(range->first, range->second);
  } else {
    if (!W->is_finite()) throw InfiniteGroupError("the whole poset is infinite; give --w and --v");
    elems = V.elements();
    std::stable_sort(elems.begin(), elems.end(), [](const VElement& x, const VElement& y) { return v_dim(x) < v_dim(y); });
  }

  if (a.op == "interval" || a.op == "elements") {
    json list = json::array();
    std::string text;
    for (const auto& e : elems) {
      list.push_back({{"element", velement_to_json(e)}, {"text", format(e)}, {"d", v_dim(e)}});
      text += format(e) + "  d=" + std::to_string(v_dim(e)) + "\n";
    }
    emit(c, json{{"size", elems.size()}, {"elements", list}}, text + std::to_string(elems.size()) + " elements");
  } else if (a.op == "mobius") {
    if (!range) throw std::invalid_argument("mobius needs --w and --v");
    const long mu = V.mobius(range->first, range->second);
    emit(c, json{{"mobius", mu}}, std::to_string(mu));
  } else if (a.op == "hasse") {
    std::ostringstream dot;
    dot << "digraph V {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n";
    std::map<int, std::vector<std::size_t>> ranks;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      dot << "  n" << i << " [label=\"" << dot_label(elems[i]) << "\\nd=" << v_dim(elems[i]) << "\"];\n";
      ranks[v_dim(elems[i])].push_back(i);
    }
    for (const auto& [d, nodes] : ranks) {
      dot << "  { rank=same;";
      for (auto i : nodes) dot << " n" << i << ";";
      dot << " }\n";
    }
    for (auto [lo, hi] : V.hasse(elems)) dot << "  n" << lo << " -> n" << hi << ";\n";
    dot << "}\n";
    std::cout << dot.str();
  } else if (a.op == "edges") {
    json edges = json::array();
    std::string text;
    for (const auto& x : elems)
      for (const auto& y : elems)
        if (x != y && V.graph_edge(x, y)) {
          edges.push_back({{"from", velement_to_json(x)}, {"to", velement_to_json(y)}});
          text += format(x) + " -> " + format(y) + "\n";
        }
    emit(c, json{{"edges", edges}}, text + std::to_string(edges.size()) + " edges");
  } else {
    throw std::invalid_argument("unknown poset operation '" + a.op + "'");
  }
  return kPass;
}

int cmd_verify(const Common& c, const Args& a) {
  const auto W = load_system(need(c.system, "--W"));
  const HatConfig hat = load_hat_config(c.hat);
  VerifyOptions options;
  options.seed = a.seed;
  options.slow = c.slow;
  options.samples = a.samples;
  options.max_length = a.max_length;
  std::vector<std::string> suites;
  if (a.op == "all") suites = suite_names();
  else suites.push_back(a.op);
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw std::invalid_argument("unknown suite '" + s + "'");

  bool ok = true;
  json reports = json::array();
  const bool skip_infinite = a.op == "all" && !W->is_finite();
  json skipped = json::array();
  for (const auto& s : suites) {
    if (skip_infinite && suite_needs_finite(s)) {
      skipped.push_back(s);
      if (c.report == "text") std::cout << s << ": skipped, W is infinite\n";
      continue;
    }
    SuiteReport r = run_suite(s, *W, hat, options);
    ok = ok && r.ok();
    if (c.report == "text") std::cout << r.to_text() << std::flush;
    else reports.push_back(r.to_json());
  }
  if (c.report != "text") {
    const json out = suites.size() == 1 ? reports[0] : json{{"pass", ok}, {"reports", reports}, {"skipped", skipped}};
    if (a.out.empty() || a.out == "-") std::cout << out.dump(2) << '\n';
    else std::ofstream(a.out) << out.dump(2) << '\n';
  }
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Springer's poset V, twisted Bruhat orders and their R- and KL-polynomials"};
  app.set_version_flag("--version", std::string(COXKL_VERSION));
  app.require_subcommand(1);

  Common common;
  Args args;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--system,--W", common.system, "Coxeter system JSON file")->check(CLI::ExistingFile);
    sub->add_option("--report", common.report, "Output format")->check(CLI::IsMember({"json", "text"}));
  };

  auto* element = app.add_subcommand("element", "Word problem queries in W");
  add_common(element);
  element->add_option("op", args.op, "reduce | mul | inverse | length | descents | bruhat-leq")->required();
  element->add_option("--word", args.word, "Element as comma-separated generator names");
  element->add_option("--x", args.x);
  element->add_option("--y", args.y);

  auto* poly = app.add_subcommand("poly", "Single polynomials and JSONL tables");
  add_common(poly);
  poly->add_option("op", args.op, "r | p | q | b | c | cinv | ra | pa | pc | table")->required();
  poly->add_option("--hat", common.hat, "Hat config JSON file, or 'default'");
  poly->add_option("--cache", common.cache, "Directory for the on-disk R-tilde memo");
  poly->add_option("--x", args.x, "Element of W, or of Omega for ra/pa/pc");
  poly->add_option("--y", args.y);
  poly->add_option("--w", args.w, "Triple [I;a;b]");
  poly->add_option("--v", args.v);
  poly->add_option("--kind", args.kind, "Table kind: rtilde | P | Q | btilde | c");
  poly->add_option("--out", args.out, "Table output file (default stdout)");

  auto* poset = app.add_subcommand("poset", "Intervals, Hasse diagrams, Mobius values and graph edges of V");
  add_common(poset);
  poset->add_option("op", args.op, "elements | interval | hasse | mobius | edges")->required();
  poset->add_option("--w", args.w);
  poset->add_option("--v", args.v);

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  add_common(verify);
  verify->add_option("suite", args.op, "Suite name, or 'all'")->required();
  verify->add_option("--hat", common.hat, "Hat config JSON file, or 'default'");
  verify->add_flag("--slow", common.slow, "Lift sampling thresholds");
  verify->add_option("--seed", args.seed, "Sampling seed");
  verify->add_option("--samples", args.samples, "Sample size where a suite samples");
  verify->add_option("--max-length", args.max_length, "Length bound on a, b for infinite W");
  verify->add_option("--out", args.out, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (element->parsed()) return cmd_element(common, args);
    if (poly->parsed()) return cmd_poly(common, args);
    if (poset->parsed()) return cmd_poset(common, args);
    if (verify->parsed()) return cmd_verify(common, args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    // InfiniteGroupError, NotInOmegaError and non-Z[abar] inputs
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
