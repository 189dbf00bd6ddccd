#pragma once

#include <memory>
#include <string>
#include <vector>

#include "coxkl/coxeter.hpp"
#include "coxkl/io.hpp"

namespace coxkl::testing {

inline std::string data_path(const std::string& rel) { return std::string(COXKL_DATA_DIR) + "/" + rel; }

inline std::unique_ptr<CoxeterSystem> system_file(const std::string& name) {
  return load_system(data_path("systems/" + name + ".json"));
}

/// Linear diagram s1 - s2 - ... with the given consecutive bonds.
inline std::unique_ptr<CoxeterSystem> linear(const std::vector<int>& bonds, const std::string& prefix = "s") {
  const int n = static_cast<int>(bonds.size()) + 1;
  std::vector<std::string> names;
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 2));
  for (int i = 0; i < n; ++i) {
    names.push_back(prefix + std::to_string(i + 1));
    m[i][i] = 1;
  }
  for (int i = 0; i + 1 < n; ++i) m[i][i + 1] = m[i + 1][i] = bonds[i];
  return std::make_unique<CoxeterSystem>(std::move(names), std::move(m));
}

inline std::unique_ptr<CoxeterSystem> type_a(int n) { return linear(std::vector<int>(n - 1, 3)); }

inline std::unique_ptr<CoxeterSystem> dihedral(int m, const std::string& s = "s", const std::string& t = "t") {
  return std::make_unique<CoxeterSystem>(std::vector<std::string>{s, t}, std::vector<std::vector<int>>{{1, m}, {m, 1}});
}

inline std::unique_ptr<CoxeterSystem> a1() {
  return std::make_unique<CoxeterSystem>(std::vector<std::string>{"s"}, std::vector<std::vector<int>>{{1}});
}

/// Collects move-only systems for range-for loops.
template <class... Ptr>
std::vector<std::unique_ptr<CoxeterSystem>> many(Ptr... systems) {
  std::vector<std::unique_ptr<CoxeterSystem>> out;
  (out.push_back(std::move(systems)), ...);
  return out;
}

inline Element el(const CoxeterSystem& W, const std::string& text) { return parse_element(W, text); }

}  // namespace coxkl::testing
