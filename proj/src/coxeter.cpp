#include "coxkl/coxeter.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include "coxkl/errors.hpp"

namespace coxkl {

std::strong_ordering Element::operator<=>(const Element& o) const {
  if (auto c = word_.size() <=> o.word_.size(); c != 0) return c;
  return word_ <=> o.word_;
}

namespace {

bool valid_generator_name(const std::string& n) {
  if (n.empty() || n == "1" || n == "S") return false;
  return n.find_first_of(",;[]{}()* \t\n=") == std::string::npos && n != "∅";
}

// Integer Cartan entries with A(s,t)A(t,s) = 4cos^2(pi/m), oriented so that
// some positive d satisfies d_s A(s,t) = d_t A(t,s). d is tracked as 2^a 3^b.
std::optional<std::vector<std::int64_t>> integer_cartan(const std::vector<std::vector<int>>& m) {
  const int n = static_cast<int>(m.size());
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      if (r != s && m[r][s] != kInfinity && m[r][s] != 2 && m[r][s] != 3 && m[r][s] != 4 && m[r][s] != 6)
        return std::nullopt;

  std::vector<std::int64_t> a(n * n, 0);
  std::vector<std::pair<int, int>> weight(n);
  std::vector<bool> seen(n, false);
  for (int s = 0; s < n; ++s) a[s * n + s] = 2;

  auto ratio = [](int bond) { return bond == 4 ? 2 : (bond == 6 ? 3 : 1); };
  for (int root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    weight[root] = {0, 0};
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int s = q.front();
      q.pop();
      for (int t = 0; t < n; ++t) {
        if (t == s || m[s][t] == 2) continue;
        const int bond = m[s][t];
        if (bond == kInfinity || bond == 3) {
          const std::int64_t v = bond == 3 ? -1 : -2;
          a[s * n + t] = a[t * n + s] = v;
          if (!seen[t]) {
            seen[t] = true;
            weight[t] = weight[s];
            q.push(t);
          } else if (weight[t] != weight[s]) {
            return std::nullopt;
          }
          continue;
        }
        const int k = ratio(bond);
        auto scaled = [&](std::pair<int, int> w, int delta) {
          if (k == 2) w.first += delta;
          else w.second += delta;
          return w;
        };
        if (!seen[t]) {
          // A(s,t) = -1, A(t,s) = -k, so d_t = d_s / k.
          seen[t] = true;
          weight[t] = scaled(weight[s], -1);
          a[s * n + t] = -1;
          a[t * n + s] = -k;
          q.push(t);
        } else if (weight[t] == scaled(weight[s], -1)) {
          a[s * n + t] = -1;
          a[t * n + s] = -k;
        } else if (weight[t] == scaled(weight[s], 1)) {
          a[s * n + t] = -k;
          a[t * n + s] = -1;
        } else {
          return std::nullopt;
        }
      }
    }
  }
  return a;
}

}  // namespace

CoxeterSystem::CoxeterSystem(std::vector<std::string> generators, std::vector<std::vector<int>> matrix)
    : rank_(static_cast<int>(generators.size())),
      names_(std::move(generators)),
      matrix_(std::move(matrix)),
      ring_(ScalarRing::integers()) {
  if (rank_ < 1 || rank_ > kMaxGenerators) throw std::invalid_argument("rank must be between 1 and 64");
  if (static_cast<int>(matrix_.size()) != rank_) throw std::invalid_argument("Coxeter matrix size does not match generators");
  for (int r = 0; r < rank_; ++r) {
    if (!valid_generator_name(names_[r])) throw std::invalid_argument("invalid generator name '" + names_[r] + "'");
    for (int s = 0; s < r; ++s)
      if (names_[r] == names_[s]) throw std::invalid_argument("duplicate generator name '" + names_[r] + "'");
    if (static_cast<int>(matrix_[r].size()) != rank_) throw std::invalid_argument("Coxeter matrix is not square");
  }
  for (int r = 0; r < rank_; ++r) {
    if (matrix_[r][r] != 1) throw std::invalid_argument("Coxeter matrix diagonal must be 1");
    for (int s = 0; s < rank_; ++s) {
      if (r == s) continue;
      if (matrix_[r][s] != matrix_[s][r]) throw std::invalid_argument("Coxeter matrix is not symmetric");
      if (matrix_[r][s] != kInfinity && matrix_[r][s] < 2) throw std::invalid_argument("bond orders must be >= 2 or infinite");
    }
  }

  neighbours_.resize(rank_);
  for (int r = 0; r < rank_; ++r)
    for (int s = 0; s < rank_; ++s)
      if (r != s && matrix_[r][s] != 2) neighbours_[r].push_back(static_cast<Gen>(s));

  if (auto a = integer_cartan(matrix_)) {
    integer_cartan_ = true;
    cartan_ = std::move(*a);
    return;
  }
  int conductor = 1;
  for (int r = 0; r < rank_; ++r)
    for (int s = 0; s < rank_; ++s)
      if (r != s && matrix_[r][s] != kInfinity) conductor = std::lcm(conductor, matrix_[r][s]);
  ring_ = ScalarRing::cyclotomic(conductor);
  const int d = ring_.degree();
  cartan_.assign(static_cast<std::size_t>(rank_) * rank_ * d, 0);
  for (int r = 0; r < rank_; ++r)
    for (int s = 0; s < rank_; ++s) {
      std::vector<std::int64_t> v;
      if (r == s) v = ring_.from_int(2);
      else if (matrix_[r][s] == kInfinity) v = ring_.from_int(-2);
      else {
        v = ring_.two_cos(conductor / matrix_[r][s]);
        for (auto& c : v) c = -c;
      }
      std::copy(v.begin(), v.end(), cartan_.begin() + (static_cast<std::size_t>(r) * rank_ + s) * d);
    }
}

std::span<const std::int64_t> CoxeterSystem::cartan(Gen s, Gen t) const {
  const int d = ring_.degree();
  return {cartan_.data() + (static_cast<std::size_t>(s) * rank_ + t) * d, static_cast<std::size_t>(d)};
}

std::optional<Gen> CoxeterSystem::find_generator(std::string_view name) const {
  for (int i = 0; i < rank_; ++i)
    if (names_[i] == name) return static_cast<Gen>(i);
  return std::nullopt;
}

Gen CoxeterSystem::generator_index(std::string_view name) const {
  if (auto g = find_generator(name)) return *g;
  throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
}

Element CoxeterSystem::generator(Gen s) const {
  if (s >= rank_) throw std::invalid_argument("generator index out of range");
  return Element(this, {s});
}

void CoxeterSystem::check_element(const Element& x) const {
  if (&x.system() != this) throw std::invalid_argument("element belongs to a different Coxeter system");
}

void CoxeterSystem::check_same(const Element& x, const Element& y) const {
  check_element(x);
  check_element(y);
}

CoxeterSystem::Matrix CoxeterSystem::identity_matrix() const {
  const int d = ring_.degree();
  Matrix m(static_cast<std::size_t>(rank_) * rank_ * d, 0);
  for (int s = 0; s < rank_; ++s) m[(static_cast<std::size_t>(s) * rank_ + s) * d] = 1;
  return m;
}

std::span<std::int64_t> CoxeterSystem::column(Matrix& m, Gen s) const {
  const std::size_t len = static_cast<std::size_t>(rank_) * ring_.degree();
  return {m.data() + s * len, len};
}

std::span<const std::int64_t> CoxeterSystem::column(const Matrix& m, Gen s) const {
  const std::size_t len = static_cast<std::size_t>(rank_) * ring_.degree();
  return {m.data() + s * len, len};
}

// (g s)(e_t) = g(e_t) - A(s,t) g(e_s): only columns adjacent to s change.
void CoxeterSystem::apply_right(Matrix& m, Gen s) const {
  const int d = ring_.degree();
  auto cs = column(m, s);
  std::vector<std::int64_t> old(cs.begin(), cs.end());
  for (auto& c : cs) c = -c;
  for (Gen t : neighbours_[s]) {
    auto ct = column(m, t);
    auto k = cartan(s, t);
    if (d == 1) {
      const std::int64_t kk = k[0];
      for (std::size_t i = 0; i < ct.size(); ++i) ct[i] = checked::sub(ct[i], checked::mul(kk, old[i]));
    } else {
      for (int row = 0; row < rank_; ++row)
        ring_.sub_mul(ct.subspan(row * d, d), k, std::span<const std::int64_t>(old).subspan(row * d, d));
    }
  }
}

// s(v) = v - (sum_u A(s,u) v_u) e_s.
void CoxeterSystem::apply_left(std::span<std::int64_t> v, Gen s) const {
  const int d = ring_.degree();
  if (d == 1) {
    std::int64_t acc = 0;
    for (int u = 0; u < rank_; ++u)
      if (v[u] != 0) acc = checked::add(acc, checked::mul(cartan(s, static_cast<Gen>(u))[0], v[u]));
    v[s] = checked::sub(v[s], acc);
    return;
  }
  std::vector<std::int64_t> acc(d, 0), prod(d);
  for (int u = 0; u < rank_; ++u) {
    auto vu = v.subspan(u * d, d);
    ring_.mul(cartan(s, static_cast<Gen>(u)), vu, prod);
    for (int i = 0; i < d; ++i) acc[i] = checked::add(acc[i], prod[i]);
  }
  for (int i = 0; i < d; ++i) v[s * d + i] = checked::sub(v[s * d + i], acc[i]);
}

// Roots have all coordinates of one sign, so the coordinate sum decides.
int CoxeterSystem::root_sign(std::span<const std::int64_t> root) const {
  const int d = ring_.degree();
  if (d == 1) {
    for (auto c : root)
      if (c != 0) return c > 0 ? 1 : -1;
    return 0;
  }
  std::vector<std::int64_t> sum(d, 0);
  for (int u = 0; u < rank_; ++u)
    for (int i = 0; i < d; ++i) sum[i] = checked::add(sum[i], root[u * d + i]);
  return ring_.sign(sum);
}

CoxeterSystem::Matrix CoxeterSystem::matrix_of(const Element& x) const {
  Matrix m = identity_matrix();
  for (Gen s : x.word()) apply_right(m, s);
  return m;
}

CoxeterSystem::Matrix CoxeterSystem::matrix_of_inverse(const Element& x) const {
  Matrix m = identity_matrix();
  for (auto it = x.word().rbegin(); it != x.word().rend(); ++it) apply_right(m, *it);
  return m;
}

Element CoxeterSystem::reduce(std::span<const Gen> word) const {
  for (Gen s : word)
    if (s >= rank_) throw std::invalid_argument("generator index out of range");
  // h is the inverse of the product; its right descents are the product's
  // left descents, so stripping the least one each time yields ShortLex.
  Matrix h = identity_matrix();
  for (auto it = word.rbegin(); it != word.rend(); ++it) apply_right(h, *it);
  Word out;
  out.reserve(word.size());
  for (;;) {
    int found = -1;
    for (int s = 0; s < rank_; ++s)
      if (root_sign(column(h, static_cast<Gen>(s))) < 0) {
        found = s;
        break;
      }
    if (found < 0) break;
    out.push_back(static_cast<Gen>(found));
    apply_right(h, static_cast<Gen>(found));
  }
  return Element(this, std::move(out));
}

Element CoxeterSystem::reduce_names(const std::vector<std::string>& names) const {
  Word w;
  w.reserve(names.size());
  for (const auto& n : names) w.push_back(generator_index(n));
  return reduce(w);
}

Element CoxeterSystem::mul(const Element& x, const Element& y) const {
  check_same(x, y);
  if (x.is_identity()) return y;
  if (y.is_identity()) return x;
  Word w = x.word();
  w.insert(w.end(), y.word().begin(), y.word().end());
  return reduce(w);
}

Element CoxeterSystem::inv(const Element& x) const {
  check_element(x);
  Word w(x.word().rbegin(), x.word().rend());
  return reduce(w);
}

Element CoxeterSystem::left_mul(Gen s, const Element& x) const {
  check_element(x);
  if (!x.word().empty() && x.word().front() == s) return Element(this, Word(x.word().begin() + 1, x.word().end()));
  Word w;
  w.reserve(x.word().size() + 1);
  w.push_back(s);
  w.insert(w.end(), x.word().begin(), x.word().end());
  return reduce(w);
}

Element CoxeterSystem::right_mul(const Element& x, Gen s) const {
  check_element(x);
  Word w = x.word();
  w.push_back(s);
  return reduce(w);
}

bool CoxeterSystem::is_descent(const Element& x, Gen s, Side side) const {
  check_element(x);
  if (side == Side::Left && !x.word().empty() && x.word().front() == s) return true;
  const Matrix m = side == Side::Right ? matrix_of(x) : matrix_of_inverse(x);
  return root_sign(column(m, s)) < 0;
}

GenSet CoxeterSystem::descents(const Element& x, Side side) const {
  check_element(x);
  const Matrix m = side == Side::Right ? matrix_of(x) : matrix_of_inverse(x);
  GenSet out;
  for (int s = 0; s < rank_; ++s)
    if (root_sign(column(m, static_cast<Gen>(s))) < 0) out.insert(static_cast<Gen>(s));
  return out;
}

GenSet CoxeterSystem::support(const Element& x) const {
  check_element(x);
  GenSet out;
  for (Gen s : x.word()) out.insert(s);
  return out;
}

std::vector<std::vector<std::int64_t>> CoxeterSystem::inversion_roots(const Element& x) const {
  check_element(x);
  // The i-th inversion root is (s_1 ... s_{i-1})(e_{s_i}), a column of the prefix matrix.
  Matrix prefix = identity_matrix();
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(x.word().size());
  for (Gen s : x.word()) {
    auto col = column(prefix, s);
    out.emplace_back(col.begin(), col.end());
    apply_right(prefix, s);
  }
  return out;
}

std::vector<Reflection> CoxeterSystem::inversions(const Element& x) const {
  auto roots = inversion_roots(x);
  std::vector<Reflection> out;
  out.reserve(roots.size());
  const Word& w = x.word();
  for (std::size_t i = 0; i < w.size(); ++i) {
    Word t(w.begin(), w.begin() + i + 1);
    t.insert(t.end(), w.rend() - i, w.rend());
    out.push_back(Reflection{reduce(t), std::move(roots[i])});
  }
  std::sort(out.begin(), out.end());
  return out;
}

GenSet CoxeterSystem::root_support(std::span<const std::int64_t> root) const {
  const int d = ring_.degree();
  GenSet out;
  for (int u = 0; u < rank_; ++u)
    for (int i = 0; i < d; ++i)
      if (root[u * d + i] != 0) {
        out.insert(static_cast<Gen>(u));
        break;
      }
  return out;
}

bool CoxeterSystem::is_reflection(const Element& x) const {
  if (x.length() % 2 == 0) return false;
  for (const auto& t : inversions(x))
    if (t.element == x) return true;
  return false;
}

Reflection CoxeterSystem::reflection(const Element& t) const {
  if (t.length() % 2 == 1)
    for (auto& r : inversions(t))
      if (r.element == t) return r;
  throw std::invalid_argument("element " + format(t) + " is not a reflection");
}

bool CoxeterSystem::bruhat_leq(const Element& x, const Element& y) const {
  check_same(x, y);
  Element a = x, b = y;
  for (;;) {
    if (a.length() > b.length()) return false;
    if (a.length() == b.length()) return a == b;
    if (a.is_identity()) return true;
    // s = first letter of b is a left descent; its tail is canonical for s*b.
    const Gen s = b.word().front();
    Element sb(this, Word(b.word().begin() + 1, b.word().end()));
    if (is_descent(a, s, Side::Left)) a = left_mul(s, a);
    b = std::move(sb);
  }
}

std::pair<Element, Element> CoxeterSystem::coset_decompose(const Element& x, GenSet I) const {
  check_element(x);
  Matrix m = matrix_of(x);
  Word stripped;
  for (;;) {
    int found = -1;
    for (Gen s : I.members())
      if (s < rank_ && root_sign(column(m, s)) < 0) {
        found = s;
        break;
      }
    if (found < 0) break;
    stripped.push_back(static_cast<Gen>(found));
    apply_right(m, static_cast<Gen>(found));
  }
  Word uw = x.word();
  uw.insert(uw.end(), stripped.begin(), stripped.end());
  Word vw(stripped.rbegin(), stripped.rend());
  return {reduce(uw), reduce(vw)};
}

std::pair<Element, Element> CoxeterSystem::left_coset_decompose(const Element& x, GenSet I) const {
  auto [u, v] = coset_decompose(inv(x), I);
  return {inv(v), inv(u)};
}

std::vector<std::vector<Gen>> CoxeterSystem::components(GenSet I) const {
  std::vector<std::vector<Gen>> out;
  GenSet left = I & all();
  while (!left.empty()) {
    std::vector<Gen> comp;
    std::vector<Gen> stack{left.members().front()};
    left.erase(stack.back());
    while (!stack.empty()) {
      Gen s = stack.back();
      stack.pop_back();
      comp.push_back(s);
      for (Gen t : neighbours_[s])
        if (left.contains(t)) {
          left.erase(t);
          stack.push_back(t);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

namespace {

// Finite-type classification of one connected Coxeter graph.
std::optional<std::string> classify(const std::vector<Gen>& comp, const std::vector<std::vector<int>>& m) {
  const int n = static_cast<int>(comp.size());
  if (n == 1) return "A1";
  std::vector<std::vector<int>> adj(n);
  int edges = 0, big = 0, label = 3;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int b = m[comp[i]][comp[j]];
      if (b == 2) continue;
      if (b == kInfinity) return std::nullopt;
      adj[i].push_back(j);
      adj[j].push_back(i);
      ++edges;
      if (b > 3) {
        ++big;
        label = b;
      }
    }
  if (edges != n - 1) return std::nullopt;  // connected, so a cycle exists
  if (n == 2) {
    if (label == 3) return "A2";
    if (label == 4) return "B2";
    if (label == 6) return "G2";
    return "I2(" + std::to_string(label) + ")";
  }
  if (big > 1 || label > 5) return std::nullopt;
  int branch = -1;
  for (int i = 0; i < n; ++i) {
    if (adj[i].size() > 3) return std::nullopt;
    if (adj[i].size() == 3) {
      if (branch >= 0) return std::nullopt;
      branch = i;
    }
  }
  if (branch >= 0) {
    if (big) return std::nullopt;
    std::vector<int> arms;
    for (int start : adj[branch]) {
      int len = 1, prev = branch, cur = start;
      while (adj[cur].size() == 2) {
        int next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = next;
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return "D" + std::to_string(n);
    if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4) return "E" + std::to_string(n);
    return std::nullopt;
  }
  if (!big) return "A" + std::to_string(n);
  // A path with one heavy edge: locate it along the path.
  int end = 0;
  while (adj[end].size() != 1) ++end;
  std::vector<int> path{end};
  while (static_cast<int>(path.size()) < n) {
    int cur = path.back();
    for (int nb : adj[cur])
      if (path.size() < 2 || nb != path[path.size() - 2]) {
        path.push_back(nb);
        break;
      }
  }
  int pos = -1;
  for (int i = 0; i + 1 < n; ++i)
    if (m[comp[path[i]]][comp[path[i + 1]]] > 3) pos = i;
  const bool at_end = pos == 0 || pos == n - 2;
  if (label == 4) {
    if (at_end) return "B" + std::to_string(n);
    if (n == 4) return "F4";
    return std::nullopt;
  }
  if (label == 5 && at_end && n <= 4) return "H" + std::to_string(n);
  return std::nullopt;
}

}  // namespace

std::optional<std::string> CoxeterSystem::finite_type(GenSet I) const {
  std::string out;
  for (const auto& comp : components(I)) {
    auto t = classify(comp, matrix_);
    if (!t) return std::nullopt;
    if (!out.empty()) out += "x";
    out += *t;
  }
  return out;
}

bool CoxeterSystem::is_quotient_finite(GenSet I) const {
  for (const auto& comp : components(all())) {
    GenSet c;
    for (Gen s : comp) c.insert(s);
    if (!c.is_subset_of(I) && !classify(comp, matrix_)) return false;
  }
  return true;
}

Element CoxeterSystem::longest_element(GenSet I) const {
  if (!is_finite(I)) throw InfiniteGroupError("infinite parabolic: W_" + format_set(I) + " has no longest element");
  Matrix m = identity_matrix();
  Word w;
  for (;;) {
    int found = -1;
    for (Gen s : I.members())
      if (root_sign(column(m, s)) > 0) {
        found = s;
        break;
      }
    if (found < 0) break;
    w.push_back(static_cast<Gen>(found));
    apply_right(m, static_cast<Gen>(found));
  }
  return reduce(w);
}

std::vector<Element> CoxeterSystem::enumerate(GenSet I, CosetKind kind, std::optional<int> max_len) const {
  if (!max_len) {
    const bool finite = kind == CosetKind::Parabolic ? is_finite(I) : is_quotient_finite(I);
    if (!finite) throw InfiniteGroupError("unbounded enumeration of an infinite set; pass a length bound");
  }
  const GenSet steps = kind == CosetKind::Parabolic ? I : all();
  std::vector<Element> out{identity()};
  std::vector<Element> layer{identity()};
  for (int len = 1; !layer.empty() && (!max_len || len <= *max_len); ++len) {
    std::set<Word> next;
    for (const auto& x : layer) {
      // W_I is prefix-closed and W^I suffix-closed, so grow on the matching side.
      if (kind == CosetKind::Parabolic) {
        const Matrix m = matrix_of(x);
        for (Gen s : steps.members())
          if (root_sign(column(m, s)) > 0) next.insert(right_mul(x, s).word());
      } else {
        const Matrix m = matrix_of_inverse(x);
        for (Gen s : steps.members()) {
          if (root_sign(column(m, s)) < 0) continue;
          Element y = left_mul(s, x);
          if (in_quotient(y, I)) next.insert(y.word());
        }
      }
    }
    layer.clear();
    for (const auto& w : next) layer.push_back(Element(this, w));
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::string CoxeterSystem::format(const Element& x) const {
  if (x.is_identity()) return "1";
  std::string out;
  for (std::size_t i = 0; i < x.word().size(); ++i) {
    if (i) out += ',';
    out += names_[x.word()[i]];
  }
  return out;
}

std::string CoxeterSystem::format_compact(const Element& x) const {
  if (x.is_identity()) return "1";
  std::string out;
  for (Gen s : x.word()) out += names_[s];
  return out;
}

std::string CoxeterSystem::format_set(GenSet I) const {
  std::string out = "{";
  bool first = true;
  for (Gen s : I.members()) {
    if (!first) out += ',';
    first = false;
    out += names_[s];
  }
  return out + "}";
}

}  // namespace coxkl
