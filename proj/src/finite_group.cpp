#include "qcdense/finite_group.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "qcdense/errors.hpp"

namespace qcdense {

namespace {

Permutation compose(const Permutation& a, const Permutation& b) {
  // (a*b)(x) = a(b(x)): apply b first.
  Permutation out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[x] = a[b[x]];
  return out;
}

void check_permutation(const Permutation& p, std::size_t degree) {
  if (p.size() != degree) throw InvalidArgument("permutation has wrong degree");
  std::vector<bool> seen(degree, false);
  for (auto x : p) {
    if (x >= degree || seen[x]) throw InvalidArgument("not a permutation");
    seen[x] = true;
  }
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(r) * b % m);
    b = static_cast<std::uint64_t>(static_cast<unsigned __int128>(b) * b % m);
    e >>= 1;
  }
  return r;
}

}  // namespace

FiniteGroup::FiniteGroup(std::string name, std::size_t order, std::vector<std::uint32_t> table)
    : name_(std::move(name)), order_(order), table_(std::move(table)) {
  if (order_ == 0) throw InvalidArgument("group order must be positive");
  if (order_ > kFiniteGroupSizeLimit) throw SizeLimit("finite group too large");
  if (table_.size() != order_ * order_) throw InvalidArgument("table size does not match order");
  for (auto x : table_)
    if (x >= order_) throw InvalidArgument("table entry out of range (closure)");
  for (std::uint32_t a = 0; a < order_; ++a)
    if (mul(0, a) != a || mul(a, 0) != a) throw InvalidArgument("element 0 is not the identity");
  inverse_.assign(order_, order_);
  for (std::uint32_t a = 0; a < order_; ++a) {
    // Latin-square rows guarantee uniqueness once associativity holds.
    std::vector<bool> row(order_, false);
    for (std::uint32_t b = 0; b < order_; ++b) {
      if (row[mul(a, b)]) throw InvalidArgument("table row is not a permutation");
      row[mul(a, b)] = true;
      if (mul(a, b) == 0) inverse_[a] = b;
    }
    if (mul(inverse_[a], a) != 0) throw InvalidArgument("left and right inverses differ");
  }
  const std::size_t step = order_ <= 64 ? 1 : order_ / 37 + 1;
  for (std::uint32_t a = 0; a < order_; a += static_cast<std::uint32_t>(step))
    for (std::uint32_t b = 0; b < order_; b += static_cast<std::uint32_t>(step))
      for (std::uint32_t c = 0; c < order_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw InvalidArgument("table is not associative");
}

std::uint64_t FiniteGroup::element_order(std::uint32_t a) const {
  std::uint64_t k = 1;
  for (std::uint32_t x = a; x != 0; x = mul(x, a)) ++k;
  return k;
}

bool FiniteGroup::is_abelian() const {
  for (std::uint32_t a = 0; a < order_; ++a)
    for (std::uint32_t b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::vector<std::uint32_t> FiniteGroup::closure(std::span<const std::uint32_t> gens) const {
  std::vector<bool> in(order_, false);
  std::vector<std::uint32_t> out{0};
  in[0] = true;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto g : gens) {
      const auto y = mul(out[i], g);
      if (!in[y]) {
        in[y] = true;
        out.push_back(y);
      }
    }
  std::ranges::sort(out);
  return out;
}

std::vector<std::uint32_t> FiniteGroup::generators() const {
  std::vector<std::uint32_t> gens;
  std::vector<bool> in(order_, false);
  in[0] = true;
  for (std::uint32_t a = 1; a < order_; ++a) {
    if (in[a]) continue;
    gens.push_back(a);
    in.assign(order_, false);
    for (auto x : closure(gens)) in[x] = true;
  }
  return gens;
}

std::uint64_t FiniteAbelianDesc::order() const {
  return std::accumulate(factors.begin(), factors.end(), std::uint64_t{1}, std::multiplies<>());
}

// ---- constructors ------------------------------------------------------------------

FiniteGroup permutation_group(std::string name, std::size_t degree,
                              const std::vector<Permutation>& gens) {
  Permutation id(degree);
  std::iota(id.begin(), id.end(), 0u);
  for (const auto& g : gens) check_permutation(g, degree);
  std::vector<Permutation> elems{id};
  std::map<Permutation, std::uint32_t> index{{id, 0}};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto& g : gens) {
      Permutation y = compose(elems[i], g);
      if (index.emplace(y, static_cast<std::uint32_t>(elems.size())).second) {
        elems.push_back(std::move(y));
        if (elems.size() > kFiniteGroupSizeLimit) throw SizeLimit("permutation group too large");
      }
    }
  const std::size_t n = elems.size();
  std::vector<std::uint32_t> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = index.at(compose(elems[a], elems[b]));
  FiniteGroup g(std::move(name), n, std::move(table));
  g.set_labels(std::move(elems));
  return g;
}

FiniteGroup cyclic_group(std::uint64_t n) {
  if (n == 0 || n > kFiniteGroupSizeLimit) throw SizeLimit("cyclic group order out of range");
  std::vector<std::uint32_t> table(n * n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b) table[a * n + b] = static_cast<std::uint32_t>((a + b) % n);
  return FiniteGroup("C" + std::to_string(n), n, std::move(table));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.order(), nb = b.order(), n = na * nb;
  if (n > kFiniteGroupSizeLimit) throw SizeLimit("direct product too large");
  // (x, y) -> x * nb + y keeps (e, e) at index 0.
  std::vector<std::uint32_t> table(n * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      table[i * n + j] = static_cast<std::uint32_t>(a.mul(i / nb, j / nb) * nb + b.mul(i % nb, j % nb));
  return FiniteGroup(a.name() + "x" + b.name(), n, std::move(table));
}

FiniteGroup metacyclic_group(std::string name, std::uint64_t n, std::uint64_t m, std::uint64_t r,
                             std::uint64_t t) {
  if (n == 0 || m == 0 || n * m > kFiniteGroupSizeLimit) throw SizeLimit("metacyclic order out of range");
  if (powmod(r, m, n) != 1 % n) throw InvalidArgument("r^m != 1 mod n");
  if ((static_cast<unsigned __int128>(r) * t) % n != t % n) throw InvalidArgument("r t != t mod n");
  // a^i b^j -> j * n + i
  const std::uint64_t order = n * m;
  std::vector<std::uint64_t> rpow(m);
  for (std::uint64_t j = 0; j < m; ++j) rpow[j] = powmod(r, j, n);
  std::vector<std::uint32_t> table(order * order);
  for (std::uint64_t x = 0; x < order; ++x)
    for (std::uint64_t y = 0; y < order; ++y) {
      const std::uint64_t i = x % n, j = x / n, k = y % n, l = y / n;
      // a^i b^j a^k b^l = a^(i + r^j k) b^(j + l), with b^m = a^t
      std::uint64_t ai = (i + rpow[j] * k) % n;
      std::uint64_t bj = j + l;
      if (bj >= m) {
        bj -= m;
        ai = (ai + t) % n;
      }
      table[x * order + y] = static_cast<std::uint32_t>(bj * n + ai);
    }
  return FiniteGroup(std::move(name), order, std::move(table));
}

std::vector<std::uint32_t> extend_homomorphism(const FiniteGroup& src, const FiniteGroup& dst,
                                               const std::vector<std::uint32_t>& gens,
                                               const std::vector<std::uint32_t>& images) {
  constexpr std::uint32_t kUnset = ~0u;
  std::vector<std::uint32_t> f(src.order(), kUnset);
  f[0] = dst.identity();
  std::vector<std::uint32_t> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const auto x = queue[i];
      const auto y = src.mul(x, gens[g]);
      const auto fy = dst.mul(f[x], images[g]);
      if (f[y] == kUnset) {
        f[y] = fy;
        queue.push_back(y);
      }
    }
  if (queue.size() != src.order()) return {};
  // f is determined by the spanning tree; it is a homomorphism iff it
  // respects right multiplication by every generator.
  for (std::uint32_t x = 0; x < src.order(); ++x)
    for (std::size_t g = 0; g < gens.size(); ++g)
      if (f[src.mul(x, gens[g])] != dst.mul(f[x], images[g])) return {};
  return f;
}

FiniteGroup semidirect_product(std::string name, const FiniteGroup& n, const FiniteGroup& k,
                               const std::vector<std::uint32_t>& k_gens,
                               const std::vector<Permutation>& action) {
  if (k_gens.size() != action.size()) throw InvalidArgument("one automorphism per generator");
  const std::size_t nn = n.order(), nk = k.order(), order = nn * nk;
  if (order > kFiniteGroupSizeLimit) throw SizeLimit("semidirect product too large");
  for (const auto& a : action) {
    check_permutation(a, nn);
    for (std::uint32_t x = 0; x < nn; ++x)
      for (std::uint32_t y = 0; y < nn; ++y)
        if (a[n.mul(x, y)] != n.mul(a[x], a[y])) throw InvalidArgument("action is not an automorphism");
  }
  // Aut(N) as a permutation group, then K -> Aut(N).
  std::vector<Permutation> gens = action;
  const FiniteGroup aut = permutation_group("aut", nn, gens);
  std::vector<std::uint32_t> images;
  for (const auto& a : action) {
    const auto& labels = aut.labels();
    images.push_back(static_cast<std::uint32_t>(std::ranges::find(labels, a) - labels.begin()));
  }
  const auto hom = extend_homomorphism(k, aut, k_gens, images);
  if (hom.empty()) throw InvalidArgument("action does not define a homomorphism");
  // (x, s)(y, t) = (x * s(y), s t); (x, s) -> s * nn + x
  std::vector<std::uint32_t> table(order * order);
  for (std::uint32_t a = 0; a < order; ++a)
    for (std::uint32_t b = 0; b < order; ++b) {
      const std::uint32_t x = a % nn, s = a / nn, y = b % nn, t = b / nn;
      const auto& phi = aut.labels()[hom[s]];
      table[a * order + b] = static_cast<std::uint32_t>(k.mul(s, t) * nn + n.mul(x, phi[y]));
    }
  return FiniteGroup(std::move(name), order, std::move(table));
}

// ---- catalog ---------------------------------------------------------------------

namespace {

FiniteGroup named(FiniteGroup g, std::string name) {
  FiniteGroup out(std::move(name), g.order(), {g.table().begin(), g.table().end()});
  out.set_labels(g.labels());
  return out;
}

FiniteGroup dihedral(std::uint64_t order) {
  return metacyclic_group("D" + std::to_string(order), order / 2, 2, order / 2 - 1, 0);
}

FiniteGroup dicyclic(std::uint64_t order) {
  const std::uint64_t n = order / 2;
  return metacyclic_group("Dic" + std::to_string(order / 4), n, 2, n - 1, n / 2);
}

FiniteGroup abelian(const std::vector<std::uint64_t>& factors) {
  FiniteGroup g = cyclic_group(factors.at(0));
  for (std::size_t i = 1; i < factors.size(); ++i) g = direct_product(g, cyclic_group(factors[i]));
  std::string name;
  for (std::size_t i = 0; i < factors.size(); ++i)
    name += (i ? "x" : "") + std::string("C") + std::to_string(factors[i]);
  return named(std::move(g), name);
}

// Automorphism of `g` determined by generator images.
Permutation automorphism(const FiniteGroup& g, const std::vector<std::uint32_t>& gens,
                         const std::vector<std::uint32_t>& images) {
  auto f = extend_homomorphism(g, g, gens, images);
  if (f.empty()) throw InvalidArgument("generator images do not define an endomorphism");
  return f;
}

FiniteGroup alternating5() {
  return permutation_group("A5", 5, {{1, 2, 0, 3, 4}, {1, 2, 3, 4, 0}});
}

FiniteGroup symmetric3() { return permutation_group("S3", 3, {{1, 0, 2}, {1, 2, 0}}); }
FiniteGroup symmetric4() { return permutation_group("S4", 4, {{1, 0, 2, 3}, {1, 2, 3, 0}}); }
FiniteGroup alternating4() { return permutation_group("A4", 4, {{1, 2, 0, 3}, {0, 2, 3, 1}}); }

FiniteGroup quaternion8() { return named(dicyclic(8), "Q8"); }

FiniteGroup sl23() {
  // Q8 x| C3 with the order-3 automorphism i -> j -> k -> i.
  const FiniteGroup q8 = quaternion8();
  // In metacyclic indexing a^i b^j -> j*4 + i: i = a (1), j = b (4), k = ab (5).
  const Permutation alpha = automorphism(q8, {1, 4}, {4, 5});
  return semidirect_product("SL(2,3)", q8, cyclic_group(3), {1}, {alpha});
}

}  // namespace

FiniteGroupPtr builtin_group(const std::string& id) {
  if (id == "trivial" || id == "C1") return std::make_shared<const FiniteGroup>(named(cyclic_group(1), "trivial"));
  if (id == "A5") return std::make_shared<const FiniteGroup>(alternating5());
  if (id == "S3") return std::make_shared<const FiniteGroup>(symmetric3());
  if (id == "S4") return std::make_shared<const FiniteGroup>(symmetric4());
  if (id == "A4") return std::make_shared<const FiniteGroup>(alternating4());
  if (id == "Q8") return std::make_shared<const FiniteGroup>(quaternion8());
  if (id == "SL(2,3)") return std::make_shared<const FiniteGroup>(sl23());
  if (id.size() > 1 && (id[0] == 'C' || id[0] == 'D') &&
      std::all_of(id.begin() + 1, id.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const std::uint64_t n = std::stoull(id.substr(1));
    if (id[0] == 'C') return std::make_shared<const FiniteGroup>(cyclic_group(n));
    if (n >= 4 && n % 2 == 0) return std::make_shared<const FiniteGroup>(dihedral(n));
  }
  throw InvalidArgument("unknown finite group '" + id + "'");
}

std::vector<FiniteGroupPtr> small_group_catalog() {
  std::vector<FiniteGroup> gs;
  // Abelian groups: every factorization into invariant factors.
  const std::vector<std::vector<std::uint64_t>> abelian_types = {
      {1},       {2},        {3},        {4},        {2, 2},    {5},       {6},
      {7},       {8},        {2, 4},     {2, 2, 2},  {9},       {3, 3},    {10},
      {11},      {12},       {2, 6},     {13},       {14},      {15},      {16},
      {4, 4},    {2, 8},     {2, 2, 4},  {2, 2, 2, 2}, {17},    {18},      {3, 6},
      {19},      {20},       {2, 10},    {21},       {22},      {23},      {24},
      {2, 12},   {2, 2, 6}};
  for (const auto& f : abelian_types) gs.push_back(abelian(f));

  // Dihedral groups of order 6..24.
  for (std::uint64_t n = 6; n <= 24; n += 2) gs.push_back(dihedral(n));
  // Dicyclic groups: Q8, Dic3, Q16, Dic5, Dic6.
  for (std::uint64_t n : {8, 12, 16, 20, 24}) gs.push_back(dicyclic(n));

  // Order 16.
  gs.push_back(metacyclic_group("C4:C4", 4, 4, 3, 0));
  gs.push_back(metacyclic_group("M16", 8, 2, 5, 0));
  gs.push_back(metacyclic_group("SD16", 8, 2, 3, 0));
  {
    const FiniteGroup c4c2 = abelian({4, 2});
    // Index (x, y) -> 2x + y for x in C4, y in C2: a = 2, b = 1.
    gs.push_back(semidirect_product("C2^2:C4", c4c2, cyclic_group(2), {1},
                                    {automorphism(c4c2, {2, 1}, {3, 1})}));
    gs.push_back(semidirect_product("Pauli", c4c2, cyclic_group(2), {1},
                                    {automorphism(c4c2, {2, 1}, {2, 5})}));
    gs.push_back(named(direct_product(cyclic_group(2), dihedral(8)), "C2xD8"));
    gs.push_back(named(direct_product(cyclic_group(2), quaternion8()), "C2xQ8"));
  }

  // Order 18: C3 x S3 and the generalized dihedral group of C3 x C3.
  gs.push_back(named(direct_product(cyclic_group(3), symmetric3()), "C3xS3"));
  {
    const FiniteGroup c33 = abelian({3, 3});
    Permutation inv(9);
    for (std::uint32_t x = 0; x < 9; ++x) inv[x] = c33.inv(x);
    gs.push_back(semidirect_product("C3^2:C2", c33, cyclic_group(2), {1}, {inv}));
  }

  // Order 20 and 21.
  gs.push_back(metacyclic_group("F20", 5, 4, 2, 0));
  gs.push_back(metacyclic_group("C7:C3", 7, 3, 2, 0));

  // Order 12 and 24.
  gs.push_back(alternating4());
  gs.push_back(symmetric4());
  gs.push_back(sl23());
  gs.push_back(named(direct_product(cyclic_group(2), alternating4()), "C2xA4"));
  gs.push_back(metacyclic_group("C3:C8", 3, 8, 2, 0));
  gs.push_back(named(direct_product(cyclic_group(4), symmetric3()), "C4xS3"));
  gs.push_back(named(direct_product(cyclic_group(2), dicyclic(12)), "C2xDic3"));
  gs.push_back(named(direct_product(cyclic_group(3), dihedral(8)), "C3xD8"));
  gs.push_back(named(direct_product(cyclic_group(3), quaternion8()), "C3xQ8"));
  gs.push_back(named(direct_product(abelian({2, 2}), symmetric3()), "C2^2xS3"));
  {
    // C3 x| D8 with kernel C2 x C2 = <r^2, s>: r inverts, s centralizes.
    const FiniteGroup d8 = dihedral(8);  // a = r (index 1), b = s (index 4)
    const FiniteGroup c3 = cyclic_group(3);
    const Permutation invert{0, 2, 1};
    const Permutation ident{0, 1, 2};
    // semidirect_product puts N first; here N = C3, K = D8.
    gs.push_back(semidirect_product("C3:D8", c3, d8, {1, 4}, {invert, ident}));
  }
  // Remaining order-16 group: C4 x C2 x C2 is abelian (listed above).

  std::vector<FiniteGroupPtr> out;
  out.reserve(gs.size());
  for (auto& g : gs) out.push_back(std::make_shared<const FiniteGroup>(std::move(g)));
  std::ranges::stable_sort(out, {}, [](const FiniteGroupPtr& g) { return g->order(); });
  return out;
}

}  // namespace qcdense
