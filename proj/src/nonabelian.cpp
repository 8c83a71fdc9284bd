#include "qcdense/nonabelian.hpp"

#include <algorithm>
#include <numeric>

#include "qcdense/errors.hpp"

namespace qcdense {

namespace {

void check_size(const FiniteGroup& f) {
  if (f.order() > kFiniteGroupSizeLimit)
    throw SizeLimit("finite group of order " + std::to_string(f.order()) + " exceeds " +
                    std::to_string(kFiniteGroupSizeLimit));
}

// Abelian group on 0..n-1 given by its addition table; 0 is zero.
struct AbTable {
  std::size_t n = 1;
  std::vector<std::uint32_t> add{0};

  std::uint32_t sum(std::uint32_t a, std::uint32_t b) const { return add[a * n + b]; }
  std::uint32_t times(std::uint64_t k, std::uint32_t a) const {
    std::uint32_t acc = 0;
    for (std::uint64_t i = 0; i < k; ++i) acc = sum(acc, a);
    return acc;
  }
  std::uint32_t neg(std::uint32_t a) const {
    for (std::uint32_t b = 0; b < n; ++b)
      if (sum(a, b) == 0) return b;
    throw ClaimViolation("element without inverse");
  }
  std::uint64_t order_of(std::uint32_t a) const {
    std::uint64_t k = 1;
    for (std::uint32_t x = a; x != 0; x = sum(x, a)) ++k;
    return k;
  }
};

struct Quotient {
  AbTable table;
  std::vector<std::uint32_t> proj;  // element -> coset
  std::vector<std::uint32_t> rep;   // coset -> least element
};

Quotient quotient(const AbTable& a, const std::vector<std::uint32_t>& sub) {
  Quotient q;
  q.proj.assign(a.n, UINT32_MAX);
  for (std::uint32_t x = 0; x < a.n; ++x) {
    if (q.proj[x] != UINT32_MAX) continue;
    const auto c = static_cast<std::uint32_t>(q.rep.size());
    q.rep.push_back(x);
    for (std::uint32_t s : sub) q.proj[a.sum(x, s)] = c;
  }
  const std::size_t m = q.rep.size();
  q.table.n = m;
  q.table.add.assign(m * m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) q.table.add[i * m + j] = q.proj[a.sum(q.rep[i], q.rep[j])];
  return q;
}

// Cyclic basis (element, order) with orders descending, each later order
// dividing the earlier ones.
std::vector<std::pair<std::uint32_t, std::uint64_t>> decompose(const AbTable& a) {
  if (a.n == 1) return {};
  std::uint32_t g = 0;
  std::uint64_t big = 1;
  for (std::uint32_t x = 1; x < a.n; ++x) {
    const std::uint64_t o = a.order_of(x);
    if (o > big) {
      big = o;
      g = x;
    }
  }
  std::vector<std::uint32_t> cyc;
  for (std::uint32_t x = 0, k = 0; k < big; ++k, x = a.sum(x, g)) cyc.push_back(x);
  const Quotient q = quotient(a, cyc);

  std::vector<std::pair<std::uint32_t, std::uint64_t>> basis{{g, big}};
  for (const auto& [yb, d] : decompose(q.table)) {
    const std::uint32_t y = q.rep[yb];
    const std::uint32_t dy = a.times(d, y);
    const auto it = std::ranges::find(cyc, dy);
    const auto s = static_cast<std::uint64_t>(it - cyc.begin());
    if (it == cyc.end() || s % d != 0) throw ClaimViolation("cyclic summand lift failed");
    const std::uint32_t h = a.sum(y, a.neg(a.times(s / d, g)));
    if (a.order_of(h) != d) throw ClaimViolation("lifted basis element has the wrong order");
    basis.emplace_back(h, d);
  }
  return basis;
}

}  // namespace

std::vector<std::uint32_t> derived_subgroup(const FiniteGroup& f) {
  check_size(f);
  const auto n = static_cast<std::uint32_t>(f.order());
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> comms;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      const std::uint32_t c = f.commutator(a, b);
      if (!seen[c]) {
        seen[c] = 1;
        comms.push_back(c);
      }
    }
  auto sub = f.closure(comms);
  std::ranges::sort(sub);
  return sub;
}

bool is_perfect(const FiniteGroup& f) { return derived_subgroup(f).size() == f.order(); }

FiniteAbelianDesc abelianization(const FiniteGroup& f) {
  const auto derived = derived_subgroup(f);
  AbTable whole;
  whole.n = f.order();
  whole.add.assign(f.table().begin(), f.table().end());
  // Cosets of a normal subgroup; the induced operation is abelian.
  const Quotient q = quotient(whole, derived);
  auto basis = decompose(q.table);
  std::ranges::reverse(basis);

  FiniteAbelianDesc out;
  for (const auto& b : basis) out.factors.push_back(b.second);
  std::vector<std::vector<std::uint64_t>> qcoords(q.table.n);
  std::vector<std::uint64_t> c(basis.size(), 0);
  std::size_t filled = 0;
  while (true) {
    std::uint32_t x = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) x = q.table.sum(x, q.table.times(c[i], basis[i].first));
    if (filled > 0 && !qcoords[x].empty())
      throw ClaimViolation("invariant-factor basis is not independent");
    qcoords[x] = c;
    ++filled;
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == basis[i].second) c[i++] = 0;
    if (i == c.size()) break;
  }
  if (filled != q.table.n) throw ClaimViolation("invariant-factor basis does not span");
  out.coords.resize(f.order());
  for (std::uint32_t g = 0; g < f.order(); ++g) out.coords[g] = qcoords[q.proj[g]];
  return out;
}

GroupDesc with_finite_factor(GroupDesc a, FiniteGroupPtr f) {
  if (!f) throw InvalidArgument("finite factor is null");
  if (a.kind == GroupKind::ProductWithFinite) throw KindMismatch("abelian side already has a finite factor");
  auto ab = std::make_shared<const FiniteAbelianDesc>(abelianization(*f));
  return GroupDesc::product_with_finite(std::move(a), std::move(f), std::move(ab));
}

SuperSeq lift_to_finite(const SuperSeq& seq, FiniteGroupPtr f) {
  GroupDesc g = with_finite_factor(seq.group(), f);
  SequenceSpec spec{"with_finite_factor", {{"base", seq.spec().generator}}};
  for (const auto& p : seq.spec().params) spec.params.push_back(p);
  spec.params.emplace_back("finite", f->name());
  SuperSeq out(g, WithFiniteElem{seq.limit(), f->identity()}, std::move(spec));
  for (const auto& m : seq.members()) {
    Provenance meta{"lift", {}, std::nullopt, {m.meta}};
    out.add(WithFiniteElem{m.value, f->identity()}, std::move(meta));
  }
  return out;
}

Certificate certify_qc_with_finite_factor(const SuperSeq& e_seq, FiniteGroupPtr f, Complexity bound,
                                          const SweepOptions& options) {
  const SuperSeq lifted = lift_to_finite(e_seq, std::move(f));
  return certify_qc(lifted, lifted.group(), bound, options);
}

}  // namespace qcdense
