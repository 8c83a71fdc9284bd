#pragma once

// Finite groups given by explicit multiplication tables.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qcdense {

using Permutation = std::vector<std::uint32_t>;

/// Maximum order accepted by the table-based algorithms.
inline constexpr std::size_t kFiniteGroupSizeLimit = 10000;

/// Elements are indices 0..order-1; index 0 is the identity.
class FiniteGroup {
 public:
  /// Validates closure, identity (index 0), inverses and associativity
  /// (exhaustive for order <= 64, sampled above).
  FiniteGroup(std::string name, std::size_t order, std::vector<std::uint32_t> table);

  const std::string& name() const noexcept { return name_; }
  std::size_t order() const noexcept { return order_; }
  std::uint32_t identity() const noexcept { return 0; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table_[a * order_ + b]; }
  std::uint32_t inv(std::uint32_t a) const { return inverse_[a]; }
  std::uint32_t commutator(std::uint32_t a, std::uint32_t b) const {
    return mul(mul(inv(a), inv(b)), mul(a, b));
  }
  std::uint64_t element_order(std::uint32_t a) const;
  bool is_abelian() const;
  std::span<const std::uint32_t> table() const noexcept { return table_; }

  /// Permutation labels when the group was built from permutations.
  const std::vector<Permutation>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<Permutation> labels) { labels_ = std::move(labels); }

  /// Smallest subgroup containing the given elements.
  std::vector<std::uint32_t> closure(std::span<const std::uint32_t> gens) const;

  /// Greedy generating set: repeatedly adds the first element outside the
  /// current closure.
  std::vector<std::uint32_t> generators() const;

 private:
  std::string name_;
  std::size_t order_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inverse_;
  std::vector<Permutation> labels_;
};

using FiniteGroupPtr = std::shared_ptr<const FiniteGroup>;

/// F/F' written as Z/n_1 x ... x Z/n_k with n_1 | n_2 | ... | n_k, each > 1.
/// The trivial quotient has no factors.
struct FiniteAbelianDesc {
  std::vector<std::uint64_t> factors;
  /// coords[g] = coordinates of the image of g in the factor basis.
  std::vector<std::vector<std::uint64_t>> coords;

  std::uint64_t order() const;
};

using FiniteAbelianPtr = std::shared_ptr<const FiniteAbelianDesc>;

// ---- constructors --------------------------------------------------------

/// Closure of permutation generators on {0..degree-1}. Throws SizeLimit if
/// the generated group exceeds kFiniteGroupSizeLimit.
FiniteGroup permutation_group(std::string name, std::size_t degree,
                              const std::vector<Permutation>& gens);
FiniteGroup cyclic_group(std::uint64_t n);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

/// <a, b | a^n = 1, b^m = a^t, b a b^-1 = a^r>; requires r^m = 1 (mod n),
/// r t = t (mod n).
FiniteGroup metacyclic_group(std::string name, std::uint64_t n, std::uint64_t m,
                             std::uint64_t r, std::uint64_t t);

/// Split extension N x| K. `action[i]` is the automorphism of N (as a
/// permutation of element indices) attached to the i-th generator of K in
/// `k_gens`; it is extended to a homomorphism K -> Aut(N) and validated.
FiniteGroup semidirect_product(std::string name, const FiniteGroup& n, const FiniteGroup& k,
                               const std::vector<std::uint32_t>& k_gens,
                               const std::vector<Permutation>& action);

/// Extends a map on generators to a homomorphism src -> dst. Returns an
/// empty vector if the assignment is inconsistent.
std::vector<std::uint32_t> extend_homomorphism(const FiniteGroup& src, const FiniteGroup& dst,
                                               const std::vector<std::uint32_t>& gens,
                                               const std::vector<std::uint32_t>& images);

/// Built-in groups: "trivial", "A5", "S3", "S4", "A4", "Q8", "SL(2,3)", "Cn"
/// for any n, "Dn" (dihedral of order n). Throws InvalidArgument otherwise.
FiniteGroupPtr builtin_group(const std::string& id);

/// One representative of each isomorphism type of order <= 24.
std::vector<FiniteGroupPtr> small_group_catalog();

}  // namespace qcdense
