#pragma once

// Derived subgroups and abelianizations of finite groups, and qc-density
// certification on A x F for a finite group F.

#include <cstdint>
#include <vector>

#include "qcdense/certify.hpp"
#include "qcdense/finite_group.hpp"
#include "qcdense/groups.hpp"
#include "qcdense/sequences.hpp"

namespace qcdense {

/// Subgroup generated by all commutators, as a sorted element list.
/// Throws SizeLimit above kFiniteGroupSizeLimit.
std::vector<std::uint32_t> derived_subgroup(const FiniteGroup& f);

bool is_perfect(const FiniteGroup& f);

/// F/F' in invariant factors (ascending, each dividing the next), with the
/// coordinates of the image of every element of F.
FiniteAbelianDesc abelianization(const FiniteGroup& f);

/// A x F, with the abelianization of F attached.
GroupDesc with_finite_factor(GroupDesc a, FiniteGroupPtr f);

/// E x {e} inside A x F.
SuperSeq lift_to_finite(const SuperSeq& seq, FiniteGroupPtr f);

/// Certifies E x {e} in A x F at the bound. Characters are pairs
/// (chi_A, zeta); a pair with chi_A = 0 and zeta != 0 has no witness.
Certificate certify_qc_with_finite_factor(const SuperSeq& e_seq, FiniteGroupPtr f, Complexity bound,
                                          const SweepOptions& options = {});

}  // namespace qcdense
