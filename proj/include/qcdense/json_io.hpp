#pragma once

// JSON forms of groups, elements, characters, sequences, certificates and
// escape reports. Integers that may exceed 64 bits are decimal strings;
// points of T are "num/den" strings.

#include "json.hpp"

#include "qcdense/certify.hpp"
#include "qcdense/duality.hpp"
#include "qcdense/finite_group.hpp"
#include "qcdense/groups.hpp"
#include "qcdense/sequences.hpp"

namespace qcdense {

using Json = nlohmann::ordered_json;

Json to_json(const GroupDesc& g);
GroupDesc group_from_json(const Json& j);

Json to_json(const Element& x);
Element element_from_json(const Json& j);

Json to_json(const Character& chi);
Character character_from_json(const Json& j);

Json to_json(const Provenance& meta);
Json to_json(const SequenceSpec& spec);
Json to_json(const SuperSeq& seq);
Json to_json(const WitnessRecord& rec);
Json to_json(const Certificate& cert);
Json to_json(const EscapeReport& report);

/// {"name", "order", "table": [[...], ...]}.
Json to_json(const FiniteGroup& f);

/// Accepts {"order": n, "table": [[...]]} (row i, column j holds i*j, index 0
/// the identity) or {"degree": d, "generators": [[...], ...]} permutations.
/// An optional "name" is kept.
FiniteGroupPtr finite_group_from_json(const Json& j);

/// A built-in id ("A5", "S3", "C6", ...) or a catalog name ("C2xS3", ...).
FiniteGroupPtr finite_group_by_name(const std::string& name);

}  // namespace qcdense
