#include "qcdense/json_io.hpp"

#include "qcdense/errors.hpp"
#include "qcdense/nonabelian.hpp"

namespace qcdense {

namespace {

template <typename T>
T get_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing JSON field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad JSON field \"") + key + "\": " + e.what());
  }
}

mpz_class parse_mpz(const std::string& s) {
  mpz_class z;
  if (s.empty() || z.set_str(s, 10) != 0) throw InvalidArgument("not an integer: " + s);
  return z;
}

mpq_class parse_mpq(const std::string& s) {
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) throw InvalidArgument("not a rational: " + s);
  q.canonicalize();
  return q;
}

Json primes_json(const PrimeList& primes) {
  Json a = Json::array();
  for (auto p : primes) a.push_back(p);
  return a;
}

std::string signed_fraction(std::int64_t a, std::int64_t b) {
  return b == 1 ? std::to_string(a) : std::to_string(a) + "/" + std::to_string(b);
}

}  // namespace

// ---- groups ------------------------------------------------------------------------

Json to_json(const GroupDesc& g) {
  Json j;
  j["kind"] = std::string(kind_name(g.kind));
  switch (g.kind) {
    case GroupKind::Torus: break;
    case GroupKind::Profinite:
    case GroupKind::Solenoid: j["primes"] = primes_json(g.primes); break;
    case GroupKind::Cyclic: j["n"] = g.modulus; break;
    case GroupKind::Product: {
      Json parts = Json::array();
      for (const auto& p : g.parts) parts.push_back(to_json(p));
      j["parts"] = std::move(parts);
      break;
    }
    case GroupKind::ProductWithFinite:
      j["abelian"] = to_json(g.abelian_part());
      j["finite"] = Json{{"name", g.finite->name()}, {"order", g.finite->order()}};
      j["abelianization"] = g.finite_ab->factors;
      break;
  }
  return j;
}

GroupDesc group_from_json(const Json& j) {
  const auto kind = get_field<std::string>(j, "kind");
  if (kind == "torus") return GroupDesc::torus();
  if (kind == "profinite") return GroupDesc::profinite(get_field<PrimeList>(j, "primes"));
  if (kind == "solenoid") return GroupDesc::solenoid(get_field<PrimeList>(j, "primes"));
  if (kind == "cyclic") return GroupDesc::cyclic(get_field<std::uint64_t>(j, "n"));
  if (kind == "product") {
    std::vector<GroupDesc> parts;
    for (const auto& p : get_field<Json>(j, "parts")) parts.push_back(group_from_json(p));
    return GroupDesc::product(std::move(parts));
  }
  if (kind == "product_with_finite") {
    const Json f = get_field<Json>(j, "finite");
    FiniteGroupPtr fg = f.contains("table") || f.contains("generators")
                            ? finite_group_from_json(f)
                            : finite_group_by_name(get_field<std::string>(f, "name"));
    return with_finite_factor(group_from_json(get_field<Json>(j, "abelian")), std::move(fg));
  }
  throw InvalidArgument("unknown group kind: " + kind);
}

// ---- elements ---------------------------------------------------------------------

Json to_json(const Element& x) {
  return std::visit(
      [](const auto& e) -> Json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, UnitRational>) {
          return e.to_string();
        } else if constexpr (std::is_same_v<T, ProfiniteElem>) {
          if (e.is_integer_point()) return Json{{"kind", "int_point"}, {"m", e.integer_value().get_str()}};
          Json digits = Json::array();
          for (const auto& d : e.digits())
            digits.push_back(Json{{"prime", d.prime}, {"exponent", d.exponent}, {"residue", std::to_string(d.residue)}});
          return Json{{"kind", "residues"}, {"digits", std::move(digits)}, {"truncated", e.truncated()}};
        } else if constexpr (std::is_same_v<T, SolenoidPoint>) {
          return Json{{"kind", "solenoid"}, {"r", e.r().get_str()}, {"h", to_json(Element(e.h()))}};
        } else if constexpr (std::is_same_v<T, CyclicElem>) {
          return Json{{"kind", "cyclic"}, {"value", e.value}};
        } else if constexpr (std::is_same_v<T, ProductElem>) {
          Json coords = Json::array();
          for (const auto& c : e.coords) coords.push_back(to_json(c));
          return Json{{"kind", "tuple"}, {"coords", std::move(coords)}};
        } else {
          return Json{{"kind", "with_finite"}, {"abelian", to_json(*e.abelian)}, {"finite", e.finite}};
        }
      },
      x);
}

Element element_from_json(const Json& j) {
  if (j.is_string()) return UnitRational::parse(j.get<std::string>());
  const auto kind = get_field<std::string>(j, "kind");
  if (kind == "int_point") return ProfiniteElem::integer(parse_mpz(get_field<std::string>(j, "m")));
  if (kind == "residues") {
    std::vector<ResidueDigit> digits;
    for (const auto& d : get_field<Json>(j, "digits"))
      digits.push_back(ResidueDigit{get_field<std::uint64_t>(d, "prime"), get_field<std::uint32_t>(d, "exponent"),
                                    std::stoull(get_field<std::string>(d, "residue"))});
    return ProfiniteElem::residues(std::move(digits), j.value("truncated", false));
  }
  if (kind == "solenoid") {
    Element h = element_from_json(get_field<Json>(j, "h"));
    if (!std::holds_alternative<ProfiniteElem>(h)) throw KindMismatch("solenoid h must be profinite");
    return SolenoidPoint(parse_mpq(get_field<std::string>(j, "r")), std::get<ProfiniteElem>(h));
  }
  if (kind == "cyclic") return CyclicElem{get_field<std::uint64_t>(j, "value")};
  if (kind == "tuple") {
    ProductElem p;
    for (const auto& c : get_field<Json>(j, "coords")) p.coords.push_back(element_from_json(c));
    return p;
  }
  if (kind == "with_finite")
    return WithFiniteElem{element_from_json(get_field<Json>(j, "abelian")), get_field<std::uint32_t>(j, "finite")};
  throw InvalidArgument("unknown element kind: " + kind);
}

// ---- characters -----------------------------------------------------------------

Json to_json(const Character& chi) {
  return std::visit(
      [](const auto& c) -> Json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TorusChar>) {
          return Json{{"kind", "torus"}, {"params", {{"m", c.m}}}};
        } else if constexpr (std::is_same_v<T, ProfiniteChar>) {
          return Json{{"kind", "profinite"}, {"params", {{"q", c.q.to_string()}}}};
        } else if constexpr (std::is_same_v<T, SolenoidChar>) {
          return Json{{"kind", "solenoid"}, {"params", {{"q", signed_fraction(c.a, c.b)}}}};
        } else if constexpr (std::is_same_v<T, CyclicChar>) {
          return Json{{"kind", "cyclic"}, {"params", {{"k", c.k}}}};
        } else if constexpr (std::is_same_v<T, ProductChar>) {
          Json comps = Json::array();
          for (const auto& x : c.components) comps.push_back(to_json(x));
          return Json{{"kind", "product"}, {"params", {{"components", std::move(comps)}}}};
        } else {
          return Json{{"kind", "with_finite"}, {"params", {{"abelian", to_json(*c.abelian)}, {"zeta", c.zeta}}}};
        }
      },
      chi);
}

Character character_from_json(const Json& j) {
  const auto kind = get_field<std::string>(j, "kind");
  const Json p = get_field<Json>(j, "params");
  if (kind == "torus") return TorusChar{get_field<std::int64_t>(p, "m")};
  if (kind == "profinite") return ProfiniteChar{UnitRational::parse(get_field<std::string>(p, "q"))};
  if (kind == "solenoid") {
    const mpq_class q = parse_mpq(get_field<std::string>(p, "q"));
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) throw ArithmeticOverflow("solenoid q too large");
    return solenoid_char(q.get_num().get_si(), q.get_den().get_si());
  }
  if (kind == "cyclic") return CyclicChar{get_field<std::uint64_t>(p, "k")};
  if (kind == "product") {
    ProductChar c;
    for (const auto& x : get_field<Json>(p, "components")) c.components.push_back(character_from_json(x));
    return c;
  }
  if (kind == "with_finite")
    return WithFiniteChar{character_from_json(get_field<Json>(p, "abelian")),
                          get_field<std::vector<std::uint64_t>>(p, "zeta")};
  throw InvalidArgument("unknown character kind: " + kind);
}

// ---- sequences and certificates ------------------------------------------------

Json to_json(const Provenance& meta) {
  Json j;
  j["source"] = meta.source;
  if (!meta.derivations.empty()) {
    Json d = Json::array();
    for (const auto& [n, m] : meta.derivations) d.push_back(Json::array({n, m}));
    j["derivations"] = std::move(d);
  }
  if (meta.component) j["component"] = *meta.component;
  if (!meta.inner.empty()) j["inner"] = to_json(meta.inner.front());
  return j;
}

Json to_json(const SequenceSpec& spec) {
  Json params = Json::object();
  for (const auto& [k, v] : spec.params) params[k] = v;
  return Json{{"generator", spec.generator}, {"params", std::move(params)}};
}

Json to_json(const SuperSeq& seq) {
  Json members = Json::array();
  for (const auto& m : seq.members())
    members.push_back(Json{{"value", to_json(m.value)}, {"meta", to_json(m.meta)}, {"arc", m.arc}});
  Json j;
  j["group"] = to_json(seq.group());
  j["sequence"] = to_json(seq.spec());
  j["limit"] = to_json(seq.limit());
  j["size"] = seq.size();
  j["members"] = std::move(members);
  return j;
}

Json to_json(const WitnessRecord& rec) {
  Json j;
  j["character"] = to_json(rec.character);
  j["witness"] = to_json(rec.witness);
  j["value"] = rec.value.to_string();
  j["method"] = std::string(method_name(rec.method));
  if (rec.leading_component) j["leading_component"] = *rec.leading_component;
  return j;
}

Json to_json(const Certificate& cert) {
  Json records = Json::array();
  for (const auto& r : cert.records) records.push_back(to_json(r));
  Json j;
  j["group"] = to_json(cert.group);
  j["sequence"] = to_json(cert.sequence);
  j["bound"] = cert.bound;
  j["mode"] = cert.mode == CertificateMode::QcDensity ? "qc" : "generation";
  j["scope"] = cert.scope == DualScope::Full ? "full" : "prefix_smooth";
  j["records"] = std::move(records);
  j["record_count"] = cert.records.size();
  j["status"] = cert.certified() ? "certified" : "failed";
  j["failed_character"] = cert.failed ? to_json(*cert.failed) : Json(nullptr);
  return j;
}

Json to_json(const EscapeReport& report) {
  Json members = Json::array();
  for (const auto& m : report.members) members.push_back(to_json(m));
  return Json{{"n", report.n}, {"count", report.count()}, {"stable", report.stable}, {"members", std::move(members)}};
}

// ---- finite groups -------------------------------------------------------------

Json to_json(const FiniteGroup& f) {
  Json rows = Json::array();
  const auto t = f.table();
  for (std::size_t i = 0; i < f.order(); ++i)
    rows.push_back(std::vector<std::uint32_t>(t.begin() + static_cast<std::ptrdiff_t>(i * f.order()),
                                              t.begin() + static_cast<std::ptrdiff_t>((i + 1) * f.order())));
  return Json{{"name", f.name()}, {"order", f.order()}, {"table", std::move(rows)}};
}

FiniteGroupPtr finite_group_from_json(const Json& j) {
  const std::string name = j.is_object() ? j.value("name", std::string("custom")) : "custom";
  if (j.is_object() && j.contains("table")) {
    const auto n = get_field<std::size_t>(j, "order");
    if (n == 0 || n > kFiniteGroupSizeLimit) throw SizeLimit("finite group order out of range");
    const auto rows = get_field<std::vector<std::vector<std::uint32_t>>>(j, "table");
    if (rows.size() != n) throw InvalidArgument("table must have order rows");
    std::vector<std::uint32_t> flat;
    flat.reserve(n * n);
    for (const auto& r : rows) {
      if (r.size() != n) throw InvalidArgument("table rows must have order entries");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return std::make_shared<const FiniteGroup>(name, n, std::move(flat));
  }
  if (j.is_object() && j.contains("generators")) {
    const auto degree = get_field<std::size_t>(j, "degree");
    const auto gens = get_field<std::vector<Permutation>>(j, "generators");
    return std::make_shared<const FiniteGroup>(permutation_group(name, degree, gens));
  }
  throw InvalidArgument("finite group JSON needs \"table\" or \"generators\"");
}

FiniteGroupPtr finite_group_by_name(const std::string& name) {
  try {
    return builtin_group(name);
  } catch (const InvalidArgument&) {
  }
  for (auto& g : small_group_catalog())
    if (g->name() == name) return g;
  throw InvalidArgument("unknown finite group: " + name);
}

}  // namespace qcdense
