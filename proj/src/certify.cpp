#include "qcdense/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "qcdense/errors.hpp"

namespace qcdense {

namespace {

constexpr std::size_t kBlockSize = 8192;

bool escapes(const UnitRational& v, CertificateMode mode) {
  return mode == CertificateMode::QcDensity ? !in_tplus(v) : !v.is_zero();
}

// ---- minimal-n construction ---------------------------------------------------

struct MinimalN {
  std::size_t n = 0;       // min{j : W_j in ker chi}
  std::uint64_t m = 0;     // least multiplier leaving T+
  mpz_class witness;       // m k_{n-1}
};

MinimalN minimal_n_witness(const UnitRational& q, const KSequence& ks) {
  const auto b = static_cast<std::uint64_t>(q.den());
  if (b < 2) throw InvalidArgument("profinite witness needs a nonzero character (b >= 2)");
  const PrimeList& primes = ks.primes();
  // b | k_j  <=>  every p_i^e || b has i < j and e <= j.
  std::size_t n = 0;
  std::uint64_t rest = b;
  for (std::size_t i = 0; i < primes.size() && rest > 1; ++i) {
    std::size_t e = 0;
    while (rest % primes[i] == 0) {
      rest /= primes[i];
      ++e;
    }
    if (e > 0) n = std::max({n, i + 1, e});
  }
  if (rest > 1)
    throw UnsupportedBound("denominator " + std::to_string(b) + " has a prime outside the working prefix");
  // The witness lives at level n-1, and profinite_sequence stops at level
  // primes.size()-1.
  if (n > primes.size())
    throw TruncationTooSmall("denominator " + std::to_string(b) + " needs level " + std::to_string(n - 1) +
                             ", beyond the working prefix");
  if (ks.k_mod(n, b) != 0 || ks.k_mod(n - 1, b) == 0)
    throw ClaimViolation("n is not min{j : W_j in ker chi} for " + q.to_string());
  // chi(k_{n-1} v) = a k_{n-1} / b, nonzero by minimality.
  const std::uint64_t x = static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(static_cast<std::uint64_t>(q.num())) * ks.k_mod(n - 1, b) % b);
  if (x == 0) throw ClaimViolation("chi(k_{n-1} v) = 0 for " + q.to_string());
  const std::uint64_t order = b / std::gcd(x, b);
  MinimalN out;
  out.n = n;
  for (std::uint64_t m = 1; m <= order; ++m) {
    const std::uint64_t v = static_cast<std::uint64_t>(static_cast<unsigned __int128>(m) * x % b);
    if (!residue_in_tplus(v, b)) {
      out.m = m;
      break;
    }
  }
  if (out.m == 0) throw ClaimViolation("no multiple of a nonzero element leaves T+");
  out.witness = ks.k(n - 1) * out.m;
  return out;
}

std::string needs_msg(const MinimalN& w) {
  return "witness " + std::to_string(w.m) + " k_" + std::to_string(w.n - 1) +
         " v needs n_max >= " + std::to_string(w.n - 1) + " and m_cap >= " + std::to_string(w.m);
}

WitnessRecord make_record(const SuperSeq& seq, const Character& chi, Element witness,
                          WitnessMethod method) {
  if (!seq.contains(witness))
    throw TruncationTooSmall("witness " + to_string(witness) + " is not in the truncation");
  UnitRational value = eval_char(seq.group(), chi, witness);
  return WitnessRecord{chi, std::move(witness), value, method, std::nullopt};
}

WitnessRecord torus_impl(std::int64_t m, const SuperSeq& seq) {
  if (m == 0) throw InvalidArgument("torus witness needs m != 0");
  if (seq.group().kind != GroupKind::Torus) throw KindMismatch("torus witness on a non-torus sequence");
  const std::int64_t n = m < 0 ? -m : m;
  Element w = phi(1, 2 * n);
  if (!seq.contains(w)) throw TruncationTooSmall("torus witness needs N >= " + std::to_string(n));
  return make_record(seq, TorusChar{m}, std::move(w), WitnessMethod::TorusFormula);
}

WitnessRecord profinite_impl(const ProfiniteChar& chi, const KSequence& ks, const SuperSeq& seq) {
  if (seq.group().kind != GroupKind::Profinite)
    throw KindMismatch("profinite witness on a non-profinite sequence");
  const MinimalN w = minimal_n_witness(chi.q, ks);
  Element x = ProfiniteElem::integer(w.witness);
  if (!seq.contains(x)) throw TruncationTooSmall(needs_msg(w));
  return make_record(seq, chi, std::move(x), WitnessMethod::MinimalN);
}

WitnessRecord solenoid_impl(const SolenoidChar& chi, const KSequence& ks, const SuperSeq& seq) {
  if (chi.a == 0) throw InvalidArgument("solenoid witness needs q != 0");
  if (seq.group().kind != GroupKind::Solenoid)
    throw KindMismatch("solenoid witness on a non-solenoid sequence");
  if (chi.b == 1) {
    // chi vanishes on N and factors through C/N = T as the torus character a.
    const std::int64_t n = chi.a < 0 ? -chi.a : chi.a;
    Element w = SolenoidPoint(mpq_class(1, 2 * static_cast<unsigned long>(n)), ProfiniteElem::integer(0));
    if (!seq.contains(w)) throw TruncationTooSmall("solenoid witness needs N >= " + std::to_string(n));
    return make_record(seq, chi, std::move(w), WitnessMethod::SolenoidSplit);
  }
  // Restriction to N = pi({0} x H): h -> phi(-a (h mod b) / b).
  const MinimalN w = minimal_n_witness(UnitRational(-chi.a, chi.b), ks);
  Element x = SolenoidPoint(mpq_class(-w.witness), ProfiniteElem::integer(0));
  if (!seq.contains(x)) throw TruncationTooSmall(needs_msg(w));
  return make_record(seq, chi, std::move(x), WitnessMethod::SolenoidSplit);
}

// ---- finder tree ---------------------------------------------------------------------

class Finder {
 public:
  Finder(const SuperSeq& seq, CertificateMode mode, const std::vector<SuperSeq>* parts = nullptr)
      : seq_(seq), mode_(mode) {
    const GroupDesc& g = seq.group();
    if (g.kind == GroupKind::Profinite || g.kind == GroupKind::Solenoid) ks_.emplace(g.primes);
    if (g.kind == GroupKind::Product) {
      for (std::size_t j = 0; j < g.parts.size(); ++j) {
        if (parts != nullptr) {
          if (parts->size() != g.parts.size() || !(parts->at(j).group() == g.parts[j]))
            throw KindMismatch("fan parts do not match the product group");
          owned_.push_back(std::make_unique<SuperSeq>(parts->at(j)));
        } else {
          owned_.push_back(std::make_unique<SuperSeq>(component_members(seq, j)));
        }
      }
    }
    if (g.kind == GroupKind::ProductWithFinite) {
      const GroupDesc& a = g.abelian_part();
      auto sub = std::make_unique<SuperSeq>(a, group_zero(a), SequenceSpec{"abelian_side", {}});
      for (const auto& m : seq.members()) {
        const auto& p = std::get<WithFiniteElem>(m.value);
        if (p.finite == g.finite->identity()) sub->add(*p.abelian, m.meta);
      }
      owned_.push_back(std::move(sub));
    }
    for (const auto& s : owned_) children_.push_back(std::make_unique<Finder>(*s, mode_));
  }

  std::optional<WitnessRecord> find(const Character& chi) const {
    if (auto r = constructive(chi)) return r;
    return brute_force_witness(seq_, chi, mode_);
  }

 private:
  std::optional<WitnessRecord> constructive(const Character& chi) const {
    const GroupDesc& g = seq_.group();
    try {
      switch (g.kind) {
        case GroupKind::Torus:
          if (mode_ == CertificateMode::QcDensity) return torus_impl(std::get<TorusChar>(chi).m, seq_);
          return std::nullopt;
        case GroupKind::Profinite:
          if (mode_ == CertificateMode::QcDensity)
            return profinite_impl(std::get<ProfiniteChar>(chi), *ks_, seq_);
          return std::nullopt;
        case GroupKind::Solenoid:
          if (mode_ == CertificateMode::QcDensity)
            return solenoid_impl(std::get<SolenoidChar>(chi), *ks_, seq_);
          return std::nullopt;
        case GroupKind::Cyclic:
          return std::nullopt;
        case GroupKind::Product: return product(std::get<ProductChar>(chi));
        case GroupKind::ProductWithFinite: return with_finite(std::get<WithFiniteChar>(chi));
      }
    } catch (const TruncationTooSmall&) {
      return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<WitnessRecord> product(const ProductChar& chi) const {
    std::size_t j = 0;
    while (j < chi.components.size() && is_trivial(chi.components[j])) ++j;
    if (j == chi.components.size()) throw InvalidArgument("fan witness needs a nonzero character");
    auto inner = children_.at(j)->find(chi.components[j]);
    if (!inner) return std::nullopt;
    auto w = std::get<ProductElem>(group_zero(seq_.group()));
    w.coords[j] = std::move(inner->witness);
    WitnessRecord rec = make_record(seq_, chi, std::move(w), WitnessMethod::FanComponent);
    rec.leading_component = j;
    return rec;
  }

  std::optional<WitnessRecord> with_finite(const WithFiniteChar& chi) const {
    if (is_trivial(*chi.abelian)) return std::nullopt;
    auto inner = children_.at(0)->find(*chi.abelian);
    if (!inner) return std::nullopt;
    WitnessRecord rec = make_record(
        seq_, chi, WithFiniteElem{std::move(inner->witness), seq_.group().finite->identity()}, inner->method);
    return rec;
  }

  const SuperSeq& seq_;
  CertificateMode mode_;
  std::optional<KSequence> ks_;
  std::vector<std::unique_ptr<SuperSeq>> owned_;
  std::vector<std::unique_ptr<Finder>> children_;
};

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = n;
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

// Leading-component classes of a product group, in sweep order.
std::vector<Character> product_classes(const GroupDesc& g, Complexity bound, DualScope scope) {
  struct Item {
    std::uint64_t cplx;
    std::size_t j;
    Character comp;
  };
  std::vector<Item> items;
  for (std::size_t j = 0; j < g.parts.size(); ++j)
    for_each_char(g.parts[j], bound, scope, [&](const Character& c) {
      items.push_back({complexity(c), j, c});
      return true;
    });
  std::ranges::stable_sort(items, [](const Item& a, const Item& b) {
    if (a.cplx != b.cplx) return a.cplx < b.cplx;
    if (a.j != b.j) return a.j < b.j;
    return compare_chars(a.comp, b.comp) < 0;
  });
  std::vector<Character> out;
  out.reserve(items.size());
  for (auto& it : items) {
    auto c = std::get<ProductChar>(trivial_character(g));
    c.components[it.j] = std::move(it.comp);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::string_view method_name(WitnessMethod m) {
  switch (m) {
    case WitnessMethod::TorusFormula: return "TorusFormula";
    case WitnessMethod::MinimalN: return "MinimalN";
    case WitnessMethod::SolenoidSplit: return "SolenoidSplit";
    case WitnessMethod::FanComponent: return "FanComponent";
    case WitnessMethod::BruteForce: return "BruteForce";
    case WitnessMethod::NonzeroScan: return "NonzeroScan";
  }
  return "?";
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("QCDENSE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

WitnessRecord witness_torus(std::int64_t m, const SuperSeq& seq) { return torus_impl(m, seq); }

namespace {

// k_n tables are costly for long prime lists; keep one per list.
const KSequence& shared_ks(const PrimeList& primes) {
  static std::mutex mu;
  static std::map<PrimeList, std::unique_ptr<const KSequence>> cache;
  const std::lock_guard lock(mu);
  auto& slot = cache[primes];
  if (!slot) slot = std::make_unique<const KSequence>(primes);
  return *slot;
}

}  // namespace

WitnessRecord witness_profinite(const ProfiniteChar& chi, const PrimeList& primes, const SuperSeq& seq) {
  return profinite_impl(chi, shared_ks(primes), seq);
}

WitnessRecord witness_solenoid(const SolenoidChar& chi, const PrimeList& primes, const SuperSeq& seq) {
  return solenoid_impl(chi, shared_ks(primes), seq);
}

WitnessRecord witness_fan(const ProductChar& chi, const std::vector<SuperSeq>& parts, const SuperSeq& fan_seq) {
  if (fan_seq.group().kind != GroupKind::Product) throw KindMismatch("fan witness needs a product sequence");
  if (is_trivial(chi)) throw InvalidArgument("fan witness needs a nonzero character");
  check_character(fan_seq.group(), chi);
  // Only the component route; no scan over the product.
  std::size_t j = 0;
  while (is_trivial(chi.components[j])) ++j;
  auto inner = Finder(parts[j], CertificateMode::QcDensity).find(chi.components[j]);
  if (!inner) throw TruncationTooSmall("component " + std::to_string(j) + " has no witness");
  auto w = std::get<ProductElem>(group_zero(fan_seq.group()));
  w.coords[j] = std::move(inner->witness);
  WitnessRecord rec = make_record(fan_seq, chi, std::move(w), WitnessMethod::FanComponent);
  rec.leading_component = j;
  return rec;
}

std::optional<WitnessRecord> brute_force_witness(const SuperSeq& seq, const Character& chi,
                                                 CertificateMode mode) {
  const WitnessMethod method =
      mode == CertificateMode::QcDensity ? WitnessMethod::BruteForce : WitnessMethod::NonzeroScan;
  for (const auto& m : seq.members()) {
    const UnitRational v = eval_char(seq.group(), chi, m.value);
    if (escapes(v, mode)) return WitnessRecord{chi, m.value, v, method, std::nullopt};
  }
  return std::nullopt;
}

bool verify_record(const SuperSeq& seq, const WitnessRecord& rec, CertificateMode mode) {
  const GroupDesc& g = seq.group();
  if (eval_char(g, rec.character, rec.witness) != rec.value) return false;
  if (!escapes(rec.value, mode)) return false;
  if (!seq.contains(rec.witness)) return false;
  if (rec.leading_component) {
    const std::size_t j = *rec.leading_component;
    const auto& chi = std::get<ProductChar>(rec.character);
    const auto& w = std::get<ProductElem>(rec.witness);
    if (j >= chi.components.size() || is_trivial(chi.components[j])) return false;
    for (std::size_t i = 0; i < j; ++i)
      if (!is_trivial(chi.components[i])) return false;
    for (std::size_t i = 0; i < w.coords.size(); ++i)
      if (i != j && !group_equal(g.parts[i], w.coords[i], group_zero(g.parts[i]))) return false;
  }
  return true;
}

SweepSummary sweep(const SuperSeq& seq, const GroupDesc& g, Complexity bound, CertificateMode mode,
                   const SweepOptions& options, const RecordSink& sink) {
  if (!(seq.group() == g)) throw KindMismatch("sequence does not live in the certified group");
  const unsigned threads = options.threads == 0 ? default_thread_count() : options.threads;
  const Finder finder(seq, mode);
  SweepSummary summary;
  bool stop = false;

  auto run_block = [&](const std::vector<Character>& block, bool product_classes_mode) {
    std::vector<std::optional<WitnessRecord>> results(block.size());
    parallel_for(block.size(), threads, [&](std::size_t i) {
      results[i] = finder.find(block[i]);
      if (results[i] && !verify_record(seq, *results[i], mode))
        throw ClaimViolation("witness for " + to_string(block[i]) + " failed re-verification");
      if (product_classes_mode && results[i] && !results[i]->leading_component)
        throw Error("leading-component sweep is inconclusive for " + to_string(block[i]) +
                    ": the sequence has members off the coordinate axes");
    });
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (results[i]) {
        sink(*results[i]);
        ++summary.records;
        continue;
      }
      if (!summary.failed) summary.failed = block[i];
      if (options.stop_on_failure) {
        stop = true;
        return;
      }
    }
  };

  if (g.kind == GroupKind::Product) {
    const auto classes = product_classes(g, bound, options.scope);
    for (std::size_t lo = 0; lo < classes.size() && !stop; lo += kBlockSize) {
      std::vector<Character> block(classes.begin() + static_cast<std::ptrdiff_t>(lo),
                                   classes.begin() + static_cast<std::ptrdiff_t>(std::min(classes.size(), lo + kBlockSize)));
      run_block(block, true);
    }
    return summary;
  }

  std::vector<Character> block;
  block.reserve(kBlockSize);
  for_each_char(g, bound, options.scope, [&](const Character& c) {
    block.push_back(c);
    if (block.size() == kBlockSize) {
      run_block(block, false);
      block.clear();
    }
    return !stop;
  });
  if (!stop && !block.empty()) run_block(block, false);
  return summary;
}

namespace {

Certificate run_certificate(const SuperSeq& seq, const GroupDesc& g, Complexity bound,
                            CertificateMode mode, const SweepOptions& options) {
  Certificate cert;
  cert.group = g;
  cert.sequence = seq.spec();
  cert.bound = bound.bound();
  cert.mode = mode;
  cert.scope = options.scope;
  const SweepSummary s =
      sweep(seq, g, bound, mode, options, [&](const WitnessRecord& r) { cert.records.push_back(r); });
  cert.failed = s.failed;
  return cert;
}

}  // namespace

Certificate certify_qc(const SuperSeq& seq, const GroupDesc& g, Complexity bound, const SweepOptions& options) {
  return run_certificate(seq, g, bound, CertificateMode::QcDensity, options);
}

Certificate check_generation(const SuperSeq& seq, const GroupDesc& g, Complexity bound,
                             const SweepOptions& options) {
  return run_certificate(seq, g, bound, CertificateMode::Generation, options);
}

EscapeReport escape_report(const SuperSeq& seq, std::size_t n) {
  const GroupDesc& g = seq.group();
  if (g.kind != GroupKind::Profinite || seq.spec().generator != "profinite")
    throw InvalidArgument("escape_report needs a profinite_sequence truncation");
  const std::size_t n_max = std::stoull(seq.spec().param("n_max").value());
  const std::string cap_text = seq.spec().param("m_cap").value();
  const std::optional<std::uint64_t> m_cap =
      cap_text == "none" ? std::nullopt : std::optional<std::uint64_t>(std::stoull(cap_text));

  EscapeReport report;
  report.n = n;
  // in_Wn reports missing precision for n beyond the prime list.
  (void)in_Wn(ProfiniteElem::integer(0), g.primes, n);
  for (const auto& m : seq.members())
    if (!in_Wn(std::get<ProfiniteElem>(m.value), g.primes, n)) report.members.push_back(m.value);

  // Levels j >= n only contribute multiples of k_j, which lie in W_n. For
  // j < n, look for a value m k_j (m above the cap) that would be new.
  const KSequence ks(g.primes);
  for (std::size_t j = 0; j <= n_max && j < n && report.stable; ++j) {
    const mpz_class& full = ks.k(j + 1);
    if (!m_cap || mpz_class(*m_cap) >= full) continue;
    const std::size_t limit = 2 * seq.size() + 2;
    mpz_class m = *m_cap;
    for (std::size_t step = 0; step < limit; ++step) {
      ++m;
      if (m > full) break;
      const ProfiniteElem value = ProfiniteElem::integer(m * ks.k(j));
      if (!in_Wn(value, g.primes, n) && !seq.contains(value)) {
        report.stable = false;
        break;
      }
    }
  }
  return report;
}

}  // namespace qcdense
