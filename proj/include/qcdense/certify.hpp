#pragma once

// Witness finders, the bounded qc-density and generation certifiers, and
// the convergence (escape) report for the profinite sequence.
//
// A certificate is a bounded statement: every nonzero character up to the
// complexity bound is paired with a member of the truncated sequence whose
// value escapes T+ (qc-density) or is nonzero (generation).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcdense/duality.hpp"
#include "qcdense/sequences.hpp"

namespace qcdense {

enum class WitnessMethod {
  TorusFormula,
  MinimalN,
  SolenoidSplit,
  FanComponent,
  BruteForce,
  NonzeroScan,  // generation certificates
};

std::string_view method_name(WitnessMethod m);

struct WitnessRecord {
  Character character;
  Element witness;
  UnitRational value;
  WitnessMethod method = WitnessMethod::BruteForce;
  /// Set for product sweeps: the record covers every character whose first
  /// nonzero component is character.components[*leading_component]; the
  /// witness is zero off that coordinate, so the tail does not matter.
  std::optional<std::size_t> leading_component;
};

enum class CertificateMode { QcDensity, Generation };

struct Certificate {
  GroupDesc group;
  SequenceSpec sequence;
  std::uint64_t bound = 1;
  CertificateMode mode = CertificateMode::QcDensity;
  DualScope scope = DualScope::Full;
  std::vector<WitnessRecord> records;
  /// First character (in enumeration order) without a witness.
  std::optional<Character> failed;

  bool certified() const noexcept { return !failed.has_value(); }
};

/// Worker count from QCDENSE_THREADS, else the hardware concurrency.
unsigned default_thread_count();

struct SweepOptions {
  unsigned threads = 0;  // 0: default_thread_count()
  DualScope scope = DualScope::Full;
  bool stop_on_failure = true;
};

// ---- constructive finders ---------------------------------------------------------

/// phi(1/(2|m|)); value phi(1/2). Throws TruncationTooSmall if the point is
/// not a member of seq.
WitnessRecord witness_torus(std::int64_t m, const SuperSeq& seq);

/// Minimal-n construction on H: n = min{j : b | k_j}, then the least m with
/// m chi(k_{n-1} v) outside T+, witness m k_{n-1} v.
WitnessRecord witness_profinite(const ProfiniteChar& chi, const PrimeList& primes, const SuperSeq& seq);

/// b = 1: torus formula through S''. b >= 2: minimal-n construction on the
/// restriction -a/b to N, mapped to the S' point pi(-m k_{n-1}, 0).
WitnessRecord witness_solenoid(const SolenoidChar& chi, const PrimeList& primes, const SuperSeq& seq);

/// Least-index nonzero component, component witness, coordinate embedding.
WitnessRecord witness_fan(const ProductChar& chi, const std::vector<SuperSeq>& parts,
                          const SuperSeq& fan_seq);

/// First member (in sequence order) with value outside T+ (qc) or nonzero
/// (generation).
std::optional<WitnessRecord> brute_force_witness(const SuperSeq& seq, const Character& chi,
                                                 CertificateMode mode = CertificateMode::QcDensity);

/// Independent re-check of a record against the sequence.
bool verify_record(const SuperSeq& seq, const WitnessRecord& rec, CertificateMode mode);

// ---- certifiers -----------------------------------------------------------------------

using RecordSink = std::function<void(const WitnessRecord&)>;

struct SweepSummary {
  std::size_t records = 0;
  std::optional<Character> failed;
};

/// Streaming sweep: records are delivered to `sink` in enumeration order.
SweepSummary sweep(const SuperSeq& seq, const GroupDesc& g, Complexity bound, CertificateMode mode,
                   const SweepOptions& options, const RecordSink& sink);

Certificate certify_qc(const SuperSeq& seq, const GroupDesc& g, Complexity bound,
                       const SweepOptions& options = {});
Certificate check_generation(const SuperSeq& seq, const GroupDesc& g, Complexity bound,
                             const SweepOptions& options = {});

// ---- convergence ---------------------------------------------------------------------

struct EscapeReport {
  std::size_t n = 0;
  std::vector<Element> members;  // truncation members outside W_n, in order
  bool stable = true;            // unchanged when every level is filled to k_{j+1}
  std::size_t count() const noexcept { return members.size(); }
};

/// seq must come from profinite_sequence.
EscapeReport escape_report(const SuperSeq& seq, std::size_t n);

}  // namespace qcdense
