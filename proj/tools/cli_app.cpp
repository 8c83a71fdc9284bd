#include "cli_app.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qcdense/certify.hpp"
#include "qcdense/errors.hpp"
#include "qcdense/json_io.hpp"
#include "qcdense/nonabelian.hpp"
#include "qcdense/sequences.hpp"

namespace qcdense::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command;
  std::string group = "torus";
  std::string primes;
  std::optional<std::uint64_t> primes_below;
  std::size_t n_max = 1;
  std::uint64_t N = 10;
  std::optional<std::uint64_t> m_cap;
  std::optional<std::uint64_t> bound;
  std::vector<std::string> singleton;
  std::string parts;
  std::string mode = "qc";
  std::string scope = "full";
  std::string finite_factor;
  std::string pushforward;
  std::optional<std::size_t> wn;
  std::optional<unsigned> threads;
  std::string out;
  bool summary = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

PrimeList working_primes(const RunConfig& cfg) {
  if (!cfg.primes.empty() && cfg.primes_below) throw InvalidArgument("give --primes or --primes-below, not both");
  if (!cfg.primes.empty()) {
    PrimeList primes;
    for (const auto& p : split(cfg.primes, ',')) {
      try {
        primes.push_back(std::stoull(p));
      } catch (const std::exception&) {
        throw InvalidArgument("bad prime: " + p);
      }
    }
    validate_primes(primes);
    return primes;
  }
  PrimeList primes = primes_below(cfg.primes_below.value_or(100));
  validate_primes(primes);
  return primes;
}

mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) throw InvalidArgument("not a rational: " + s);
  q.canonicalize();
  return q;
}

// A sequence of one basic kind, or the listed singleton points in it.
SuperSeq basic_sequence(const std::string& kind, const std::vector<std::string>& points, const RunConfig& cfg) {
  if (kind == "torus") {
    if (points.empty()) {
      if (cfg.N == 0) throw InvalidArgument("--N must be at least 1");
      return torus_sequence(cfg.N);
    }
    std::vector<Element> xs;
    for (const auto& p : points) xs.emplace_back(UnitRational::parse(p));
    return SuperSeq::from_members(GroupDesc::torus(), xs, "singleton");
  }
  if (kind == "profinite") {
    const PrimeList primes = working_primes(cfg);
    if (points.empty()) return profinite_sequence(primes, cfg.n_max, cfg.m_cap);
    std::vector<Element> xs;
    for (const auto& p : points) {
      const mpq_class q = parse_rational(p);
      if (q.get_den() != 1) throw InvalidArgument("profinite points are integers m (the element m v)");
      xs.emplace_back(ProfiniteElem::integer(q.get_num()));
    }
    return SuperSeq::from_members(GroupDesc::profinite(primes), xs, "singleton");
  }
  if (kind == "solenoid") {
    const PrimeList primes = working_primes(cfg);
    if (points.empty()) {
      if (cfg.N == 0) throw InvalidArgument("--N must be at least 1");
      return solenoid_sequence(primes, cfg.n_max, cfg.N, cfg.m_cap);
    }
    std::vector<Element> xs;
    for (const auto& p : points) xs.emplace_back(SolenoidPoint(parse_rational(p), ProfiniteElem::integer(0)));
    return SuperSeq::from_members(GroupDesc::solenoid(primes), xs, "singleton");
  }
  throw InvalidArgument("unknown group: " + kind);
}

QuotientMap parse_map(const std::string& s) {
  if (s == "solenoid_to_torus") return QuotientMap::solenoid_to_torus();
  if (s == "drop_finite") return QuotientMap::drop_finite_factor();
  if (s.starts_with("projection:")) {
    try {
      return QuotientMap::projection(std::stoull(s.substr(11)));
    } catch (const std::exception&) {
    }
  }
  throw InvalidArgument("unknown quotient map: " + s + " (solenoid_to_torus, projection:<i>, drop_finite)");
}

FiniteGroupPtr load_finite(const std::string& spec) {
  if (std::filesystem::is_regular_file(spec)) {
    std::ifstream in(spec);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("cannot parse finite group file: " + std::string(e.what()));
    }
    return finite_group_from_json(j);
  }
  return finite_group_by_name(spec);
}

// The sequence before any finite factor is attached.
SuperSeq build_sequence(const RunConfig& cfg) {
  std::optional<SuperSeq> seq;
  if (cfg.group == "fan") {
    if (cfg.parts.empty()) throw InvalidArgument("--group fan needs --parts");
    if (!cfg.singleton.empty()) throw InvalidArgument("use kind@point inside --parts for fan singletons");
    std::vector<SuperSeq> parts;
    for (const auto& token : split(cfg.parts, ',')) {
      const auto at = token.find('@');
      std::vector<std::string> points;
      if (at != std::string::npos) points = split(token.substr(at + 1), ';');
      parts.push_back(basic_sequence(token.substr(0, at), points, cfg));
    }
    seq.emplace(fan(parts));
  } else {
    seq.emplace(basic_sequence(cfg.group, cfg.singleton, cfg));
  }
  if (!cfg.pushforward.empty()) seq.emplace(pushforward(*seq, parse_map(cfg.pushforward)));
  return std::move(*seq);
}

DualScope parse_scope(const std::string& s) {
  if (s == "full") return DualScope::Full;
  if (s == "prefix_smooth") return DualScope::PrefixSmooth;
  throw InvalidArgument("--scope must be full or prefix_smooth");
}

struct Outcome {
  Json payload;
  int code = kOk;
};

Outcome cmd_gen(const RunConfig& cfg) {
  SuperSeq seq = build_sequence(cfg);
  if (!cfg.finite_factor.empty()) seq = lift_to_finite(seq, load_finite(cfg.finite_factor));
  return {to_json(seq), kOk};
}

// Streams the certificate payload; records go out one per line as the sweep
// delivers them. Same fields and order as to_json(Certificate).
int cmd_certify(const RunConfig& cfg, unsigned threads, std::ostream& os) {
  if (!cfg.bound) throw InvalidArgument("certify needs --bound");
  const Complexity bound(*cfg.bound);
  SweepOptions options;
  options.threads = threads;
  options.scope = parse_scope(cfg.scope);
  CertificateMode mode;
  if (cfg.mode == "qc") {
    mode = CertificateMode::QcDensity;
  } else if (cfg.mode == "generation") {
    mode = CertificateMode::Generation;
  } else {
    throw InvalidArgument("--mode must be qc or generation");
  }
  SuperSeq seq = build_sequence(cfg);
  if (!cfg.finite_factor.empty()) seq = lift_to_finite(seq, load_finite(cfg.finite_factor));
  const GroupDesc& g = seq.group();
  if (options.scope == DualScope::Full) check_bound_supported(g, bound);

  Json head;
  head["group"] = to_json(g);
  head["sequence"] = to_json(seq.spec());
  head["bound"] = bound.bound();
  head["mode"] = cfg.mode;
  head["scope"] = cfg.scope;
  std::string text = head.dump();
  text.pop_back();
  os << "{\"payload\":" << text << ",\"records\":[";
  bool first = true;
  const SweepSummary summary = sweep(seq, g, bound, mode, options, [&](const WitnessRecord& r) {
    if (cfg.summary) return;
    os << (first ? "\n" : ",\n") << to_json(r).dump();
    first = false;
  });
  Json tail;
  tail["record_count"] = summary.records;
  tail["status"] = summary.failed ? "failed" : "certified";
  tail["failed_character"] = summary.failed ? to_json(*summary.failed) : Json(nullptr);
  text = tail.dump();
  os << (first ? "]," : "\n],") << text.substr(1);
  return summary.failed ? kFailed : kOk;
}

Outcome cmd_report(const RunConfig& cfg) {
  if (cfg.group != "profinite") throw InvalidArgument("report works on --group profinite");
  if (!cfg.singleton.empty() || !cfg.pushforward.empty() || !cfg.finite_factor.empty())
    throw InvalidArgument("report takes only the profinite generator parameters");
  const SuperSeq seq = build_sequence(cfg);
  Json reports = Json::array();
  if (cfg.wn) {
    reports.push_back(to_json(escape_report(seq, *cfg.wn)));
  } else {
    for (std::size_t n = 0; n <= std::min(cfg.n_max + 1, seq.group().primes.size()); ++n)
      reports.push_back(to_json(escape_report(seq, n)));
  }
  Json payload;
  payload["group"] = to_json(seq.group());
  payload["sequence"] = to_json(seq.spec());
  payload["size"] = seq.size();
  payload["reports"] = std::move(reports);
  return {std::move(payload), kOk};
}

void add_sequence_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--group", cfg.group, "torus, profinite, solenoid or fan");
  sub->add_option("--primes", cfg.primes, "comma-separated working primes");
  sub->add_option("--primes-below", cfg.primes_below, "use all primes below this value (default 100)");
  sub->add_option("--n-max", cfg.n_max, "largest level n of the profinite sequence");
  sub->add_option("--N", cfg.N, "number of torus terms 1/(2n)");
  sub->add_option("--m-cap", cfg.m_cap, "cap on the multiplier m");
  sub->add_option("--singleton", cfg.singleton, "use these points as the whole sequence");
  sub->add_option("--parts", cfg.parts, "fan parts, e.g. solenoid,solenoid,solenoid@1/3");
  sub->add_option("--pushforward", cfg.pushforward, "solenoid_to_torus, projection:<i> or drop_finite");
  sub->add_option("--out", cfg.out, "write JSON here instead of stdout");
}

Json error_json(const std::string& type, const std::string& message) {
  return Json{{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"qc-dense super-sequences: generation, certification and escape reports", "qcdense"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* gen = app.add_subcommand("gen", "emit a truncated super-sequence");
  add_sequence_options(gen, cfg);
  gen->add_option("--finite-factor", cfg.finite_factor, "lift to E x {e} in A x F (built-in name or JSON file)");

  auto* cert = app.add_subcommand("certify", "certify qc-density or generation up to a bound");
  add_sequence_options(cert, cfg);
  cert->add_option("--bound", cfg.bound, "complexity bound B >= 1");
  cert->add_option("--mode", cfg.mode, "qc or generation");
  cert->add_option("--scope", cfg.scope, "full or prefix_smooth");
  cert->add_option("--finite-factor", cfg.finite_factor, "certify E x {e} in A x F");
  cert->add_flag("--summary", cfg.summary, "omit the records, keep the count and status");
  cert->add_option("--threads", cfg.threads, "worker threads (default QCDENSE_THREADS or all cores)");

  auto* rep = app.add_subcommand("report", "escape report of the profinite sequence");
  add_sequence_options(rep, cfg);
  rep->add_option("--wn", cfg.wn, "report members outside W_n for this n only");

  std::vector<std::string> argv_store{"qcdense"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(kVersion) + "\n" : app.help());
      return kOk;
    }
    out << error_json("usage", e.what()).dump(2) << "\n";
    err << "qcdense: " << e.what() << "\n";
    return kUsage;
  }

  if (gen->parsed()) cfg.command = "gen";
  if (cert->parsed()) cfg.command = "certify";
  if (rep->parsed()) cfg.command = "report";

  if (cfg.threads && *cfg.threads == 0) {
    out << error_json("usage", "--threads must be at least 1").dump(2) << "\n";
    return kUsage;
  }
  const unsigned threads = cfg.threads.value_or(default_thread_count());

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) {
      out << error_json("usage", "cannot write " + cfg.out).dump(2) << "\n";
      return kUsage;
    }
  }
  std::ostream& os = cfg.out.empty() ? out : file;

  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    if (cfg.command == "certify") {
      code = cmd_certify(cfg, threads, os);
    } else {
      const Outcome outcome = cfg.command == "gen" ? cmd_gen(cfg) : cmd_report(cfg);
      os << "{\"payload\":" << outcome.payload.dump();
      code = outcome.code;
    }
  } catch (const Error& e) {
    out << error_json("validation", e.what()).dump(2) << "\n";
    err << "qcdense: " << e.what() << "\n";
    return kUsage;
  } catch (const ClaimViolation& e) {
    out << error_json("claim_violation", e.what()).dump(2) << "\n";
    err << "qcdense: internal claim violated: " << e.what() << "\n";
    return kInternal;
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  const Json header{{"tool", "qcdense"},
                    {"version", kVersion},
                    {"command", cfg.command},
                    {"threads", cfg.command == "certify" ? threads : 1u},
                    {"elapsed_ms", elapsed}};
  os << ",\n\"header\":" << header.dump() << "}\n";
  os.flush();
  if (!os) {
    err << "qcdense: write failed\n";
    return kUsage;
  }
  return code;
}

}  // namespace qcdense::cli
