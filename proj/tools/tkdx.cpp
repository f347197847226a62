// tkdx: build, query, verify and inspect top-k document retrieval snapshots.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tkdx/snapshot.hpp"

using namespace tkdx;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;

struct CorpusArgs {
  std::string path;
  std::string format = "auto";
  std::string separator = "#";
};

struct IndexArgs {
  std::string index = "linear";
  std::uint32_t pi = 4;
  std::string mode = "t1";
  std::size_t rho = 4;
  std::size_t sample_rate = 64;
  std::string backend = "plain";

  BuildOptions options() const {
    BuildOptions o;
    o.kind = parse_kind(index);
    o.pi = pi;
    o.mode = parse_mode(mode);
    o.rho = rho;
    o.sample_rate = sample_rate;
    o.backend = parse_backend(backend);
    return o;
  }
};

char separator_of(const std::string& s) {
  if (s.size() != 1) throw InputError("separator must be a single character");
  return s[0];
}

Corpus read_corpus(const CorpusArgs& a) {
  const char sep = separator_of(a.separator);
  std::string fmt = a.format;
  if (fmt == "auto") fmt = std::filesystem::is_directory(a.path) ? "dir" : "lines";
  if (fmt == "dir") return load_dir_corpus(a.path, sep);
  if (fmt == "lines") return load_lines_corpus(a.path, sep);
  throw InputError("unknown corpus format '" + a.format + "'");
}

std::uint64_t seed_from(std::uint64_t flag) {
  if (const char* env = std::getenv("TKDX_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("TKDX_SEED is not an unsigned integer: ") + env);
    }
  }
  return flag;
}

Corpus random_corpus(std::mt19937_64& rng, std::size_t docs, std::size_t total, unsigned sigma) {
  if (docs == 0) throw InputError("random corpus needs at least one document");
  if (sigma < 1 || sigma > 26) throw InputError("sigma must be in [1, 26]");
  Corpus c;
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> w(docs);
  double sum = 0;
  for (auto& x : w) sum += (x = ex(rng));
  for (std::size_t d = 0; d < docs; ++d) {
    auto len = static_cast<std::size_t>(w[d] / sum * static_cast<double>(total));
    std::string s(len, 'a');
    for (std::size_t i = 0; i < len; ++i) {
      s[i] = i >= 4 && rng() % 3 == 0 ? s[i - 1 - rng() % 4] : static_cast<char>('a' + rng() % sigma);
    }
    c.documents.push_back(std::move(s));
  }
  return c;
}

std::string format_rows(const TopkResult& rows) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) os << (i ? " " : "") << "(" << rows[i].doc << "," << rows[i].tf << ")";
  os << "]";
  return os.str();
}

json counters_json(const QueryCounters& c) {
  return {{"boundary_searches", c.boundary_searches}, {"rmq_calls", c.rmq_calls},
          {"heap_nodes", c.heap_nodes},               {"decode_calls", c.decode_calls},
          {"wavelet_nodes", c.wavelet_nodes},         {"fringe_leaves", c.fringe_leaves},
          {"listing_reports", c.listing_reports}};
}

std::uint64_t total_bits(const SpaceReport& r) {
  std::uint64_t t = 0;
  for (const auto& item : r) t += item.bits;
  return t;
}

// ---- build ----------------------------------------------------------------

int cmd_build(const CorpusArgs& ca, const IndexArgs& ia, const std::string& out) {
  auto opts = ia.options();
  auto snap = Snapshot::build(read_corpus(ca), opts);
  snap.save_file(out);
  const auto& h = snap.header();
  std::cerr << "built " << kind_name(h.kind) << " index: N=" << h.length << " D=" << h.docs;
  if (h.kind != IndexKind::kGrouped) std::cerr << " pi=" << h.pi << " entries=" << snap.entry_count();
  if (auto* ei = snap.encoded()) {
    std::cerr << " mode=" << mode_name(ei->options().mode) << " stripped=" << ei->stripped_count();
  }
  std::cerr << " bits=" << total_bits(snap.space_report()) << " -> " << out << "\n";
  return kExitOk;
}

// ---- query ----------------------------------------------------------------

int cmd_query(const std::string& path, const std::vector<std::string>& patterns, std::size_t k, bool counters,
              bool as_json) {
  auto snap = Snapshot::load_file(path);
  json all = json::array();
  for (const auto& p : patterns) {
    QueryCounters qc;
    auto rows = snap.query(p, k, &qc);
    if (as_json) {
      json r = json::array();
      for (const auto& row : rows) r.push_back({{"doc", row.doc}, {"tf", row.tf}});
      json q = {{"pattern", p}, {"k", k}, {"rows", r}};
      if (counters) q["counters"] = counters_json(qc);
      all.push_back(q);
      continue;
    }
    if (patterns.size() > 1) std::cout << "# pattern\t" << p << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) std::cout << i + 1 << "\t" << rows[i].doc << "\t" << rows[i].tf << "\n";
    if (counters) {
      const json cj = counters_json(qc);
      for (const auto& [name, value] : cj.items()) std::cout << "# " << name << "\t" << value << "\n";
    }
  }
  if (as_json) std::cout << (patterns.size() == 1 ? all[0] : all).dump() << "\n";
  return kExitOk;
}

// ---- verify ---------------------------------------------------------------

struct Variant {
  std::string name;
  BuildOptions options;
};

std::vector<Variant> all_variants(std::size_t sample_rate) {
  std::vector<Variant> v;
  for (std::uint32_t pi : {1u, 2u, 3u, 8u}) {
    v.push_back({"linear pi=" + std::to_string(pi), {IndexKind::kLinear, pi, EncodedMode::kT1, 4, sample_rate}});
  }
  v.push_back({"encoded t1", {IndexKind::kEncoded, 3, EncodedMode::kT1, 4, sample_rate}});
  v.push_back({"encoded t1-stripped", {IndexKind::kEncoded, 3, EncodedMode::kT1Stripped, 4, sample_rate}});
  for (std::size_t rho : {1u, 4u, 16u}) {
    v.push_back({"encoded t2 rho=" + std::to_string(rho), {IndexKind::kEncoded, 3, EncodedMode::kT2, rho, sample_rate}});
  }
  v.push_back({"grouped", {IndexKind::kGrouped}});
  return v;
}

struct Probe {
  std::string pattern;
  std::size_t k;
};

std::vector<Probe> make_probes(const Corpus& c, std::size_t queries, std::mt19937_64& rng) {
  std::vector<Probe> out;
  const std::size_t d = c.size();
  std::size_t content = 0;
  for (const auto& doc : c.documents) content += doc.size();
  if (content <= 512) {
    std::set<std::string> subs;
    for (const auto& doc : c.documents) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        for (std::size_t l = 1; i + l <= doc.size(); ++l) subs.insert(doc.substr(i, l));
      }
    }
    for (const auto& p : subs) {
      for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{3}, d, d + 5}) out.push_back({p, k});
    }
    return out;
  }
  std::vector<std::size_t> weights;
  for (const auto& doc : c.documents) weights.push_back(doc.size());
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::geometric_distribution<std::size_t> len(0.3);
  for (std::size_t q = 0; q < queries; ++q) {
    const auto& doc = c.documents[pick(rng)];
    std::size_t l = std::min<std::size_t>(doc.size(), 1 + len(rng));
    std::size_t at = rng() % (doc.size() - l + 1);
    out.push_back({doc.substr(at, l), 1 + rng() % (d + 5)});
  }
  return out;
}

// Shortest failing sub-pattern, then smallest failing k.
Probe minimize(const Snapshot& s, Probe p) {
  auto fails = [&](const Probe& q) { return s.query(q.pattern, q.k) != brute_force_topk(s.text(), q.pattern, q.k); };
  bool shrunk = true;
  while (shrunk && p.pattern.size() > 1) {
    shrunk = false;
    for (std::string cand : {p.pattern.substr(1), p.pattern.substr(0, p.pattern.size() - 1)}) {
      if (fails({cand, p.k})) {
        p.pattern = cand;
        shrunk = true;
        break;
      }
    }
  }
  for (std::size_t k = 1; k < p.k; ++k) {
    if (fails({p.pattern, k})) {
      p.k = k;
      break;
    }
  }
  return p;
}

// Structural and per-query bounds; empty string when all hold.
std::string check_bounds(const Snapshot& s, const Probe& pr, const QueryCounters& qc) {
  const auto& h = s.header();
  if (auto* gi = s.grouped()) {
    std::size_t g = gi->levels()[gi->level_for(pr.k)].g;
    if (qc.fringe_leaves > 2 * g) return "fringe " + std::to_string(qc.fringe_leaves) + " > 2g";
    return {};
  }
  auto loc = s.text().search(pr.pattern);
  if (!loc) return {};
  const std::size_t pi = h.pi, depth = s.text().gst().depth(loc->locus);
  if (qc.boundary_searches > pi + (depth + pi - 1) / pi + 1) {
    return std::to_string(qc.boundary_searches) + " boundary searches exceed pi + ceil(depth/pi) + 1";
  }
  if (qc.wavelet_nodes > decomposition_bound(h.pi)) return "wavelet decomposition exceeds its bound";
  return {};
}

int verify_snapshot(const Snapshot& s, const std::string& name, const std::vector<Probe>& probes, bool quiet) {
  const auto& h = s.header();
  if (h.kind != IndexKind::kGrouped && s.entry_count() > 2 * h.length) {
    std::cout << "FAIL " << name << ": " << s.entry_count() << " entries > 2N = " << 2 * h.length << "\n";
    return kExitMismatch;
  }
  if (auto* ei = s.encoded(); ei && ei->options().sample_rate >= EncodedIndex::kPayloadMinSampleRate &&
                              ei->payload_bits() > ei->payload_bound() + EncodedIndex::kPayloadFixedBits) {
    std::cout << "FAIL " << name << ": payload " << ei->payload_bits() << " > bound " << ei->payload_bound() << " + "
              << EncodedIndex::kPayloadFixedBits << "\n";
    return kExitMismatch;
  }
  for (const auto& pr : probes) {
    auto want = brute_force_topk(s.text(), pr.pattern, pr.k);
    QueryCounters qc;
    auto got = s.query(pr.pattern, pr.k, &qc);
    if (got != want) {
      Probe m = minimize(s, pr);
      std::cout << "FAIL " << name << "\n"
                << "  pattern\t" << m.pattern << "\n"
                << "  k\t" << m.k << "\n"
                << "  expected\t" << format_rows(brute_force_topk(s.text(), m.pattern, m.k)) << "\n"
                << "  got\t" << format_rows(s.query(m.pattern, m.k)) << "\n";
      return kExitMismatch;
    }
    if (auto why = check_bounds(s, pr, qc); !why.empty()) {
      std::cout << "FAIL " << name << ": " << why << "\n  pattern\t" << pr.pattern << "\n  k\t" << pr.k << "\n";
      return kExitMismatch;
    }
  }
  // snapshot round trip must answer identically
  auto back = Snapshot::deserialize(s.serialize());
  for (const auto& pr : probes) {
    if (back.query(pr.pattern, pr.k) != s.query(pr.pattern, pr.k)) {
      std::cout << "FAIL " << name << " after snapshot round trip\n  pattern\t" << pr.pattern << "\n  k\t" << pr.k
                << "\n";
      return kExitMismatch;
    }
  }
  if (!quiet) std::cout << "ok   " << name << "\t" << probes.size() << " queries\n";
  return kExitOk;
}

struct VerifyArgs {
  std::optional<std::string> snapshot;
  bool random = false;
  std::uint64_t seed = 1;
  std::size_t docs = 8;
  std::size_t length = 400;
  unsigned sigma = 4;
  std::size_t queries = 1000;
  bool quiet = false;
};

int cmd_verify(const CorpusArgs& ca, const VerifyArgs& va, std::size_t sample_rate) {
  std::mt19937_64 rng(seed_from(va.seed));
  if (va.snapshot) {
    auto s = Snapshot::load_file(*va.snapshot);
    auto probes = make_probes(s.text().corpus(), va.queries, rng);
    int rc = verify_snapshot(s, std::string(kind_name(s.kind())) + " snapshot", probes, va.quiet);
    std::cout << (rc == kExitOk ? "PASS" : "FAIL") << "\n";
    return rc;
  }
  Corpus c;
  if (va.random) {
    c = random_corpus(rng, va.docs, va.length, va.sigma);
  } else {
    if (ca.path.empty()) throw InputError("verify needs a corpus path, --random or --snapshot");
    c = read_corpus(ca);
  }
  auto probes = make_probes(c, va.queries, rng);
  for (const auto& v : all_variants(sample_rate)) {
    auto s = Snapshot::build(c, v.options);
    if (int rc = verify_snapshot(s, v.name, probes, va.quiet); rc != kExitOk) {
      std::cout << "FAIL\n";
      return rc;
    }
  }
  std::cout << "PASS\n";
  return kExitOk;
}

// ---- bench ----------------------------------------------------------------

int cmd_bench(const std::string& path, std::size_t queries, std::size_t k, std::uint64_t seed) {
  auto s = Snapshot::load_file(path);
  std::mt19937_64 rng(seed_from(seed));
  auto probes = make_probes(s.text().corpus(), queries, rng);
  if (probes.size() > queries) {
    std::shuffle(probes.begin(), probes.end(), rng);
    probes.resize(queries);
  }
  if (k > 0) {
    for (auto& p : probes) p.k = k;
  }
  QueryCounters total;
  std::size_t rows = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& p : probes) rows += s.query(p.pattern, p.k, &total).size();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double n = probes.empty() ? 1.0 : static_cast<double>(probes.size());
  std::cout << "queries\t" << probes.size() << "\nrows\t" << rows << "\nseconds\t" << std::fixed
            << std::setprecision(3) << secs << "\nus_per_query\t" << std::setprecision(2) << secs * 1e6 / n << "\n";
  const json tj = counters_json(total);
  for (const auto& [name, value] : tj.items()) {
    std::cout << "mean_" << name << "\t" << std::setprecision(2) << value.get<double>() / n << "\n";
  }
  return kExitOk;
}

// ---- stats ----------------------------------------------------------------

int cmd_stats(const std::string& path, bool as_json) {
  auto s = Snapshot::load_file(path);
  const auto& h = s.header();
  const double n = static_cast<double>(h.length);
  const double lg_d = h.docs > 1 ? std::log2(static_cast<double>(h.docs)) : 0.0;
  auto report = s.space_report();
  json j = {{"kind", kind_name(h.kind)}, {"N", h.length}, {"D", h.docs}};
  json comps = json::array();
  for (const auto& item : report) comps.push_back({{"component", item.component}, {"bits", item.bits}});
  j["components"] = comps;
  j["total_bits"] = total_bits(report);
  // plain D_A: the packed sequence is exactly N ceil(log2 D) bits
  j["plain_doc_array_sequence_bits"] = h.length * ceil_log2(h.docs);
  if (h.kind != IndexKind::kGrouped) {
    j["pi"] = h.pi;
    j["entries"] = s.entry_count();
    j["entry_bound_2N"] = 2 * h.length;
  }
  if (auto* ei = s.encoded()) {
    j["mode"] = mode_name(ei->options().mode);
    j["payload_bits"] = ei->payload_bits();
    j["payload_bound"] = ei->payload_bound();
    j["payload_slack_c"] = EncodedIndex::kPayloadSlack;
    j["payload_fixed_bits"] = EncodedIndex::kPayloadFixedBits;
    j["payload_within_bound"] = ei->payload_bits() <= ei->payload_bound();
    j["payload_within_bound_plus_fixed"] = ei->payload_bits() <= ei->payload_bound() + EncodedIndex::kPayloadFixedBits;
    // leading term n log D (2 + o(1)), o(1) dropped
    j["formula_leading_bits"] = 2.0 * n * lg_d;
  }
  if (auto* gi = s.grouped()) {
    json levels = json::array();
    const double lglg = n > 2 ? std::log2(std::log2(n)) : 0.0;
    for (std::size_t i = 0; i < gi->levels().size(); ++i) {
      const auto& lv = gi->levels()[i];
      levels.push_back({{"q", lv.q},
                        {"g", lv.g},
                        {"marked", lv.marked.size()},
                        {"list_bits", gi->level_bits(i)},
                        {"formula_bits", lglg > 0 ? n * lg_d / lglg : 0.0}});
    }
    j["levels"] = levels;
  }
  if (as_json) {
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "kind\t" << j["kind"].get<std::string>() << "\nN\t" << h.length << "\nD\t" << h.docs << "\n";
  for (const auto& item : report) std::cout << item.component << "\t" << item.bits << "\n";
  std::cout << "total_bits\t" << j["total_bits"] << "\n";
  std::cout << "plain_doc_array_sequence_bits\t" << j["plain_doc_array_sequence_bits"] << "\n";
  if (j.contains("entries")) std::cout << "entries\t" << j["entries"] << "\t(2N = " << j["entry_bound_2N"] << ")\n";
  if (j.contains("payload_bits")) {
    std::cout << "payload_bits\t" << j["payload_bits"] << "\npayload_bound\t" << j["payload_bound"] << "\t(c = "
              << EncodedIndex::kPayloadSlack << ", fixed " << EncodedIndex::kPayloadFixedBits << ")\n"
              << "formula_leading_bits\t" << std::fixed << std::setprecision(0)
              << j["formula_leading_bits"].get<double>() << "\t(2 n log2 D)\n";
  }
  if (j.contains("levels")) {
    for (const auto& lv : j["levels"]) {
      std::cout << "level q=" << lv["q"] << "\tg=" << lv["g"] << "\tmarked=" << lv["marked"]
                << "\tlist_bits=" << lv["list_bits"] << "\tformula=" << std::fixed << std::setprecision(0)
                << lv["formula_bits"].get<double>() << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-k document retrieval: build, query, verify and inspect index snapshots"};
  app.require_subcommand(1);

  CorpusArgs ca;
  IndexArgs ia;
  auto add_corpus = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("corpus", ca.path, "Corpus file (one document per line) or directory");
    if (required) opt->required();
    sub->add_option("--format", ca.format, "Corpus format: auto, lines, dir")->capture_default_str();
    sub->add_option("--separator", ca.separator, "Document separator character")->capture_default_str();
  };

  std::string out;
  auto* build = app.add_subcommand("build", "Build an index snapshot from a corpus");
  add_corpus(build, true);
  build->add_option("-o,--output", out, "Snapshot path")->required();
  build->add_option("--index", ia.index, "linear, encoded or grouped")->capture_default_str();
  build->add_option("--pi", ia.pi, "Marking period")->capture_default_str();
  build->add_option("--mode", ia.mode, "Encoded mode: t1, t1-stripped, t2")->capture_default_str();
  build->add_option("--rho", ia.rho, "Sampling period of the t2 document array")->capture_default_str();
  build->add_option("--sample-rate", ia.sample_rate, "Predecessor and csa-sim sampling rate")->capture_default_str();
  build->add_option("--backend", ia.backend, "Document array: plain, wavelet, csa-sim")->capture_default_str();

  std::string snap;
  std::vector<std::string> patterns;
  std::size_t k = 10;
  bool counters = false, as_json = false;
  auto* query = app.add_subcommand("query", "Top-k documents for one or more patterns");
  query->add_option("snapshot", snap, "Snapshot path")->required();
  query->add_option("patterns", patterns, "Patterns")->required();
  query->add_option("-k", k, "Number of documents")->capture_default_str();
  query->add_flag("--counters", counters, "Append instrumentation counters as comment lines");
  query->add_flag("--json", as_json, "JSON output");

  VerifyArgs va;
  std::string verify_snap;
  auto* verify = app.add_subcommand("verify", "Check every index variant against the brute-force oracle");
  add_corpus(verify, false);
  verify->add_option("--snapshot", verify_snap, "Verify an existing snapshot instead");
  verify->add_flag("--random", va.random, "Generate a random corpus from --seed");
  verify->add_option("--seed", va.seed, "Random seed (TKDX_SEED overrides)")->capture_default_str();
  verify->add_option("--docs", va.docs, "Random corpus documents")->capture_default_str();
  verify->add_option("--length", va.length, "Random corpus total length")->capture_default_str();
  verify->add_option("--sigma", va.sigma, "Random corpus alphabet size")->capture_default_str();
  verify->add_option("--queries", va.queries, "Random queries for corpora longer than 512")->capture_default_str();
  verify->add_option("--sample-rate", ia.sample_rate, "Predecessor and csa-sim sampling rate")->capture_default_str();
  verify->add_flag("-q,--quiet", va.quiet, "Only print the verdict");

  std::size_t bench_queries = 1000, bench_k = 0;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "Time random substring queries against a snapshot");
  bench->add_option("snapshot", snap, "Snapshot path")->required();
  bench->add_option("--queries", bench_queries, "Number of queries")->capture_default_str();
  bench->add_option("-k", bench_k, "Fixed k (default: random per query)");
  bench->add_option("--seed", bench_seed, "Random seed (TKDX_SEED overrides)")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Space accounting of a snapshot");
  stats->add_option("snapshot", snap, "Snapshot path")->required();
  stats->add_flag("--json", as_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*build) return cmd_build(ca, ia, out);
    if (*query) return cmd_query(snap, patterns, k, counters, as_json);
    if (*verify) {
      if (!verify_snap.empty()) va.snapshot = verify_snap;
      return cmd_verify(ca, va, ia.sample_rate);
    }
    if (*bench) return cmd_bench(snap, bench_queries, bench_k, bench_seed);
    if (*stats) return cmd_stats(snap, as_json);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
