// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "fixtures.hpp"
#include "uiforge/emit/dispatch.hpp"
#include "uiforge/emit/propose.hpp"
#include "uiforge/hash.hpp"
#include "uiforge/pipeline.hpp"
#include "uiforge/synth.hpp"

using namespace uiforge;
namespace fs = std::filesystem;

namespace {

// Tolerances and sizes.
constexpr std::size_t kCorpusSize = 25;
constexpr std::uint64_t kCorpusSeed = 1;
constexpr double kRoundTripSeconds = 5.0;
constexpr std::size_t kFuzzRuns = 1000;
constexpr double kMinInvalidFraction = 0.30;
constexpr std::size_t kTedPairs = 200;
constexpr int kTedMaxNodes = 6;
constexpr std::size_t kComplexityNodes = 10000;
constexpr std::size_t kVisitFactor = 3;
constexpr double kMineSeconds = 1.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::size_t occurrences(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = s.find(needle); at != std::string::npos; at = s.find(needle, at + 1)) ++n;
  return n;
}

const std::vector<SyntheticDocument>& corpus() {
  static const auto docs = synthetic_corpus(kCorpusSeed, kCorpusSize);
  return docs;
}

const std::vector<Blueprint>& mined_corpus() {
  static const auto mined = [] {
    std::vector<Blueprint> out;
    for (const auto& d : corpus()) out.push_back(mine(d.tree));
    return out;
  }();
  return mined;
}

Outcome roundtrip() {
  const auto t0 = Clock::now();
  int worst = 0;
  std::size_t min_nodes = SIZE_MAX, max_nodes = 0;
  for (const auto& d : corpus()) {
    min_nodes = std::min(min_nodes, d.tree.size());
    max_nodes = std::max(max_nodes, d.tree.size());
    const Blueprint bp = mine(d.tree);
    const UiTree back = parse_html_bundle(emit(bp, Framework::Html));
    worst = std::max(worst, tree_edit_distance(back, expand_blueprint(bp), LabelMode::Strict));
  }
  const double s = seconds_since(t0);
  return {worst == 0 && s < kRoundTripSeconds && min_nodes >= 20 && max_nodes <= 200,
          "max TED " + std::to_string(worst) + ", " + std::to_string(s) + " s, nodes " +
              std::to_string(min_nodes) + ".." + std::to_string(max_nodes)};
}

Outcome loops() {
  std::size_t groups = 0, missing = 0, bad = 0;
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const auto& doc = corpus()[i];
    const Blueprint& bp = mined_corpus()[i];
    for (const auto& inj : doc.injected_loops) {
      bool found = false;
      for (const auto& g : bp.loop_groups) found |= g.parent == inj.row && g.instances.size() == inj.count;
      missing += found ? 0 : 1;
    }
    groups += bp.loop_groups.size();
    for (Framework fw : kAllFrameworks) {
      const CodeBundle b = emit(bp, fw);
      if (loop_preservation_accuracy(bp, b) != 1.0) ++bad;
      const std::string* entry = b.find(entry_source_path(fw));
      const char* pattern = fw == Framework::React ? ".map(" : fw == Framework::Vue ? "v-for=" : "*ngFor=";
      if (fw != Framework::Html && (!entry || occurrences(*entry, pattern) != bp.loop_groups.size())) ++bad;
    }
  }
  return {missing == 0 && bad == 0 && groups > 0,
          std::to_string(groups) + " groups, " + std::to_string(missing) + " injected runs missed, " +
              std::to_string(bad) + " bundles off"};
}

Outcome coverage() {
  std::size_t bundles = 0, bad = 0;
  for (const Blueprint& bp : mined_corpus()) {
    for (Framework fw : kAllFrameworks) {
      ++bundles;
      if (prop_coverage(bp, emit(bp, fw)) != 1.0) ++bad;
    }
  }
  return {bad == 0, std::to_string(bundles - bad) + "/" + std::to_string(bundles) + " bundles at PC 1"};
}

Outcome fuzzing() {
  std::size_t completed = 0, exhausted = 0, escaped = 0, proposals = 0, rejections = 0;
  for (std::size_t run = 0; run < kFuzzRuns; ++run) {
    const Blueprint& bp = mined_corpus()[run % mined_corpus().size()];
    const Framework fw = kAllFrameworks[run % 4];
    const auto stream = dispatch(bp, fw);
    FuzzProposer p(stream, run);
    try {
      const FilterResult r = propose_and_filter(bp, fw, p, default_fuel(stream.size()));
      ++completed;
      proposals += r.stats.proposals;
      rejections += r.stats.rejections;
      const bool ok = loop_preservation_accuracy(bp, r.bundle) == 1.0 && prop_coverage(bp, r.bundle) == 1.0 &&
                      audit_tag_balance(r.bundle).empty() && audit_type_sinks(bp, r.bundle).empty();
      escaped += ok ? 0 : 1;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::FuelExhausted) ++exhausted;
      else ++escaped;
    }
  }
  const double invalid = proposals ? static_cast<double>(rejections) / static_cast<double>(proposals) : 0.0;
  return {escaped == 0 && invalid >= kMinInvalidFraction,
          std::to_string(completed) + " completed, " + std::to_string(exhausted) + " fuel exhausted, " +
              std::to_string(escaped) + " escaped, invalid fraction " + std::to_string(invalid)};
}

Outcome ted_oracle() {
  std::mt19937_64 rng(42);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < kTedPairs; ++i) {
    const LabeledTree a = fx::random_labeled(rng, 1 + static_cast<int>(rng() % kTedMaxNodes));
    const LabeledTree b = fx::random_labeled(rng, 1 + static_cast<int>(rng() % kTedMaxNodes));
    if (tree_edit_distance(a, b) != fx::brute_force_ted(a, b)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(kTedPairs - mismatches) + "/" + std::to_string(kTedPairs) + " pairs exact"};
}

Outcome packing() {
  auto trees = fx::packing_fixtures();
  trees.push_back(fx::starvation_fixture());
  std::size_t optimal = 0;
  std::string sizes;
  for (const UiTree& t : trees) {
    const MinerConfig cfg;
    const auto cands = merge_near_duplicates(collect_candidates(t, cfg), t, cfg);
    const std::size_t greedy = covered_nodes(pack_instances(cands, t, cfg));
    const std::size_t best = fx::packing_optimum(cands, t, cfg);
    if (t.size() <= 20 && greedy == best) ++optimal;
    sizes += (sizes.empty() ? "" : " ") + std::to_string(greedy) + "/" + std::to_string(best);
  }
  return {optimal == trees.size(), std::to_string(trees.size()) + " fixtures, covered/optimum " + sizes};
}

struct CorpusRun {
  std::vector<std::pair<std::string, std::string>> outputs;
  bool hashes_match = true;
};

CorpusRun corpus_run(const fs::path& in, const fs::path& out, unsigned workers) {
  fs::remove_all(out);
  const CorpusResult r = run_corpus(in, {}, workers);
  RunManifest m;
  for (const auto& d : r.documents) {
    for (auto& [path, sha] : write_document(d, out / d.name)) m.outputs.emplace_back(d.name + "/" + path, sha);
  }
  m.outputs.emplace_back("aggregate.json",
                         write_file(out / "aggregate.json", canonical_dump(aggregate_report(r))));
  write_file(out / "run_manifest.json", canonical_dump(manifest_to_json(m)));
  CorpusRun run;
  const Json j = parse_json(read_file(out / "run_manifest.json"));
  for (const auto& o : j.at("outputs")) {
    const std::string path = o.at("path");
    run.outputs.emplace_back(path, o.at("sha256"));
    run.hashes_match &= sha256_hex(read_file(out / path)) == o.at("sha256").get<std::string>();
  }
  run.hashes_match &= r.failures.empty();
  return run;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "uiforge_acceptance";
  fs::remove_all(root);
  for (const auto& d : corpus()) {
    Blueprint bp;
    bp.tree = d.tree;
    write_file(root / "in" / d.name, serialize_blueprint(bp));
  }
  const CorpusRun a = corpus_run(root / "in", root / "a", 1);
  const CorpusRun b = corpus_run(root / "in", root / "b", 8);
  std::size_t files = 0;
  for (const auto& [path, sha] : a.outputs) {
    files += path.find("/bundle/") != std::string::npos || path.ends_with("mined.json") ||
             path == "aggregate.json";
  }
  return {a.outputs == b.outputs && a.hashes_match && b.hashes_match && !a.outputs.empty(),
          std::to_string(a.outputs.size()) + " outputs (" + std::to_string(files) +
              " mined/bundle/aggregate), workers 1 vs 8 " + (a.outputs == b.outputs ? "identical" : "differ")};
}

Outcome complexity() {
  const UiTree t = synthetic_tree(5, kComplexityNodes);
  MinerStats stats;
  collect_candidates(t, MinerConfig{}, &stats);
  const auto t0 = Clock::now();
  mine(t);
  const double s = seconds_since(t0);
  return {t.size() >= kComplexityNodes && stats.node_visits <= kVisitFactor * t.size() && s < kMineSeconds,
          std::to_string(stats.node_visits) + " visits for " + std::to_string(t.size()) + " nodes, mine " +
              std::to_string(s) + " s"};
}

Outcome merge_threshold() {
  const UiTree t = fx::two_card_variants();
  auto count = [&](double eta) {
    MinerConfig cfg;
    cfg.eta = eta;
    return mine(t, cfg).templates.size();
  };
  bool monotone = true;
  std::string sweep;
  std::size_t prev = SIZE_MAX;
  for (int k = 0; k <= 10; ++k) {
    const std::size_t n = count(0.05 * k);
    monotone &= n <= prev;
    prev = n;
    sweep += std::to_string(n);
  }
  const bool merges = count(0.20) == 1;
  const bool separate = count(0.10) == 2;
  return {merges && separate && monotone, "templates across eta 0..0.5: " + sweep};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"round-trip fidelity", roundtrip},
      {"loop preservation", loops},
      {"prop coverage", coverage},
      {"constraint fuzzing", fuzzing},
      {"TED oracle equivalence", ted_oracle},
      {"packing optimality", packing},
      {"determinism", determinism},
      {"complexity contract", complexity},
      {"merge threshold semantics", merge_threshold},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("criterion %zu %-26s %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
