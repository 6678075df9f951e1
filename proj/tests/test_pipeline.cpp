#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "uiforge/pipeline.hpp"
#include "uiforge/synth.hpp"

using namespace uiforge;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("uiforge_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_corpus(const std::string& name, std::size_t count) {
  const fs::path dir = scratch(name);
  for (const auto& d : synthetic_corpus(5, count)) {
    Blueprint bp;
    bp.tree = d.tree;
    write_file(dir / d.name, serialize_blueprint(bp));
  }
  return dir;
}

Stage stage_of(std::string_view bytes, const PipelineConfig& cfg = {}) {
  try {
    run_document("doc", bytes, cfg);
  } catch (const StageError& e) {
    return e.stage();
  }
  FAIL("document ran");
  return Stage::Parse;
}

std::vector<std::pair<std::string, std::string>> run_and_write(const fs::path& in, const fs::path& out,
                                                               unsigned workers) {
  const CorpusResult r = run_corpus(in, {}, workers);
  std::vector<std::pair<std::string, std::string>> outputs;
  for (const auto& d : r.documents) {
    for (auto& [path, sha] : write_document(d, out / d.name)) outputs.emplace_back(d.name + "/" + path, sha);
  }
  outputs.emplace_back("aggregate.json", write_file(out / "aggregate.json", canonical_dump(aggregate_report(r))));
  return outputs;
}

}  // namespace

TEST_CASE("box lists and blueprints both load") {
  const std::string boxes = R"([
    {"kind":"text","bbox":[0,0,1,0.1],"payload":{"type":"text","value":"above"}},
    {"kind":"media","bbox":[0,0.5,1,0.6],"payload":{"type":"image","value":"a.png"}}])";
  const Blueprint from_boxes = load_input(boxes, std::nullopt);
  CHECK(from_boxes.tree.size() == 4);
  CHECK(from_boxes.templates.empty());

  Blueprint bp;
  bp.tree = UiTree::from_spec(fx::box(NodeKind::Stack, {fx::card("a"), fx::card("b")}));
  CHECK(load_input(serialize_blueprint(bp), std::nullopt) == bp);
}

TEST_CASE("failures carry their stage") {
  CHECK(stage_of("{not json") == Stage::Parse);
  CHECK(stage_of("[]") == Stage::Parse);
  PipelineConfig bad_eta;
  bad_eta.miner.eta = 2.0;
  Blueprint bp;
  bp.tree = UiTree::from_spec(fx::box(NodeKind::Stack, {fx::card("a"), fx::card("b"), fx::card("c")}));
  CHECK(stage_of(serialize_blueprint(bp), bad_eta) == Stage::Mine);
  PipelineConfig starved;
  starved.fuzz_seed = 3;
  starved.fuel = 1;
  CHECK(stage_of(serialize_blueprint(bp), starved) == Stage::Emit);
  try {
    run_document("doc", serialize_blueprint(bp), starved);
  } catch (const StageError& e) {
    CHECK(e.code() == ErrorCode::FuelExhausted);
    CHECK(std::string(e.what()).find("emit") != std::string::npos);
  }
}

TEST_CASE("a document runs end to end") {
  const auto doc = synthetic_corpus(9, 3).back();
  Blueprint in;
  in.tree = doc.tree;
  for (Framework fw : kAllFrameworks) {
    PipelineConfig cfg;
    cfg.framework = fw;
    cfg.fuzz_seed = 11;
    const DocumentResult r = run_document(doc.name, serialize_blueprint(in), cfg);
    CHECK(r.report.lpa == 1.0);
    CHECK(r.report.pc == 1.0);
    CHECK(r.report.roundtrip_ted == 0);
    CHECK(r.input_sha256.size() == 64);
    CHECK(r.stage_ms.size() == 4);
  }
}

TEST_CASE("bundle directories round trip") {
  Blueprint bp = mine(UiTree::from_spec(fx::box(NodeKind::Stack, {fx::card("a"), fx::card("b")})));
  for (Framework fw : kAllFrameworks) {
    const fs::path dir = scratch("bundle_" + std::string(to_string(fw)));
    const CodeBundle b = emit(bp, fw);
    const auto written = write_bundle(b, dir);
    CHECK(written.size() == b.files.size());
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(read_bundle(dir, fw).files == b.files);
    fs::remove(dir / "manifest.json");
    CHECK(read_bundle(dir, fw).files.size() == b.files.size());
  }
}

TEST_CASE("empty and missing corpora") {
  const fs::path empty = scratch("empty");
  try {
    run_corpus(empty, {}, 2);
    FAIL("ran");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCorpus);
  }
  try {
    run_corpus(empty / "nope", {}, 2);
    FAIL("ran");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("one bad document does not stop the corpus") {
  const fs::path dir = write_corpus("partial", 9);
  write_file(dir / "doc_99.json", "{\"version\":1,");
  const CorpusResult r = run_corpus(dir, {}, 4);
  CHECK(r.documents.size() == 9);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].name == "doc_99.json");
  CHECK(r.failures[0].stage == Stage::Parse);
  const Json agg = aggregate_report(r);
  CHECK(agg.at("documents") == 9);
  CHECK(agg.at("failures").size() == 1);
}

TEST_CASE("worker count does not change outputs") {
  const fs::path in = write_corpus("determinism", 12);
  const auto one = run_and_write(in, scratch("out1"), 1);
  const auto eight = run_and_write(in, scratch("out8"), 8);
  CHECK(one == eight);
  CHECK(one.size() > 12);
}

TEST_CASE("run manifest") {
  RunManifest m;
  m.inputs = {{"doc_00.json", std::string(64, 'a')}};
  m.outputs = {{"report.json", std::string(64, 'b')}};
  m.stage_ms = {{"parse", 1.5}};
  const Json j = manifest_to_json(m);
  CHECK(j.at("tool_version") == kToolVersion);
  CHECK(j.at("inputs").size() == 1);
  CHECK(j.at("outputs").size() == 1);
  CHECK(j.at("config").at("miner").at("eta") == 0.15);
  CHECK(config_to_json(m.config).at("framework") == "html");
}
