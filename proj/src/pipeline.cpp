#include "uiforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "uiforge/emit/dispatch.hpp"
#include "uiforge/emit/propose.hpp"
#include "uiforge/hash.hpp"
#include "uiforge/layout.hpp"

namespace uiforge {

namespace fs = std::filesystem;

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Parse: return "parse";
    case Stage::Mine: return "mine";
    case Stage::Emit: return "emit";
    case Stage::Eval: return "eval";
  }
  return "?";
}

Json config_to_json(const PipelineConfig& cfg) {
  Json j{{"miner",
          {{"eta", cfg.miner.eta},
           {"min_size", cfg.miner.min_size},
           {"min_support", cfg.miner.min_support},
           {"size_gate", cfg.miner.size_gate}}},
         {"framework", std::string(to_string(cfg.framework))},
         {"labels", cfg.labels == LabelMode::Strict ? "strict" : "structural"}};
  j["gap"] = cfg.gap ? Json(*cfg.gap) : Json(nullptr);
  j["fuzz_seed"] = cfg.fuzz_seed ? Json(*cfg.fuzz_seed) : Json(nullptr);
  j["fuel"] = cfg.fuel ? Json(*cfg.fuel) : Json(nullptr);
  return j;
}

Blueprint load_input(std::string_view bytes, std::optional<double> gap) {
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && bytes[first] == '[') {
    const auto boxes = parse_boxes(bytes);
    Blueprint bp;
    bp.tree = group_boxes(boxes, gap ? *gap : (boxes.size() >= 2 ? infer_gap_threshold(boxes) : 0.01));
    return bp;
  }
  return parse_blueprint(bytes);
}

CodeBundle emit_bundle(const Blueprint& bp, const PipelineConfig& cfg) {
  if (!cfg.fuzz_seed && !cfg.fuel) return emit(bp, cfg.framework);
  auto stream = dispatch(bp, cfg.framework);
  const std::size_t fuel = cfg.fuel ? *cfg.fuel : default_fuel(stream.size());
  if (cfg.fuzz_seed) {
    FuzzProposer p(std::move(stream), *cfg.fuzz_seed);
    return propose_and_filter(bp, cfg.framework, p, fuel).bundle;
  }
  ReferenceProposer p(std::move(stream));
  return propose_and_filter(bp, cfg.framework, p, fuel).bundle;
}

namespace {

template <class F>
auto timed(std::vector<std::pair<std::string, double>>& log, Stage stage, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      log.emplace_back(to_string(stage),
                       std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    } else {
      auto out = f();
      log.emplace_back(to_string(stage),
                       std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
      return out;
    }
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

}  // namespace

DocumentResult run_document(std::string name, std::string_view bytes, const PipelineConfig& cfg) {
  DocumentResult r;
  r.name = std::move(name);
  r.input_sha256 = sha256_hex(bytes);
  const Blueprint input = timed(r.stage_ms, Stage::Parse, [&] { return load_input(bytes, cfg.gap); });
  r.mined = timed(r.stage_ms, Stage::Mine, [&] {
    cfg.miner.validate();
    return mine(input.tree, cfg.miner);
  });
  r.bundle = timed(r.stage_ms, Stage::Emit, [&] { return emit_bundle(r.mined, cfg); });
  r.report = timed(r.stage_ms, Stage::Eval, [&] { return evaluate(r.mined, r.bundle, cfg.labels); });
  return r;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out.flush()) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return sha256_hex(content);
}

Json bundle_manifest(const CodeBundle& bundle) {
  Json files = Json::array();
  for (const auto& f : bundle.files) files.push_back({{"path", f.path}, {"sha256", sha256_hex(f.content)}});
  return {{"framework", std::string(to_string(bundle.framework))}, {"files", files}};
}

std::vector<std::pair<std::string, std::string>> write_bundle(const CodeBundle& bundle, const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : bundle.files) out.emplace_back(f.path, write_file(dir / f.path, f.content));
  write_file(dir / "manifest.json", canonical_dump(bundle_manifest(bundle)));
  return out;
}

CodeBundle read_bundle(const fs::path& dir, Framework fw) {
  CodeBundle b;
  b.framework = fw;
  const fs::path manifest = dir / "manifest.json";
  if (fs::exists(manifest)) {
    const Json j = parse_json(read_file(manifest));
    try {
      for (const auto& f : j.at("files")) {
        const std::string path = f.at("path").get<std::string>();
        b.files.push_back({path, read_file(dir / path)});
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::MalformedJson, "bundle manifest: " + std::string(e.what()));
    }
    return b;
  }
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
  std::vector<fs::path> paths;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) b.files.push_back({fs::relative(p, dir).generic_string(), read_file(p)});
  return b;
}

std::vector<std::pair<std::string, std::string>> write_document(const DocumentResult& r, const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("mined.json", write_file(dir / "mined.json", serialize_blueprint(r.mined)));
  for (auto& [path, sha] : write_bundle(r.bundle, dir / "bundle")) out.emplace_back("bundle/" + path, sha);
  out.emplace_back("report.json", write_file(dir / "report.json", canonical_dump(report_to_json(r.report))));
  return out;
}

Json manifest_to_json(const RunManifest& m) {
  auto pairs = [](const std::vector<std::pair<std::string, std::string>>& v, const char* key) {
    Json a = Json::array();
    for (const auto& [name, sha] : v) a.push_back({{key, name}, {"sha256", sha}});
    return a;
  };
  Json times = Json::object();
  for (const auto& [stage, ms] : m.stage_ms) times[stage] = times.value(stage, 0.0) + ms;
  return {{"tool_version", kToolVersion},
          {"config", config_to_json(m.config)},
          {"inputs", pairs(m.inputs, "name")},
          {"outputs", pairs(m.outputs, "path")},
          {"stage_ms", times}};
}

CorpusResult run_corpus(const fs::path& dir, const PipelineConfig& cfg, unsigned workers) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  if (files.empty()) throw Error(ErrorCode::EmptyCorpus, "no .json documents in " + dir.string());
  std::sort(files.begin(), files.end());

  std::vector<std::optional<DocumentResult>> results(files.size());
  std::vector<std::optional<CorpusFailure>> failures(files.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const std::string name = files[i].filename().string();
      try {
        std::string bytes;
        try {
          bytes = read_file(files[i]);
        } catch (const Error& e) {
          throw StageError(Stage::Parse, e);
        }
        results[i] = run_document(name, bytes, cfg);
      } catch (const StageError& e) {
        failures[i] = CorpusFailure{name, e.stage(), e.what()};
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(files.size())));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  pool.clear();

  CorpusResult out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (results[i]) out.documents.push_back(std::move(*results[i]));
    if (failures[i]) out.failures.push_back(std::move(*failures[i]));
  }
  return out;
}

Json aggregate_report(const CorpusResult& r) {
  double crr = 0, lpa = 0, pc = 0, afc = 0;
  long ted = 0, roundtrip = 0;
  for (const auto& d : r.documents) {
    crr += d.report.crr;
    lpa += d.report.lpa;
    pc += d.report.pc;
    afc += d.report.afc;
    ted += d.report.ted;
    roundtrip += d.report.roundtrip_ted;
  }
  const double n = r.documents.empty() ? 1.0 : static_cast<double>(r.documents.size());
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"name", f.name}, {"stage", std::string(to_string(f.stage))}, {"error", f.message}});
  }
  return {{"documents", r.documents.size()},
          {"failures", failures},
          {"crr", crr / n},
          {"lpa", lpa / n},
          {"pc", pc / n},
          {"afc", afc / n},
          {"ted_total", ted},
          {"roundtrip_ted_total", roundtrip}};
}

}  // namespace uiforge
