// Command-line front end: one subcommand per pipeline stage plus end-to-end
// and corpus drivers.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "uiforge/layout.hpp"
#include "uiforge/pipeline.hpp"
#include "uiforge/synth.hpp"

namespace fs = std::filesystem;
using namespace uiforge;

namespace {

struct Options {
  bool json = false;
  std::string config_path;
  std::optional<double> eta;
  std::optional<int> min_support;
  std::optional<int> min_size;
  std::optional<double> gap;
  std::string framework;
  std::optional<std::uint64_t> fuzz_seed;
  std::optional<std::size_t> fuel;
  bool strict_labels = false;
};

fs::path default_out(const std::string& leaf) {
  const char* env = std::getenv("UIFORGE_OUT");
  return fs::path(env && *env ? env : "out") / leaf;
}

// Defaults, then the config file, then flags.
PipelineConfig effective_config(const Options& o) {
  PipelineConfig cfg;
  if (!o.config_path.empty()) {
    const Json j = parse_json(read_file(o.config_path));
    try {
      cfg.miner.eta = j.value("eta", cfg.miner.eta);
      cfg.miner.min_support = j.value("min_support", cfg.miner.min_support);
      cfg.miner.min_size = j.value("min_size", cfg.miner.min_size);
      cfg.miner.size_gate = j.value("size_gate", cfg.miner.size_gate);
      if (j.contains("framework")) cfg.framework = parse_framework(j.at("framework").get<std::string>());
      if (j.contains("gap")) cfg.gap = j.at("gap").get<double>();
      if (j.contains("fuzz_seed")) cfg.fuzz_seed = j.at("fuzz_seed").get<std::uint64_t>();
      if (j.contains("fuel")) cfg.fuel = j.at("fuel").get<std::size_t>();
      if (j.value("strict_labels", false)) cfg.labels = LabelMode::Strict;
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::MalformedJson, "config " + o.config_path + ": " + e.what());
    }
  }
  if (o.eta) cfg.miner.eta = *o.eta;
  if (o.min_support) cfg.miner.min_support = *o.min_support;
  if (o.min_size) cfg.miner.min_size = *o.min_size;
  if (o.gap) cfg.gap = *o.gap;
  if (!o.framework.empty()) cfg.framework = parse_framework(o.framework);
  if (o.fuzz_seed) cfg.fuzz_seed = *o.fuzz_seed;
  if (o.fuel) cfg.fuel = *o.fuel;
  if (o.strict_labels) cfg.labels = LabelMode::Strict;
  return cfg;
}

template <class F>
auto stage(Stage s, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw StageError(s, e);
  } catch (const fs::filesystem_error& e) {
    throw StageError(s, Error(ErrorCode::Io, e.what()));
  }
}

void print(const Options& o, const Json& j, const std::string& human) {
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << human << "\n";
  }
}

std::string summary(const EvalReport& r) {
  std::ostringstream ss;
  ss << "ted=" << r.ted << " crr=" << r.crr << " lpa=" << r.lpa << " pc=" << r.pc << " afc=" << r.afc
     << " roundtrip_ted=" << r.roundtrip_ted;
  return ss.str();
}

void write_manifest(const fs::path& path, const RunManifest& m) {
  write_file(path, canonical_dump(manifest_to_json(m)));
}

void add_miner_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--eta", o.eta, "Near-duplicate merge threshold");
  cmd->add_option("--min-support", o.min_support, "Minimum occurrences per template");
  cmd->add_option("--min-size", o.min_size, "Minimum template size in nodes");
}

void add_emit_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--fuzz-seed", o.fuzz_seed, "Emit through the fuzz proposer with this seed");
  cmd->add_option("--fuel", o.fuel, "Proposal budget for the filtered emitter");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine UI trees into component blueprints and emit framework code"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "Machine-readable output");
  app.add_option("--config", o.config_path, "JSON config file (flags take precedence)");

  std::string input, output, bundle_dir;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::size_t generate = 0;
  std::uint64_t generate_seed = 1;

  auto* ingest = app.add_subcommand("ingest", "Group a box list into a blueprint");
  ingest->add_option("--boxes", input, "Box list JSON")->required();
  ingest->add_option("--gap", o.gap, "XY-cut gap threshold");
  ingest->add_option("-o,--output", output, "Output blueprint");

  auto* mine_cmd = app.add_subcommand("mine", "Mine templates, instances and loop groups");
  mine_cmd->add_option("blueprint", input, "Input blueprint")->required();
  add_miner_flags(mine_cmd, o);
  mine_cmd->add_option("-o,--output", output, "Output blueprint");

  auto* emit_cmd = app.add_subcommand("emit", "Emit a code bundle from a mined blueprint");
  emit_cmd->add_option("blueprint", input, "Mined blueprint")->required();
  emit_cmd->add_option("--framework", o.framework, "html, react, vue or angular");
  add_emit_flags(emit_cmd, o);
  emit_cmd->add_option("-o,--output", output, "Bundle directory");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a bundle against its blueprint");
  eval_cmd->add_option("--blueprint", input, "Mined blueprint")->required();
  eval_cmd->add_option("--bundle", bundle_dir, "Bundle directory")->required();
  eval_cmd->add_option("--framework", o.framework, "html, react, vue or angular");
  eval_cmd->add_flag("--strict-labels", o.strict_labels, "Compare payload values in TED");

  auto* roundtrip = app.add_subcommand("roundtrip", "Mine, emit HTML, parse it back and compare");
  roundtrip->add_option("blueprint", input, "Input blueprint or box list")->required();
  add_miner_flags(roundtrip, o);
  roundtrip->add_flag("--strict-labels", o.strict_labels, "Compare payload values in TED");

  auto* pipeline = app.add_subcommand("pipeline", "ingest/mine/emit/eval one document");
  pipeline->add_option("input", input, "Blueprint or box list")->required();
  pipeline->add_option("--framework", o.framework, "html, react, vue or angular");
  pipeline->add_option("--gap", o.gap, "XY-cut gap threshold for box lists");
  add_miner_flags(pipeline, o);
  add_emit_flags(pipeline, o);
  pipeline->add_flag("--strict-labels", o.strict_labels, "Compare payload values in TED");
  pipeline->add_option("-o,--output", output, "Output directory");

  auto* corpus = app.add_subcommand("corpus", "Run the pipeline over every .json file of a directory");
  corpus->add_option("dir", input, "Corpus directory")->required();
  corpus->add_option("--framework", o.framework, "html, react, vue or angular");
  corpus->add_option("--workers", workers, "Worker threads");
  corpus->add_option("--generate", generate, "First write this many synthetic documents into dir");
  corpus->add_option("--seed", generate_seed, "Seed for --generate");
  add_miner_flags(corpus, o);
  add_emit_flags(corpus, o);
  corpus->add_flag("--strict-labels", o.strict_labels, "Compare payload values in TED");
  corpus->add_option("-o,--output", output, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig cfg = stage(Stage::Parse, [&] { return effective_config(o); });
    RunManifest manifest;
    manifest.config = cfg;

    if (ingest->parsed()) {
      const fs::path out = output.empty() ? default_out("blueprint.json") : fs::path(output);
      const std::string bytes = stage(Stage::Parse, [&] { return read_file(input); });
      const Blueprint bp = stage(Stage::Parse, [&] {
        const auto boxes = parse_boxes(bytes);
        Blueprint b;
        b.tree = group_boxes(boxes, cfg.gap ? *cfg.gap : (boxes.size() >= 2 ? infer_gap_threshold(boxes) : 0.01));
        return b;
      });
      manifest.inputs.emplace_back(input, sha256_hex(bytes));
      manifest.outputs.emplace_back(out.string(), stage(Stage::Parse, [&] {
        return write_file(out, serialize_blueprint(bp));
      }));
      write_manifest(out.string() + ".manifest.json", manifest);
      print(o, {{"output", out.string()}, {"nodes", bp.tree.size()}},
            "wrote " + out.string() + " (" + std::to_string(bp.tree.size()) + " nodes)");
      return 0;
    }

    if (mine_cmd->parsed()) {
      const fs::path out = output.empty() ? default_out("mined.json") : fs::path(output);
      const std::string bytes = stage(Stage::Parse, [&] { return read_file(input); });
      const Blueprint in = stage(Stage::Parse, [&] { return load_input(bytes, cfg.gap); });
      MinerStats stats;
      const Blueprint bp = stage(Stage::Mine, [&] {
        cfg.miner.validate();
        return mine(in.tree, cfg.miner, &stats);
      });
      manifest.inputs.emplace_back(input, sha256_hex(bytes));
      manifest.outputs.emplace_back(out.string(), stage(Stage::Mine, [&] {
        return write_file(out, serialize_blueprint(bp));
      }));
      write_manifest(out.string() + ".manifest.json", manifest);
      print(o,
            {{"output", out.string()},
             {"templates", bp.templates.size()},
             {"instances", bp.instances.size()},
             {"loop_groups", bp.loop_groups.size()},
             {"merges", stats.merges}},
            "wrote " + out.string() + ": " + std::to_string(bp.templates.size()) + " templates, " +
                std::to_string(bp.instances.size()) + " instances, " + std::to_string(bp.loop_groups.size()) +
                " loop groups");
      return 0;
    }

    if (emit_cmd->parsed()) {
      const fs::path out = output.empty() ? default_out("bundle") : fs::path(output);
      const std::string bytes = stage(Stage::Parse, [&] { return read_file(input); });
      const Blueprint bp = stage(Stage::Parse, [&] { return parse_blueprint(bytes); });
      const CodeBundle bundle = stage(Stage::Emit, [&] { return emit_bundle(bp, cfg); });
      manifest.inputs.emplace_back(input, sha256_hex(bytes));
      manifest.outputs = stage(Stage::Emit, [&] { return write_bundle(bundle, out); });
      write_manifest(out / "run_manifest.json", manifest);
      print(o, bundle_manifest(bundle),
            "wrote " + std::to_string(bundle.files.size()) + " files to " + out.string());
      return 0;
    }

    if (eval_cmd->parsed()) {
      const Blueprint bp = stage(Stage::Parse, [&] { return parse_blueprint(read_file(input)); });
      const CodeBundle bundle = stage(Stage::Parse, [&] { return read_bundle(bundle_dir, cfg.framework); });
      const EvalReport r = stage(Stage::Eval, [&] { return evaluate(bp, bundle, cfg.labels); });
      // Report goes to stdout as JSON regardless of --json.
      std::cout << canonical_dump(report_to_json(r));
      return 0;
    }

    if (roundtrip->parsed()) {
      const Blueprint in = stage(Stage::Parse, [&] { return load_input(read_file(input), cfg.gap); });
      const Blueprint bp = stage(Stage::Mine, [&] {
        cfg.miner.validate();
        return mine(in.tree, cfg.miner);
      });
      const CodeBundle html = stage(Stage::Emit, [&] { return emit(bp, Framework::Html); });
      const int ted = stage(Stage::Eval, [&] {
        return tree_edit_distance(parse_html_bundle(html), expand_blueprint(bp), cfg.labels);
      });
      print(o, {{"roundtrip_ted", ted}}, "roundtrip_ted=" + std::to_string(ted));
      return ted == 0 ? 0 : static_cast<int>(Stage::Eval);
    }

    if (pipeline->parsed()) {
      const fs::path out = output.empty() ? default_out("pipeline") : fs::path(output);
      const std::string bytes = stage(Stage::Parse, [&] { return read_file(input); });
      const DocumentResult r = run_document(fs::path(input).filename().string(), bytes, cfg);
      manifest.inputs.emplace_back(input, r.input_sha256);
      manifest.outputs = stage(Stage::Eval, [&] { return write_document(r, out); });
      manifest.stage_ms = r.stage_ms;
      write_manifest(out / "run_manifest.json", manifest);
      print(o, report_to_json(r.report), summary(r.report));
      if (r.report.pc != 1.0) {
        std::cerr << "eval: prop coverage " << r.report.pc << " < 1\n";
        return static_cast<int>(Stage::Eval);
      }
      return 0;
    }

    if (corpus->parsed()) {
      const fs::path out = output.empty() ? default_out("corpus") : fs::path(output);
      if (generate > 0) {
        stage(Stage::Parse, [&] {
          for (const auto& d : synthetic_corpus(generate_seed, generate)) {
            Blueprint bp;
            bp.tree = d.tree;
            write_file(fs::path(input) / d.name, serialize_blueprint(bp));
          }
          return 0;
        });
      }
      const CorpusResult res = stage(Stage::Parse, [&] { return run_corpus(input, cfg, workers); });
      for (const auto& d : res.documents) {
        manifest.inputs.emplace_back(d.name, d.input_sha256);
        const fs::path stem = fs::path(d.name).stem();
        for (auto& [path, sha] : stage(Stage::Eval, [&] { return write_document(d, out / stem); })) {
          manifest.outputs.emplace_back((stem / path).generic_string(), sha);
        }
        manifest.stage_ms.insert(manifest.stage_ms.end(), d.stage_ms.begin(), d.stage_ms.end());
      }
      const Json agg = aggregate_report(res);
      manifest.outputs.emplace_back("aggregate.json",
                                    stage(Stage::Eval, [&] { return write_file(out / "aggregate.json", canonical_dump(agg)); }));
      write_manifest(out / "run_manifest.json", manifest);
      std::ostringstream human;
      human << res.documents.size() << " documents, " << res.failures.size() << " failures; crr="
            << agg["crr"].get<double>() << " lpa=" << agg["lpa"].get<double>() << " pc=" << agg["pc"].get<double>()
            << " afc=" << agg["afc"].get<double>();
      for (const auto& f : res.failures) human << "\n  " << f.name << ": " << f.message;
      print(o, agg, human.str());
      if (!res.failures.empty()) return static_cast<int>(res.failures.front().stage);
      return 0;
    }
  } catch (const StageError& e) {
    std::cerr << e.what() << "\n";
    return static_cast<int>(e.stage());
  }
  return 0;
}
