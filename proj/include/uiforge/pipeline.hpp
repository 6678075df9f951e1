#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uiforge/blueprint_json.hpp"
#include "uiforge/emit/render.hpp"
#include "uiforge/error.hpp"
#include "uiforge/metrics.hpp"
#include "uiforge/miner.hpp"

namespace uiforge {

inline constexpr const char* kToolVersion = "0.1.0";

/// Values double as process exit codes.
enum class Stage { Parse = 1, Mine = 2, Emit = 3, Eval = 4 };

std::string_view to_string(Stage s);

class StageError : public std::runtime_error {
 public:
  StageError(Stage stage, const Error& cause)
      : std::runtime_error(std::string(to_string(stage)) + ": " + cause.what()),
        stage_(stage),
        code_(cause.code()) {}

  Stage stage() const noexcept { return stage_; }
  ErrorCode code() const noexcept { return code_; }

 private:
  Stage stage_;
  ErrorCode code_;
};

struct PipelineConfig {
  MinerConfig miner;
  Framework framework = Framework::Html;
  /// XY-cut gap for box inputs; inferred from the boxes when unset.
  std::optional<double> gap;
  /// Emit through the fuzz proposer with this seed.
  std::optional<std::uint64_t> fuzz_seed;
  std::optional<std::size_t> fuel;
  LabelMode labels = LabelMode::Structural;
};

Json config_to_json(const PipelineConfig& cfg);

/// A JSON array is read as a box list and grouped; an object is read as a
/// blueprint.
Blueprint load_input(std::string_view bytes, std::optional<double> gap);

CodeBundle emit_bundle(const Blueprint& bp, const PipelineConfig& cfg);

struct DocumentResult {
  std::string name;
  std::string input_sha256;
  Blueprint mined;
  CodeBundle bundle;
  EvalReport report;
  std::vector<std::pair<std::string, double>> stage_ms;
};

/// ingest (or parse) -> mine -> emit -> eval. Throws StageError.
DocumentResult run_document(std::string name, std::string_view bytes, const PipelineConfig& cfg);

std::string read_file(const std::filesystem::path& path);
/// Writes `content` and returns its SHA-256.
std::string write_file(const std::filesystem::path& path, const std::string& content);

/// {"framework", "files": [{"path", "sha256"}]}
Json bundle_manifest(const CodeBundle& bundle);
/// Writes every file plus manifest.json under `dir`; returns (relative path,
/// sha256) for the source files.
std::vector<std::pair<std::string, std::string>> write_bundle(const CodeBundle& bundle,
                                                              const std::filesystem::path& dir);
/// Reads a bundle directory written by write_bundle. Without a manifest,
/// every regular file is taken in path order.
CodeBundle read_bundle(const std::filesystem::path& dir, Framework fw);

/// Writes mined.json, bundle/ and report.json under `dir`; returns
/// (relative path, sha256) for each output.
std::vector<std::pair<std::string, std::string>> write_document(const DocumentResult& r,
                                                                const std::filesystem::path& dir);

struct RunManifest {
  PipelineConfig config;
  std::vector<std::pair<std::string, std::string>> inputs;   // name, sha256
  std::vector<std::pair<std::string, std::string>> outputs;  // path, sha256
  std::vector<std::pair<std::string, double>> stage_ms;
};

Json manifest_to_json(const RunManifest& m);

struct CorpusFailure {
  std::string name;
  Stage stage;
  std::string message;
};

struct CorpusResult {
  std::vector<DocumentResult> documents;  // sorted by name
  std::vector<CorpusFailure> failures;    // sorted by name
};

/// Runs every *.json file of `dir` on `workers` threads. Throws
/// Error{EmptyCorpus} when there are none.
CorpusResult run_corpus(const std::filesystem::path& dir, const PipelineConfig& cfg, unsigned workers);

/// Means of the per-document rates, computed in name order.
Json aggregate_report(const CorpusResult& r);

}  // namespace uiforge
