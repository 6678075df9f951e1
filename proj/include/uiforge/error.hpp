#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uiforge {

enum class ErrorCode {
  // core model / file formats
  MalformedJson,
  UnknownKind,
  InvalidBox,
  PayloadMismatch,
  OverlappingInstances,
  DanglingReference,
  TemplateMismatch,
  // ingest
  EmptyInput,
  InvalidThreshold,
  TooFewItems,
  // miner
  UnknownNode,
  StructuralMismatch,
  // emitter
  UnsupportedFramework,
  InternalConstraintViolation,
  InadmissibleEvent,
  IncompleteStream,
  FuelExhausted,
  // metrics
  UnparsableBundle,
  UnknownTagMapping,
  // driver
  EmptyCorpus,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library surfaces as this exception; `code()` is the
/// stable classification, `what()` the human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uiforge
