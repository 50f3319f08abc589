#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mids {

enum class ErrorCode {
  // bayes
  CyclicGraph,
  CptRowNotNormalized,
  ArityMismatch,
  IncompleteAssignment,
  StateSpaceTooLarge,
  ZeroProbabilityEvidence,
  NotChordal,
  NotCalibrated,
  UnknownVariable,
  // msbn
  UnsoundDsepset,
  NotHypertree,
  UncoveredVariable,
  NotAdjacent,
  // trust / simnet
  MajorityAssumptionViolated,
  UnknownHost,
  SenderIsolated,
  TickLimitExceeded,
  // agents
  DuplicateAgentId,
  UnknownAgent,
  AlreadyResolved,
  TooFewConfirmedRecords,
  UnknownAlertId,
  // detect
  MalformedLine,
  UnknownLabel,
  NotEnoughRecords,
  EmptyDataset,
  EmptyTestSet,
  DegenerateAttribute,
  // cli / io
  BundleMismatch,
  ParseError,
  Io,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mids
