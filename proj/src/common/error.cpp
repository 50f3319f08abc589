#include "mids/common/error.hpp"

namespace mids {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CyclicGraph: return "CyclicGraph";
    case ErrorCode::CptRowNotNormalized: return "CptRowNotNormalized";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::IncompleteAssignment: return "IncompleteAssignment";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::ZeroProbabilityEvidence: return "ZeroProbabilityEvidence";
    case ErrorCode::NotChordal: return "NotChordal";
    case ErrorCode::NotCalibrated: return "NotCalibrated";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::UnsoundDsepset: return "UnsoundDsepset";
    case ErrorCode::NotHypertree: return "NotHypertree";
    case ErrorCode::UncoveredVariable: return "UncoveredVariable";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::MajorityAssumptionViolated: return "MajorityAssumptionViolated";
    case ErrorCode::UnknownHost: return "UnknownHost";
    case ErrorCode::SenderIsolated: return "SenderIsolated";
    case ErrorCode::TickLimitExceeded: return "TickLimitExceeded";
    case ErrorCode::DuplicateAgentId: return "DuplicateAgentId";
    case ErrorCode::UnknownAgent: return "UnknownAgent";
    case ErrorCode::AlreadyResolved: return "AlreadyResolved";
    case ErrorCode::TooFewConfirmedRecords: return "TooFewConfirmedRecords";
    case ErrorCode::UnknownAlertId: return "UnknownAlertId";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NotEnoughRecords: return "NotEnoughRecords";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::EmptyTestSet: return "EmptyTestSet";
    case ErrorCode::DegenerateAttribute: return "DegenerateAttribute";
    case ErrorCode::BundleMismatch: return "BundleMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace mids
