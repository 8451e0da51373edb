#include "fairtt/error.hpp"

namespace fairtt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedEntry: return "MalformedEntry";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::DuplicateIdentifier: return "DuplicateIdentifier";
    case ErrorCode::InvalidPeriod: return "InvalidPeriod";
    case ErrorCode::Overcapacity: return "Overcapacity";
    case ErrorCode::UnknownCourse: return "UnknownCourse";
    case ErrorCode::UnknownRoom: return "UnknownRoom";
    case ErrorCode::UnknownCurriculum: return "UnknownCurriculum";
    case ErrorCode::LectureCountMismatch: return "LectureCountMismatch";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::NotWorse: return "NotWorse";
    case ErrorCode::NoLectureInPeriod: return "NoLectureInPeriod";
    case ErrorCode::RoomOverflow: return "RoomOverflow";
    case ErrorCode::UnavailabilityViolated: return "UnavailabilityViolated";
    case ErrorCode::NoNeighborFound: return "NoNeighborFound";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::InfeasibleStart: return "InfeasibleStart";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace fairtt
