#include "latwave/error.hpp"

namespace latwave {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::AmbiguousBoundary: return "ambiguous-boundary";
    case ErrorKind::UnsupportedShape: return "unsupported-shape";
    case ErrorKind::MissingLevel: return "missing-level";
    case ErrorKind::MissingNeighbor: return "missing-neighbor";
    case ErrorKind::CorruptedState: return "corrupted-state";
    case ErrorKind::CflViolated: return "cfl-violated";
    case ErrorKind::TailTooLarge: return "tail-too-large";
    case ErrorKind::SGridMisaligned: return "s-grid-misaligned";
    case ErrorKind::BlowupDetected: return "blowup-detected";
    case ErrorKind::NanDetected: return "nan-detected";
    case ErrorKind::SingularSystem: return "singular-system";
    case ErrorKind::NoCommonPoints: return "no-common-points";
    case ErrorKind::Config: return "configuration-error";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

}  // namespace latwave
