#include "cone_fixpoint/error.hpp"

namespace cone_fixpoint {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kInvalidSpec: return "invalid-spec";
    case ErrorKind::kNotAContraction: return "not-a-contraction";
    case ErrorKind::kEstimation: return "estimation";
    case ErrorKind::kInvalidWitness: return "invalid-witness";
    case ErrorKind::kUnsupportedInstance: return "unsupported-instance";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace cone_fixpoint
