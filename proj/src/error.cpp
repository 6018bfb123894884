#include "triples/error.hpp"

namespace triples {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Shape: return "ShapeError";
        case ErrorKind::Composition: return "CompositionError";
        case ErrorKind::Singularity: return "SingularityError";
        case ErrorKind::Inversion: return "InversionError";
        case ErrorKind::Capacity: return "CapacityError";
        case ErrorKind::KahlerPositivity: return "KahlerPositivity";
        case ErrorKind::EmptySections: return "EmptySections";
        case ErrorKind::NonPositiveVolume: return "NonPositiveVolume";
        case ErrorKind::DegenerateGram: return "DegenerateGram";
        case ErrorKind::BasePointLocus: return "BasePointLocus";
        case ErrorKind::Inadmissible: return "Inadmissible";
        case ErrorKind::Config: return "ConfigError";
        case ErrorKind::Io: return "IoError";
    }
    return "Unknown";
}

bool is_numerical_guard(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonPositiveVolume:
        case ErrorKind::DegenerateGram:
        case ErrorKind::BasePointLocus:
        case ErrorKind::Singularity:
        case ErrorKind::Inversion:
        case ErrorKind::Capacity:
        case ErrorKind::Shape:
        case ErrorKind::Composition:
            return true;
        default:
            return false;
    }
}

}  // namespace triples
