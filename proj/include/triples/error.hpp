#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace triples {

/// Categories of failure surfaced by the library. Numerical guards map onto
/// dedicated CLI exit codes, so every kind here must stay distinguishable.
enum class ErrorKind {
    Shape,
    Composition,
    Singularity,
    Inversion,
    Capacity,
    KahlerPositivity,
    EmptySections,
    NonPositiveVolume,
    DegenerateGram,
    BasePointLocus,
    Inadmissible,
    Config,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// True for guards raised by the numerics themselves (CLI exit code 3);
/// the remaining kinds reject the input (exit code 2) or report I/O trouble.
bool is_numerical_guard(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::optional<long> node = std::nullopt,
          std::string object = {})
        : std::runtime_error(message), kind_(kind), node_(node), object_(std::move(object)) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// Offending quadrature node, when the failure is pointwise.
    std::optional<long> node() const noexcept { return node_; }
    /// Name of the offending matrix or field, if any.
    const std::string& object() const noexcept { return object_; }

private:
    ErrorKind kind_;
    std::optional<long> node_;
    std::string object_;
};

}  // namespace triples
