#pragma once

#include <stdexcept>
#include <string>

namespace moel {

enum class ErrorKind {
    UnknownSymbol,
    RaggedLines,
    EmptyInput,
    NonFiniteInput,
    PatternTooLarge,
    ShapeMismatch,
    EmptyTrace,
    PatternSizeMismatch,
    TooFewSamples,
    NonFiniteGradient,
    EmptyCorpus,
    PoolTooSmall,
    PointBeyondNadir,
    UnsupportedDimension,
    EmptyReference,
    InvalidConfig,
    Io,
    CorruptCheckpoint,
    NonFiniteObjective,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; `kind()` lets callers and tests
// distinguish failure classes without a class per error.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace moel
