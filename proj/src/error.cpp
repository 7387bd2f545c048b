#include "moel/error.hpp"

namespace moel {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::RaggedLines: return "RaggedLines";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::PatternTooLarge: return "PatternTooLarge";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::EmptyTrace: return "EmptyTrace";
    case ErrorKind::PatternSizeMismatch: return "PatternSizeMismatch";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::PoolTooSmall: return "PoolTooSmall";
    case ErrorKind::PointBeyondNadir: return "PointBeyondNadir";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::EmptyReference: return "EmptyReference";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
    case ErrorKind::CorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorKind::NonFiniteObjective: return "NonFiniteObjective";
    }
    return "Unknown";
}

} // namespace moel
