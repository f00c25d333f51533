#pragma once

#include <stdexcept>
#include <string>

namespace seal {

// Base class for every error this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor shape disagreement (matmul operand mismatch, bad reshape, ...).
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Sequence longer than the model's hard position cap.
struct LengthError : Error {
    explicit LengthError(const std::string& msg) : Error(msg) {}
};

// Token id outside the vocabulary, or text the tokenizer cannot encode.
struct TokenError : Error {
    explicit TokenError(const std::string& msg) : Error(msg) {}
};

// Task generator cannot satisfy the requested parameters.
struct GenerationError : Error {
    explicit GenerationError(const std::string& msg) : Error(msg) {}
};

// Requested scale merge is not representable in the target weights.
struct MergeTargetError : Error {
    explicit MergeTargetError(const std::string& msg) : Error(msg) {}
};

// Loss mask selects no positions.
struct EmptyMaskError : Error {
    explicit EmptyMaskError(const std::string& msg) : Error(msg) {}
};

// Non-finite loss or gradient during optimization.
struct TrainingError : Error {
    explicit TrainingError(const std::string& msg) : Error(msg) {}
};

// File read/write/parse failure.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// A requested verification (e.g. a post-merge equivalence check) failed.
struct VerifyError : Error {
    explicit VerifyError(const std::string& msg) : Error(msg) {}
};

} // namespace seal
