#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gtr {

enum class Errc {
    MissingKey,
    DuplicateKey,
    ConfidenceOutOfRange,
    InvalidValue,
    UnparseableAnswer,
    BackendFailure,
    UnknownBackend,
    UnknownImage,
    EmptyExtraction,
    InvalidArgument,
    DegenerateBatch,
    NoNegativeAvailable,
    DimensionMismatch,
    DegenerateCorpus,
    NoRelevantItem,
    ParseError,
    DuplicateImageId,
    MixedAttributeCoverage,
    EmptyTrainSet,
    NonFiniteLoss,
    ConfigError,
    IoError,
};

// Stable machine-readable name, used in "GTR-ERR:<code>:" diagnostics.
std::string_view errc_name(Errc code) noexcept;

// True for failures that originate in a model backend rather than in user input.
bool is_backend_error(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace gtr
