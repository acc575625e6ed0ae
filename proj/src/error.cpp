#include "gtr/error.hpp"

namespace gtr {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::MissingKey: return "missing_key";
        case Errc::DuplicateKey: return "duplicate_key";
        case Errc::ConfidenceOutOfRange: return "confidence_out_of_range";
        case Errc::InvalidValue: return "invalid_value";
        case Errc::UnparseableAnswer: return "unparseable_answer";
        case Errc::BackendFailure: return "backend";
        case Errc::UnknownBackend: return "backend";
        case Errc::UnknownImage: return "unknown_image";
        case Errc::EmptyExtraction: return "empty_extraction";
        case Errc::InvalidArgument: return "invalid_argument";
        case Errc::DegenerateBatch: return "degenerate_batch";
        case Errc::NoNegativeAvailable: return "no_negative_available";
        case Errc::DimensionMismatch: return "dimension_mismatch";
        case Errc::DegenerateCorpus: return "degenerate_corpus";
        case Errc::NoRelevantItem: return "no_relevant_item";
        case Errc::ParseError: return "parse";
        case Errc::DuplicateImageId: return "duplicate_image_id";
        case Errc::MixedAttributeCoverage: return "mixed_attribute_coverage";
        case Errc::EmptyTrainSet: return "empty_train_set";
        case Errc::NonFiniteLoss: return "non_finite_loss";
        case Errc::ConfigError: return "config";
        case Errc::IoError: return "io";
    }
    return "unknown";
}

bool is_backend_error(Errc code) noexcept {
    return code == Errc::BackendFailure || code == Errc::UnknownBackend ||
           code == Errc::UnparseableAnswer;
}

}  // namespace gtr
