#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gtr/features.hpp"
#include "gtr/manifest.hpp"

namespace gtr {

// Anything that can place gallery images and query texts in one space.
class RetrievalEncoder {
public:
    virtual ~RetrievalEncoder() = default;
    virtual Matrix encode_images(const std::vector<const ManifestEntry*>& images) const = 0;
    virtual Matrix encode_texts(const std::vector<std::string>& texts) const = 0;
};

// Two-tower linear encoder. The image tower projects the attribute one-hot
// encoding of an image (plus optional fixed per-image Gaussian jitter); the
// text tower projects hashed unigram/bigram counts. Both outputs are
// L2-normalized.
class ReferenceRetrievalModel final : public RetrievalEncoder {
public:
    ReferenceRetrievalModel() = default;
    ReferenceRetrievalModel(AttributeVocabulary vocab, std::size_t hash_dim, std::size_t embedding_dim,
                            double image_noise, std::uint64_t noise_seed, double temperature,
                            std::uint64_t init_seed);

    Vector image_features(const ManifestEntry& entry) const;
    Vector text_features(std::string_view text) const;
    Vector text_features(const std::vector<std::string>& tokens) const;

    Matrix encode_images(const std::vector<const ManifestEntry*>& images) const override;
    Matrix encode_texts(const std::vector<std::string>& texts) const override;

    std::size_t embedding_dim() const noexcept { return static_cast<std::size_t>(image_proj.rows()); }
    std::size_t hash_dim() const noexcept { return hash_dim_; }
    double temperature() const noexcept { return std::exp(log_temperature); }

    void save(const std::filesystem::path& path) const;
    static ReferenceRetrievalModel load(const std::filesystem::path& path);

    Matrix image_proj;  // d x F
    Matrix text_proj;   // d x H
    double log_temperature = 0.0;

private:
    AttributeVocabulary vocab_;
    std::size_t hash_dim_ = 0;
    double image_noise_ = 0.0;
    std::uint64_t noise_seed_ = 0;
};

// Row-wise L2 normalization; also returns the pre-normalization norms.
Matrix normalize_rows(const Matrix& m, Vector* norms = nullptr);

// Gradient through row normalization: given dL/dE for E = normalize_rows(U),
// returns dL/dU.
Matrix normalize_rows_backward(const Matrix& normalized, const Vector& norms, const Matrix& grad);

}  // namespace gtr
