#pragma once

// Confidence-weighted retrieval objectives. Each per-sample term is scaled by
// C^beta, the confidence of the sample's pseudo caption raised to beta; at
// beta = 0 every loss reduces to its unweighted form.
//
// Gradients are taken with respect to the raw entries of the inputs. The
// kernels never renormalize embeddings, so callers that normalize (the
// reference trainer does) chain the gradient through that step themselves.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace gtr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultTemperature = 0.07;
inline constexpr double kDefaultSdmEpsilon = 1e-8;

// Row i of image_embeddings pairs with row i of text_embeddings.
struct TrainingBatch {
    Matrix image_embeddings;
    Matrix text_embeddings;
    Vector confidences;
    std::vector<std::int64_t> identity_labels;
    double temperature = kDefaultTemperature;
    double beta = 0.0;

    Eigen::Index size() const { return image_embeddings.rows(); }
};

// Throws InvalidArgument unless every embedding row has unit L2 norm.
void check_unit_norm(const TrainingBatch& batch, double tolerance = 1e-6);

// Image-text contrastive loss, averaged over both retrieval directions.
struct ItcResult {
    double loss = 0.0;
    Matrix grad_image;
    Matrix grad_text;
    double grad_temperature = 0.0;
};

ItcResult cs_itc_loss(const TrainingBatch& batch);

// Image-text matching: a 2-way classification of (image, text) pairs.
// labels[k] is 1 for a positive pair ([0,1]) and 0 for a negative ([1,0]).
struct ItmBatch {
    Matrix pair_scores;  // K x 2 logits
    std::vector<int> labels;
    Vector confidences;
    double beta = 0.0;
};

struct ItmResult {
    double loss = 0.0;
    Matrix grad_scores;
};

ItmResult cs_itm_loss(const ItmBatch& batch);

enum class NegativeStrategy { Uniform, Hard };

struct ItmPair {
    Eigen::Index image = 0;
    Eigen::Index text = 0;
    bool positive = false;
    double confidence = 1.0;

    friend bool operator==(const ItmPair&, const ItmPair&) = default;
};

// 3M pairs: the M positives (i, i), then for each image a text of another
// identity, then for each text an image of another identity. Uniform draws
// the negative at random; Hard takes the most similar wrong-identity
// candidate (lowest index on ties). Each pair carries its text's confidence.
// Throws NoNegativeAvailable when a row has no other-identity candidate.
std::vector<ItmPair> sample_itm_pairs(const TrainingBatch& batch, NegativeStrategy strategy,
                                      std::uint64_t seed);

// Similarity distribution matching: KL divergence between the softmax over
// confidence-scaled similarities and the identity-normalized label
// distribution, summed over both directions.
struct SdmResult {
    double loss = 0.0;
    Matrix grad_image;
    Matrix grad_text;
    double grad_temperature = 0.0;
};

SdmResult cs_sdm_loss(const TrainingBatch& batch, double epsilon = kDefaultSdmEpsilon);

// Masked-token prediction. logits[t] is |M_t| x |V|; targets[t][i] is the
// vocabulary index of the i-th masked token of text t.
struct IrrBatch {
    std::vector<Matrix> logits;
    std::vector<std::vector<int>> targets;
    Vector confidences;
    double beta = 0.0;
};

struct IrrResult {
    double loss = 0.0;
    std::vector<Matrix> grad_logits;
};

IrrResult cs_irr_loss(const IrrBatch& batch);

// Identity classification of both modalities through a shared linear head.
// Only the text branch is confidence weighted, and the weight multiplies the
// projection term, not the bias.
struct IdBatch {
    Matrix text_features;   // N x d
    Matrix image_features;  // N x d
    Matrix class_weights;   // M x d
    Vector biases;          // M
    std::vector<int> labels;
    Vector confidences;
    double beta = 0.0;
};

struct IdResult {
    double loss = 0.0;
    double loss_image = 0.0;
    double loss_text = 0.0;
    Matrix grad_text;
    Matrix grad_image;
    Matrix grad_weights;
    Vector grad_biases;
};

IdResult cs_id_loss(const IdBatch& batch);

}  // namespace gtr
