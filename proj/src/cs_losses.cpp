#include "gtr/cs_losses.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gtr/confidence.hpp"
#include "gtr/error.hpp"
#include "gtr/rng.hpp"

namespace gtr {

namespace {

double log_sum_exp(const Eigen::Ref<const Vector>& z) {
    const double m = z.maxCoeff();
    return m + std::log((z.array() - m).exp().sum());
}

// Row-wise log-softmax of a matrix.
Matrix log_softmax_rows(const Matrix& z) {
    Matrix out(z.rows(), z.cols());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        out.row(i) = z.row(i).array() - log_sum_exp(z.row(i).transpose());
    }
    return out;
}

Vector weights_for(const Vector& confidences, double beta) {
    Vector w(confidences.size());
    for (Eigen::Index i = 0; i < confidences.size(); ++i) {
        const double c = confidences[i];
        if (!(c > 0.0 && c <= 1.0)) {
            throw Error(Errc::ConfidenceOutOfRange,
                        "batch confidence " + std::to_string(c) + " outside (0, 1]");
        }
        w[i] = confidence_weight(c, beta);
    }
    return w;
}

void check_beta(double beta) {
    if (!std::isfinite(beta) || beta < 0.0) {
        throw Error(Errc::InvalidArgument, "beta must be finite and >= 0");
    }
}

void check_pair_batch(const TrainingBatch& b) {
    const auto m = b.image_embeddings.rows();
    if (m == 0) throw Error(Errc::DegenerateBatch, "empty training batch");
    if (b.text_embeddings.rows() != m || b.confidences.size() != m ||
        b.image_embeddings.cols() != b.text_embeddings.cols()) {
        throw Error(Errc::DimensionMismatch, "image/text/confidence shapes disagree");
    }
    if (!(b.temperature > 0.0) || !std::isfinite(b.temperature)) {
        throw Error(Errc::InvalidArgument, "temperature must be positive");
    }
    check_beta(b.beta);
}

void check_labels(const TrainingBatch& b) {
    if (static_cast<Eigen::Index>(b.identity_labels.size()) != b.size()) {
        throw Error(Errc::DimensionMismatch, "identity labels do not match batch size");
    }
}

// Gradient of sum_j p_j (log p_j - a_j) with p = softmax(z), w.r.t. z.
// Returns the row loss; writes the gradient into grad.
double kl_row(const Vector& z, const Vector& log_target, Vector& grad) {
    const Vector log_p = z.array() - log_sum_exp(z);
    const Vector p = log_p.array().exp();
    const Vector diff = log_p - log_target;
    const double row_loss = p.dot(diff);
    grad = p.array() * (diff.array() - row_loss);
    return row_loss;
}

}  // namespace

void check_unit_norm(const TrainingBatch& batch, double tolerance) {
    for (const Matrix* m : {&batch.image_embeddings, &batch.text_embeddings}) {
        for (Eigen::Index i = 0; i < m->rows(); ++i) {
            if (std::abs(m->row(i).norm() - 1.0) > tolerance) {
                throw Error(Errc::InvalidArgument, "embedding row " + std::to_string(i) + " is not unit norm");
            }
        }
    }
}

ItcResult cs_itc_loss(const TrainingBatch& batch) {
    check_pair_batch(batch);
    const auto m = batch.size();
    const double tau = batch.temperature;
    const Vector w = weights_for(batch.confidences, batch.beta);

    const Matrix sim = batch.image_embeddings * batch.text_embeddings.transpose();
    const Matrix z = sim / tau;
    const Matrix log_row = log_softmax_rows(z);
    const Matrix log_col = log_softmax_rows(z.transpose()).transpose();

    double i2t = 0.0, t2i = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        i2t -= w[i] * log_row(i, i);
        t2i -= w[i] * log_col(i, i);
    }
    const double inv_m = 1.0 / static_cast<double>(m);

    ItcResult r;
    r.loss = 0.5 * (i2t + t2i) * inv_m;

    // d loss / d z
    Matrix g = 0.5 * inv_m *
               (w.asDiagonal() * Matrix(log_row.array().exp()) + Matrix(log_col.array().exp()) * w.asDiagonal());
    g.diagonal() -= inv_m * w;

    r.grad_image = g * batch.text_embeddings / tau;
    r.grad_text = g.transpose() * batch.image_embeddings / tau;
    r.grad_temperature = -(g.array() * sim.array()).sum() / (tau * tau);
    return r;
}

ItmResult cs_itm_loss(const ItmBatch& batch) {
    const auto k = batch.pair_scores.rows();
    if (k == 0) throw Error(Errc::DegenerateBatch, "empty ITM batch");
    if (batch.pair_scores.cols() != 2 || static_cast<Eigen::Index>(batch.labels.size()) != k ||
        batch.confidences.size() != k) {
        throw Error(Errc::DimensionMismatch, "ITM scores must be K x 2 with K labels and confidences");
    }
    check_beta(batch.beta);
    const Vector w = weights_for(batch.confidences, batch.beta);
    const double inv_k = 1.0 / static_cast<double>(k);

    ItmResult r;
    r.grad_scores = Matrix::Zero(k, 2);
    for (Eigen::Index i = 0; i < k; ++i) {
        const int y = batch.labels[static_cast<std::size_t>(i)];
        if (y != 0 && y != 1) throw Error(Errc::InvalidArgument, "ITM label must be 0 or 1");
        const Vector z = batch.pair_scores.row(i).transpose();
        const double lse = log_sum_exp(z);
        r.loss += w[i] * (lse - z[y]) * inv_k;
        const Vector p = (z.array() - lse).exp();
        r.grad_scores.row(i) = w[i] * inv_k * p.transpose();
        r.grad_scores(i, y) -= w[i] * inv_k;
    }
    return r;
}

std::vector<ItmPair> sample_itm_pairs(const TrainingBatch& batch, NegativeStrategy strategy,
                                      std::uint64_t seed) {
    check_pair_batch(batch);
    check_labels(batch);
    const auto m = batch.size();
    const auto& labels = batch.identity_labels;

    Matrix sim;
    if (strategy == NegativeStrategy::Hard) {
        sim = batch.image_embeddings * batch.text_embeddings.transpose();
    }
    Rng rng(seed);

    auto pick = [&](Eigen::Index anchor, bool anchor_is_image) {
        std::vector<Eigen::Index> candidates;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (labels[static_cast<std::size_t>(j)] != labels[static_cast<std::size_t>(anchor)]) {
                candidates.push_back(j);
            }
        }
        if (candidates.empty()) {
            throw Error(Errc::NoNegativeAvailable,
                        "row " + std::to_string(anchor) + " has no other-identity candidate");
        }
        if (strategy == NegativeStrategy::Uniform) {
            return candidates[rng.uniform_index(candidates.size())];
        }
        Eigen::Index best = candidates.front();
        double best_sim = -std::numeric_limits<double>::infinity();
        for (auto j : candidates) {
            const double s = anchor_is_image ? sim(anchor, j) : sim(j, anchor);
            if (s > best_sim) {
                best_sim = s;
                best = j;
            }
        }
        return best;
    };

    std::vector<ItmPair> pairs;
    pairs.reserve(static_cast<std::size_t>(3 * m));
    for (Eigen::Index i = 0; i < m; ++i) pairs.push_back({i, i, true, batch.confidences[i]});
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto j = pick(i, true);
        pairs.push_back({i, j, false, batch.confidences[j]});
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto j = pick(i, false);
        pairs.push_back({j, i, false, batch.confidences[i]});
    }
    return pairs;
}

SdmResult cs_sdm_loss(const TrainingBatch& batch, double epsilon) {
    check_pair_batch(batch);
    check_labels(batch);
    if (!(epsilon > 0.0)) throw Error(Errc::InvalidArgument, "SDM epsilon must be positive");
    const auto n = batch.size();
    const double tau = batch.temperature;
    const double inv_n = 1.0 / static_cast<double>(n);
    const Vector w = weights_for(batch.confidences, batch.beta);
    const Matrix sim = batch.image_embeddings * batch.text_embeddings.transpose();

    // Identity-normalized targets; labels are symmetric so one matrix serves
    // both directions.
    Matrix log_target(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double positives = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            positives += batch.identity_labels[static_cast<std::size_t>(i)] ==
                         batch.identity_labels[static_cast<std::size_t>(j)];
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const bool same = batch.identity_labels[static_cast<std::size_t>(i)] ==
                              batch.identity_labels[static_cast<std::size_t>(j)];
            log_target(i, j) = std::log((same ? 1.0 / positives : 0.0) + epsilon);
        }
    }

    SdmResult r;
    Matrix grad_sim = Matrix::Zero(n, n);
    Vector z(n), g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // image i against every text j, each similarity scaled by that text's weight
        z = (sim.row(i).transpose().array() * w.array()) / tau;
        r.loss += inv_n * kl_row(z, log_target.row(i).transpose(), g);
        g *= inv_n;
        grad_sim.row(i) += (g.array() * w.array()).matrix().transpose() / tau;
        r.grad_temperature -= g.dot(z) / tau;

        // text i against every image j, scaled by the query text's weight
        z = sim.col(i) * (w[i] / tau);
        r.loss += inv_n * kl_row(z, log_target.row(i).transpose(), g);
        g *= inv_n;
        grad_sim.col(i) += g * (w[i] / tau);
        r.grad_temperature -= g.dot(z) / tau;
    }
    r.grad_image = grad_sim * batch.text_embeddings;
    r.grad_text = grad_sim.transpose() * batch.image_embeddings;
    return r;
}

IrrResult cs_irr_loss(const IrrBatch& batch) {
    const auto n = batch.logits.size();
    if (n == 0) throw Error(Errc::DegenerateBatch, "empty IRR batch");
    if (batch.targets.size() != n || static_cast<std::size_t>(batch.confidences.size()) != n) {
        throw Error(Errc::DimensionMismatch, "IRR logits, targets and confidences disagree");
    }
    check_beta(batch.beta);
    const Vector w = weights_for(batch.confidences, batch.beta);
    const auto vocab = batch.logits.front().cols();
    const double inv_n = 1.0 / static_cast<double>(n);

    IrrResult r;
    r.grad_logits.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        const Matrix& p = batch.logits[t];
        const auto& y = batch.targets[t];
        if (p.rows() == 0) throw Error(Errc::DegenerateBatch, "text " + std::to_string(t) + " has no masked token");
        if (p.cols() != vocab || static_cast<Eigen::Index>(y.size()) != p.rows()) {
            throw Error(Errc::DimensionMismatch, "IRR logits of text " + std::to_string(t) + " have the wrong shape");
        }
        const double scale = w[static_cast<Eigen::Index>(t)] /
                             (static_cast<double>(p.rows()) * static_cast<double>(vocab)) * inv_n;
        const Matrix log_p = log_softmax_rows(p);
        Matrix grad = scale * Matrix(log_p.array().exp());
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
            const int target = y[static_cast<std::size_t>(i)];
            if (target < 0 || target >= vocab) throw Error(Errc::InvalidArgument, "IRR target outside vocabulary");
            r.loss -= scale * log_p(i, target);
            grad(i, target) -= scale;
        }
        r.grad_logits.push_back(std::move(grad));
    }
    return r;
}

IdResult cs_id_loss(const IdBatch& batch) {
    const auto n = batch.text_features.rows();
    const auto classes = batch.class_weights.rows();
    if (n == 0) throw Error(Errc::DegenerateBatch, "empty ID batch");
    if (classes < 2) throw Error(Errc::DegenerateBatch, "ID head needs at least two classes");
    if (batch.image_features.rows() != n || batch.image_features.cols() != batch.text_features.cols() ||
        batch.class_weights.cols() != batch.text_features.cols() || batch.biases.size() != classes ||
        static_cast<Eigen::Index>(batch.labels.size()) != n || batch.confidences.size() != n) {
        throw Error(Errc::DimensionMismatch, "ID batch shapes disagree");
    }
    check_beta(batch.beta);
    const Vector w = weights_for(batch.confidences, batch.beta);
    const double norm = 1.0 / (static_cast<double>(classes) * static_cast<double>(n));

    IdResult r;
    r.grad_weights = Matrix::Zero(classes, batch.class_weights.cols());
    r.grad_biases = Vector::Zero(classes);

    auto branch = [&](const Matrix& features, const Vector& scale, Matrix& grad_features) {
        const Matrix proj = features * batch.class_weights.transpose();  // N x M
        Matrix logits = scale.asDiagonal() * proj;
        logits.rowwise() += batch.biases.transpose();
        const Matrix log_p = log_softmax_rows(logits);
        Matrix g = norm * Matrix(log_p.array().exp());
        double loss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int y = batch.labels[static_cast<std::size_t>(i)];
            if (y < 0 || y >= classes) throw Error(Errc::InvalidArgument, "ID label outside class range");
            loss -= norm * log_p(i, y);
            g(i, y) -= norm;
        }
        const Matrix g_proj = scale.asDiagonal() * g;
        grad_features = g_proj * batch.class_weights;
        r.grad_weights += g_proj.transpose() * features;
        r.grad_biases += g.colwise().sum().transpose();
        return loss;
    };

    r.loss_image = branch(batch.image_features, Vector::Ones(n), r.grad_image);
    r.loss_text = branch(batch.text_features, w, r.grad_text);
    r.loss = r.loss_image + r.loss_text;
    return r;
}

}  // namespace gtr
