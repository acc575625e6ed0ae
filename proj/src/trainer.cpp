#include "gtr/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>

#include "gtr/cs_losses.hpp"
#include "gtr/error.hpp"
#include "gtr/features.hpp"
#include "gtr/rng.hpp"

namespace gtr {

namespace {

constexpr double kMinTemperature = 0.01;
constexpr double kMaxTemperature = 0.5;
constexpr const char* kMaskToken = "[mask]";

struct Sample {
    std::int64_t identity = 0;
    double confidence = 1.0;
    std::vector<std::string> tokens;
};

class Adam {
public:
    explicit Adam(double lr) : lr_(lr) {}

    void step(Matrix& param, const Matrix& grad, std::size_t slot) {
        if (slots_.size() <= slot) slots_.resize(slot + 1);
        auto& s = slots_[slot];
        if (s.m.size() == 0) {
            s.m = Matrix::Zero(param.rows(), param.cols());
            s.v = Matrix::Zero(param.rows(), param.cols());
        }
        s.m = b1_ * s.m + (1.0 - b1_) * grad;
        s.v = b2_ * s.v + (1.0 - b2_) * grad.cwiseProduct(grad);
        const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
        param.array() -= lr_ * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + eps_);
    }

    void tick() { ++t_; }

private:
    struct Slot {
        Matrix m, v;
    };
    double lr_;
    double b1_ = 0.9, b2_ = 0.999, eps_ = 1e-8;
    std::size_t t_ = 0;
    std::vector<Slot> slots_;
};

Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

LossBreakdown& LossBreakdown::operator+=(const LossBreakdown& o) {
    itc += o.itc;
    itm += o.itm;
    sdm += o.sdm;
    irr += o.irr;
    id += o.id;
    total += o.total;
    return *this;
}

LossBreakdown LossBreakdown::scaled(double s) const {
    return {itc * s, itm * s, sdm * s, irr * s, id * s, total * s};
}

void TrainingLog::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << "epoch,steps,itc,itm,sdm,irr,id,total\n";
    for (const auto& e : epochs) {
        out << e.epoch << ',' << e.steps << ',' << fmt(e.mean.itc) << ',' << fmt(e.mean.itm) << ','
            << fmt(e.mean.sdm) << ',' << fmt(e.mean.irr) << ',' << fmt(e.mean.id) << ',' << fmt(e.mean.total)
            << '\n';
    }
}

TrainingOutcome train(const std::vector<PseudoCaption>& captions, const Manifest& manifest,
                      const PipelineConfig& config) {
    validate_config(config, true);
    if (!manifest.has_attributes()) {
        throw Error(Errc::ConfigError, "the reference model encodes images from manifest attributes");
    }

    // Train split images paired with their captions, in caption-file order.
    std::vector<const ManifestEntry*> images;
    std::vector<Sample> samples;
    std::map<std::string, std::int64_t> identity_index;
    for (const auto& c : captions) {
        const auto* entry = manifest.find(c.image_id);
        if (!entry) throw Error(Errc::UnknownImage, "caption for unknown image '" + c.image_id + "'");
        if (entry->image.split != Split::Train) continue;
        images.push_back(entry);
        samples.push_back({0, c.confidence.value(), tokenize_words(c.text)});
        identity_index.emplace(entry->image.identity_id, 0);
    }
    if (samples.empty()) throw Error(Errc::EmptyTrainSet, "no caption covers a train-split image");
    {
        std::int64_t next = 0;
        for (auto& [name, idx] : identity_index) idx = next++;
    }
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i].identity = identity_index.at(images[i]->image.identity_id);

    const std::uint64_t seed = config.seed;
    TrainingOutcome outcome{
        ReferenceRetrievalModel(AttributeVocabulary(manifest.truth_table()), config.hash_dim, config.embedding_dim,
                                config.image_feature_noise, derive_seed(seed, "train/image-noise"),
                                config.temperature_init, derive_seed(seed, "train/init")),
        {}};
    auto& model = outcome.model;

    const auto n = samples.size();
    Matrix x_image(static_cast<Eigen::Index>(n), model.image_proj.cols());
    Matrix x_text(static_cast<Eigen::Index>(n), model.text_proj.cols());
    for (std::size_t i = 0; i < n; ++i) {
        x_image.row(static_cast<Eigen::Index>(i)) = model.image_features(*images[i]);
        x_text.row(static_cast<Eigen::Index>(i)) = model.text_features(samples[i].tokens);
    }

    // Masked-token vocabulary: the most frequent caption words.
    std::unordered_map<std::string, int> irr_vocab;
    if (config.loss_set.irr) {
        std::map<std::string, std::size_t> counts;
        for (const auto& s : samples) {
            for (const auto& w : s.tokens) ++counts[w];
        }
        std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        ranked.resize(std::min(ranked.size(), config.irr_vocab_size));
        for (std::size_t i = 0; i < ranked.size(); ++i) irr_vocab.emplace(ranked[i].first, static_cast<int>(i));
    }

    const auto d = static_cast<Eigen::Index>(config.embedding_dim);
    Rng head_rng(derive_seed(seed, "train/heads"));
    auto small_random = [&](Eigen::Index rows, Eigen::Index cols) {
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = 0.1 * head_rng.normal();
        return m;
    };
    Matrix itm_head(1, 2);  // [scale, bias] of the positive logit
    itm_head << 1.0, 0.0;
    Matrix irr_head = small_random(static_cast<Eigen::Index>(std::max<std::size_t>(irr_vocab.size(), 1)), d);
    Matrix id_weights = small_random(static_cast<Eigen::Index>(identity_index.size()), d);
    Matrix id_bias = Matrix::Zero(static_cast<Eigen::Index>(identity_index.size()), 1);
    Matrix log_tau(1, 1);
    log_tau(0, 0) = model.log_temperature;

    Adam adam(config.learning_rate);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t global_step = 0;
    const bool capped = config.max_steps > 0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        if (capped && global_step >= config.max_steps) break;
        Rng shuffle(derive_seed(seed, "train/shuffle/" + std::to_string(epoch)));
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[shuffle.uniform_index(i)]);

        EpochRecord record;
        record.epoch = epoch;
        for (std::size_t start = 0; start + 1 < n; start += config.batch_size) {
            if (capped && global_step >= config.max_steps) break;
            const std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                order.begin() + static_cast<std::ptrdiff_t>(std::min(n, start + config.batch_size)));
            const auto m = static_cast<Eigen::Index>(rows.size());
            const double tau = std::exp(log_tau(0, 0));

            const Matrix xv = gather_rows(x_image, rows);
            const Matrix xt = gather_rows(x_text, rows);
            Vector norm_v, norm_t;
            TrainingBatch batch;
            batch.image_embeddings = normalize_rows(xv * model.image_proj.transpose(), &norm_v);
            batch.text_embeddings = normalize_rows(xt * model.text_proj.transpose(), &norm_t);
            batch.confidences.resize(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                const auto& s = samples[rows[static_cast<std::size_t>(i)]];
                batch.confidences[i] = s.confidence;
                batch.identity_labels.push_back(s.identity);
            }
            batch.temperature = tau;
            batch.beta = config.beta;
            const Matrix& ev = batch.image_embeddings;
            const Matrix& et = batch.text_embeddings;

            Matrix g_ev = Matrix::Zero(m, d), g_et = Matrix::Zero(m, d);
            Matrix g_text_proj = Matrix::Zero(model.text_proj.rows(), model.text_proj.cols());
            Matrix g_itm = Matrix::Zero(1, 2), g_irr = Matrix::Zero(irr_head.rows(), irr_head.cols());
            Matrix g_id_w = Matrix::Zero(id_weights.rows(), id_weights.cols());
            Matrix g_id_b = Matrix::Zero(id_bias.rows(), 1);
            double g_tau = 0.0;
            LossBreakdown step;

            if (config.loss_set.itc) {
                auto r = cs_itc_loss(batch);
                step.itc = r.loss;
                g_ev += r.grad_image;
                g_et += r.grad_text;
                g_tau += r.grad_temperature;
            }
            if (config.loss_set.itm) {
                try {
                    const auto pairs = sample_itm_pairs(batch, config.itm_strategy,
                                                        derive_seed(seed, "train/itm/" + std::to_string(global_step)));
                    ItmBatch itm;
                    const auto k = static_cast<Eigen::Index>(pairs.size());
                    itm.pair_scores = Matrix::Zero(k, 2);
                    itm.confidences.resize(k);
                    itm.beta = config.beta;
                    std::vector<double> sims(pairs.size());
                    for (Eigen::Index p = 0; p < k; ++p) {
                        const auto& pair = pairs[static_cast<std::size_t>(p)];
                        sims[static_cast<std::size_t>(p)] = ev.row(pair.image).dot(et.row(pair.text));
                        itm.pair_scores(p, 1) = itm_head(0, 0) * sims[static_cast<std::size_t>(p)] + itm_head(0, 1);
                        itm.labels.push_back(pair.positive ? 1 : 0);
                        itm.confidences[p] = pair.confidence;
                    }
                    auto r = cs_itm_loss(itm);
                    step.itm = r.loss;
                    for (Eigen::Index p = 0; p < k; ++p) {
                        const auto& pair = pairs[static_cast<std::size_t>(p)];
                        const double g = r.grad_scores(p, 1);
                        g_itm(0, 0) += g * sims[static_cast<std::size_t>(p)];
                        g_itm(0, 1) += g;
                        g_ev.row(pair.image) += g * itm_head(0, 0) * et.row(pair.text);
                        g_et.row(pair.text) += g * itm_head(0, 0) * ev.row(pair.image);
                    }
                } catch (const Error& e) {
                    // A batch drawn from a single identity has no negatives.
                    if (e.code() != Errc::NoNegativeAvailable) throw;
                }
            }
            if (config.loss_set.sdm) {
                auto r = cs_sdm_loss(batch, config.sdm_epsilon);
                step.sdm = r.loss;
                g_ev += r.grad_image;
                g_et += r.grad_text;
                g_tau += r.grad_temperature;
            }
            if (config.loss_set.irr && !irr_vocab.empty()) {
                Rng mask_rng(derive_seed(seed, "train/irr/" + std::to_string(global_step)));
                std::vector<Eigen::Index> members;
                std::vector<std::vector<int>> targets;
                Matrix x_masked(m, model.text_proj.cols());
                for (Eigen::Index i = 0; i < m; ++i) {
                    auto tokens = samples[rows[static_cast<std::size_t>(i)]].tokens;
                    std::vector<std::size_t> candidates;
                    for (std::size_t p = 0; p < tokens.size(); ++p) {
                        if (irr_vocab.count(tokens[p])) candidates.push_back(p);
                    }
                    if (candidates.empty()) continue;
                    const auto want = static_cast<std::size_t>(std::lround(config.irr_mask_ratio * static_cast<double>(tokens.size())));
                    const std::size_t count = std::clamp<std::size_t>(want, 1, candidates.size());
                    for (std::size_t c = 0; c < count; ++c) {
                        std::swap(candidates[c], candidates[c + mask_rng.uniform_index(candidates.size() - c)]);
                    }
                    candidates.resize(count);
                    std::sort(candidates.begin(), candidates.end());
                    std::vector<int> y;
                    for (auto p : candidates) {
                        y.push_back(irr_vocab.at(tokens[p]));
                        tokens[p] = kMaskToken;
                    }
                    x_masked.row(static_cast<Eigen::Index>(members.size())) = model.text_features(tokens);
                    members.push_back(i);
                    targets.push_back(std::move(y));
                }
                if (!members.empty()) {
                    const auto count = static_cast<Eigen::Index>(members.size());
                    Vector norm_masked;
                    const Matrix x_tm = x_masked.topRows(count);
                    const Matrix e_masked = normalize_rows(x_tm * model.text_proj.transpose(), &norm_masked);
                    IrrBatch irr;
                    irr.beta = config.beta;
                    irr.confidences.resize(count);
                    std::vector<Vector> contexts;
                    for (Eigen::Index t = 0; t < count; ++t) {
                        const Vector ctx = (ev.row(members[static_cast<std::size_t>(t)]) + e_masked.row(t)).transpose();
                        const Vector logits = irr_head * ctx;
                        const auto masked = static_cast<Eigen::Index>(targets[static_cast<std::size_t>(t)].size());
                        irr.logits.push_back(logits.transpose().replicate(masked, 1));
                        irr.confidences[t] = batch.confidences[members[static_cast<std::size_t>(t)]];
                        contexts.push_back(ctx);
                    }
                    irr.targets = targets;
                    auto r = cs_irr_loss(irr);
                    step.irr = r.loss;
                    Matrix g_masked = Matrix::Zero(count, d);
                    for (Eigen::Index t = 0; t < count; ++t) {
                        const Vector g_logits = r.grad_logits[static_cast<std::size_t>(t)].colwise().sum().transpose();
                        g_irr += g_logits * contexts[static_cast<std::size_t>(t)].transpose();
                        const Vector g_ctx = irr_head.transpose() * g_logits;
                        g_ev.row(members[static_cast<std::size_t>(t)]) += g_ctx.transpose();
                        g_masked.row(t) = g_ctx.transpose();
                    }
                    g_text_proj += normalize_rows_backward(e_masked, norm_masked, g_masked).transpose() * x_tm;
                }
            }
            if (config.loss_set.id) {
                IdBatch id;
                id.text_features = et;
                id.image_features = ev;
                id.class_weights = id_weights;
                id.biases = id_bias.col(0);
                for (auto label : batch.identity_labels) id.labels.push_back(static_cast<int>(label));
                id.confidences = batch.confidences;
                id.beta = config.beta;
                auto r = cs_id_loss(id);
                step.id = r.loss;
                g_ev += r.grad_image;
                g_et += r.grad_text;
                g_id_w += r.grad_weights;
                g_id_b.col(0) += r.grad_biases;
            }

            step.total = step.itc + step.itm + step.sdm + step.irr + step.id;
            if (!std::isfinite(step.total)) {
                throw Error(Errc::NonFiniteLoss, "loss became non-finite at epoch " + std::to_string(epoch) +
                                                     ", step " + std::to_string(global_step));
            }

            const Matrix g_image_proj = normalize_rows_backward(ev, norm_v, g_ev).transpose() * xv;
            g_text_proj += normalize_rows_backward(et, norm_t, g_et).transpose() * xt;
            Matrix g_log_tau(1, 1);
            g_log_tau(0, 0) = tau * g_tau;

            adam.tick();
            adam.step(model.image_proj, g_image_proj, 0);
            adam.step(model.text_proj, g_text_proj, 1);
            adam.step(log_tau, g_log_tau, 2);
            if (config.loss_set.itm) adam.step(itm_head, g_itm, 3);
            if (config.loss_set.irr) adam.step(irr_head, g_irr, 4);
            if (config.loss_set.id) {
                adam.step(id_weights, g_id_w, 5);
                adam.step(id_bias, g_id_b, 6);
            }
            log_tau(0, 0) = std::clamp(log_tau(0, 0), std::log(kMinTemperature), std::log(kMaxTemperature));

            outcome.log.steps.push_back(step);
            record.mean += step;
            ++record.steps;
            ++global_step;
        }
        if (record.steps == 0) break;
        record.mean = record.mean.scaled(1.0 / static_cast<double>(record.steps));
        outcome.log.epochs.push_back(record);
    }
    model.log_temperature = log_tau(0, 0);
    return outcome;
}

}  // namespace gtr
