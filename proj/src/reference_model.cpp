#include "gtr/reference_model.hpp"

#include <fstream>

#include "json.hpp"

#include "gtr/error.hpp"
#include "gtr/rng.hpp"

namespace gtr {

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
    }
    return m;
}

nlohmann::json matrix_to_json(const Matrix& m) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(flat)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto flat = j.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(flat.size()) != rows * cols) {
        throw Error(Errc::ParseError, "matrix payload has the wrong size");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = flat[static_cast<std::size_t>(i * cols + j2)];
    }
    return m;
}

}  // namespace

ReferenceRetrievalModel::ReferenceRetrievalModel(AttributeVocabulary vocab, std::size_t hash_dim,
                                                 std::size_t embedding_dim, double image_noise,
                                                 std::uint64_t noise_seed, double temperature,
                                                 std::uint64_t init_seed)
    : log_temperature(std::log(temperature)),
      vocab_(std::move(vocab)),
      hash_dim_(hash_dim),
      image_noise_(image_noise),
      noise_seed_(noise_seed) {
    Rng rng(init_seed);
    const auto d = static_cast<Eigen::Index>(embedding_dim);
    const auto f = static_cast<Eigen::Index>(vocab_.dim());
    const auto h = static_cast<Eigen::Index>(hash_dim);
    // Inputs are unit norm, so unit-variance weights give O(1) projections.
    image_proj = random_matrix(d, f, 1.0, rng);
    text_proj = random_matrix(d, h, 1.0, rng);
}

Vector ReferenceRetrievalModel::image_features(const ManifestEntry& entry) const {
    if (!entry.attributes) {
        throw Error(Errc::InvalidArgument, "image '" + entry.image.image_id + "' has no attribute row to encode");
    }
    Vector x = vocab_.encode(*entry.attributes);
    if (image_noise_ > 0.0) {
        Rng rng(derive_seed(noise_seed_, "image/" + entry.image.image_id));
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += image_noise_ * rng.normal();
    }
    return x;
}

Vector ReferenceRetrievalModel::text_features(std::string_view text) const {
    return hashed_text_features(tokenize_words(text), hash_dim_);
}

Vector ReferenceRetrievalModel::text_features(const std::vector<std::string>& tokens) const {
    return hashed_text_features(tokens, hash_dim_);
}

Matrix ReferenceRetrievalModel::encode_images(const std::vector<const ManifestEntry*>& images) const {
    Matrix x(static_cast<Eigen::Index>(images.size()), static_cast<Eigen::Index>(vocab_.dim()));
    for (std::size_t i = 0; i < images.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = image_features(*images[i]);
    return normalize_rows(x * image_proj.transpose());
}

Matrix ReferenceRetrievalModel::encode_texts(const std::vector<std::string>& texts) const {
    Matrix x(static_cast<Eigen::Index>(texts.size()), static_cast<Eigen::Index>(hash_dim_));
    for (std::size_t i = 0; i < texts.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = text_features(texts[i]);
    return normalize_rows(x * text_proj.transpose());
}

void ReferenceRetrievalModel::save(const std::filesystem::path& path) const {
    nlohmann::ordered_json j;
    j["format"] = "gtr-reference-model/1";
    j["hash_dim"] = hash_dim_;
    j["image_noise"] = image_noise_;
    j["noise_seed"] = noise_seed_;
    j["log_temperature"] = log_temperature;
    j["attribute_vocabulary"] = vocab_.values();
    j["image_proj"] = matrix_to_json(image_proj);
    j["text_proj"] = matrix_to_json(text_proj);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write model " + path.string());
    out << j.dump() << '\n';
}

ReferenceRetrievalModel ReferenceRetrievalModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read model " + path.string());
    try {
        const auto j = nlohmann::json::parse(in);
        if (j.at("format").get<std::string>() != "gtr-reference-model/1") {
            throw Error(Errc::ParseError, "unsupported model format");
        }
        ReferenceRetrievalModel m;
        m.hash_dim_ = j.at("hash_dim").get<std::size_t>();
        m.image_noise_ = j.at("image_noise").get<double>();
        m.noise_seed_ = j.at("noise_seed").get<std::uint64_t>();
        m.log_temperature = j.at("log_temperature").get<double>();
        m.vocab_ = AttributeVocabulary::from_values(
            j.at("attribute_vocabulary").get<std::vector<std::vector<std::string>>>());
        m.image_proj = matrix_from_json(j.at("image_proj"));
        m.text_proj = matrix_from_json(j.at("text_proj"));
        if (m.image_proj.cols() != static_cast<Eigen::Index>(m.vocab_.dim()) ||
            m.text_proj.cols() != static_cast<Eigen::Index>(m.hash_dim_) ||
            m.image_proj.rows() != m.text_proj.rows()) {
            throw Error(Errc::ParseError, "model matrices do not match their declared sizes");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, path.string() + ": " + e.what());
    }
}

Matrix normalize_rows(const Matrix& m, Vector* norms) {
    Vector n = m.rowwise().norm();
    n = n.cwiseMax(1e-12);
    if (norms) *norms = n;
    return n.cwiseInverse().asDiagonal() * m;
}

Matrix normalize_rows_backward(const Matrix& normalized, const Vector& norms, const Matrix& grad) {
    const Vector dots = (normalized.array() * grad.array()).rowwise().sum();
    Matrix g = grad - dots.asDiagonal() * normalized;
    return norms.cwiseInverse().asDiagonal() * g;
}

}  // namespace gtr
