#include "gtr/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "gtr/error.hpp"
#include "gtr/rng.hpp"

namespace gtr {

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

Vector hashed_text_features(const std::vector<std::string>& tokens, std::size_t dim) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(dim));
    auto bump = [&](const std::string& feature) {
        x[static_cast<Eigen::Index>(fnv1a64(feature) % dim)] += 1.0;
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        bump("u:" + tokens[i]);
        if (i + 1 < tokens.size()) bump("b:" + tokens[i] + " " + tokens[i + 1]);
    }
    const double n = x.norm();
    if (n > 0.0) x /= n;
    return x;
}

AttributeVocabulary::AttributeVocabulary(const TruthTable& table) {
    std::vector<std::set<std::string>> distinct(kNumAttributeKeys);
    for (const auto& [id, row] : table) {
        for (std::size_t k = 0; k < kNumAttributeKeys; ++k) distinct[k].insert(row[k]);
    }
    std::vector<std::vector<std::string>> values;
    for (auto& d : distinct) values.emplace_back(d.begin(), d.end());
    *this = from_values(std::move(values));
}

AttributeVocabulary AttributeVocabulary::from_values(std::vector<std::vector<std::string>> values) {
    if (values.size() != kNumAttributeKeys) {
        throw Error(Errc::DimensionMismatch, "attribute vocabulary needs one value list per key");
    }
    AttributeVocabulary v;
    v.values_ = std::move(values);
    v.total_ = 0;
    for (auto& list : v.values_) {
        std::sort(list.begin(), list.end());
        v.offsets_.push_back(v.total_);
        v.total_ += list.size();
    }
    return v;
}

Vector AttributeVocabulary::encode(const AttributeValues& row) const {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(dim()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(kNumAttributeKeys));
    for (std::size_t k = 0; k < kNumAttributeKeys; ++k) {
        const auto& list = values_[k];
        auto it = std::lower_bound(list.begin(), list.end(), row[k]);
        if (it != list.end() && *it == row[k]) {
            x[static_cast<Eigen::Index>(offsets_[k] + static_cast<std::size_t>(it - list.begin()))] = scale;
        }
    }
    return x;
}

}  // namespace gtr
