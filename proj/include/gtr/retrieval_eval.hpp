#pragma once

#include <string>
#include <vector>

#include "gtr/cs_losses.hpp"

namespace gtr {

struct EvalCorpus {
    Matrix query_embeddings;    // Q x d
    std::vector<std::string> query_identities;
    Matrix gallery_embeddings;  // G x d
    std::vector<std::string> gallery_identities;
};

struct EvalReport {
    double r1 = 0.0;
    double r5 = 0.0;
    double r10 = 0.0;
    double map = 0.0;
    std::size_t queries = 0;
    std::size_t gallery = 0;
    // Where the query texts came from ("reference" or "template"); empty when
    // the report was computed from raw embeddings.
    std::string query_source;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// Dot products of unit-norm rows, i.e. cosine similarities. Throws
// DimensionMismatch when the embedding widths differ.
Matrix similarity_matrix(const Matrix& queries, const Matrix& gallery);

// Gallery indices of one query row, best first. Ties go to the lower index.
std::vector<Eigen::Index> rank_gallery(const Matrix& sim, Eigen::Index query);

// Fraction of queries whose top-K gallery items contain an item of the
// query's identity. Throws DegenerateCorpus on empty or mismatched inputs.
double rank_at_k(const Matrix& sim, const std::vector<std::string>& query_ids,
                 const std::vector<std::string>& gallery_ids, std::size_t k);

// Mean over queries of average precision with identity-level relevance.
// Throws NoRelevantItem when a query's identity is absent from the gallery.
double mean_average_precision(const Matrix& sim, const std::vector<std::string>& query_ids,
                              const std::vector<std::string>& gallery_ids);

EvalReport evaluate_corpus(const EvalCorpus& corpus);

std::string report_to_json(const EvalReport& report);
std::string report_to_kv(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

}  // namespace gtr
