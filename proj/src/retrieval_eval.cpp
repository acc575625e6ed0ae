#include "gtr/retrieval_eval.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "gtr/error.hpp"

namespace gtr {

namespace {

void check_corpus(const Matrix& sim, const std::vector<std::string>& query_ids,
                  const std::vector<std::string>& gallery_ids) {
    if (sim.rows() == 0 || sim.cols() == 0) {
        throw Error(Errc::DegenerateCorpus, "evaluation needs at least one query and one gallery item");
    }
    if (static_cast<Eigen::Index>(query_ids.size()) != sim.rows() ||
        static_cast<Eigen::Index>(gallery_ids.size()) != sim.cols()) {
        throw Error(Errc::DegenerateCorpus, "identity lists do not match the similarity matrix");
    }
}

std::string fmt17(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Matrix similarity_matrix(const Matrix& queries, const Matrix& gallery) {
    if (queries.cols() != gallery.cols()) {
        throw Error(Errc::DimensionMismatch, "query width " + std::to_string(queries.cols()) +
                                                 " != gallery width " + std::to_string(gallery.cols()));
    }
    return queries * gallery.transpose();
}

std::vector<Eigen::Index> rank_gallery(const Matrix& sim, Eigen::Index query) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(sim.cols()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return sim(query, a) > sim(query, b); });
    return order;
}

double rank_at_k(const Matrix& sim, const std::vector<std::string>& query_ids,
                 const std::vector<std::string>& gallery_ids, std::size_t k) {
    if (k == 0) throw Error(Errc::InvalidArgument, "K must be at least 1");
    check_corpus(sim, query_ids, gallery_ids);
    std::size_t hits = 0;
    for (Eigen::Index q = 0; q < sim.rows(); ++q) {
        const auto order = rank_gallery(sim, q);
        const std::size_t depth = std::min(k, order.size());
        for (std::size_t r = 0; r < depth; ++r) {
            if (gallery_ids[static_cast<std::size_t>(order[r])] == query_ids[static_cast<std::size_t>(q)]) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(sim.rows());
}

double mean_average_precision(const Matrix& sim, const std::vector<std::string>& query_ids,
                              const std::vector<std::string>& gallery_ids) {
    check_corpus(sim, query_ids, gallery_ids);
    double total = 0.0;
    for (Eigen::Index q = 0; q < sim.rows(); ++q) {
        const auto& id = query_ids[static_cast<std::size_t>(q)];
        const auto order = rank_gallery(sim, q);
        std::size_t relevant = 0;
        double precision_sum = 0.0;
        for (std::size_t r = 0; r < order.size(); ++r) {
            if (gallery_ids[static_cast<std::size_t>(order[r])] == id) {
                ++relevant;
                precision_sum += static_cast<double>(relevant) / static_cast<double>(r + 1);
            }
        }
        if (relevant == 0) {
            throw Error(Errc::NoRelevantItem, "query " + std::to_string(q) + " (identity '" + id +
                                                  "') has no relevant gallery item");
        }
        total += precision_sum / static_cast<double>(relevant);
    }
    return total / static_cast<double>(sim.rows());
}

EvalReport evaluate_corpus(const EvalCorpus& corpus) {
    const Matrix sim = similarity_matrix(corpus.query_embeddings, corpus.gallery_embeddings);
    EvalReport report;
    report.r1 = rank_at_k(sim, corpus.query_identities, corpus.gallery_identities, 1);
    report.r5 = rank_at_k(sim, corpus.query_identities, corpus.gallery_identities, 5);
    report.r10 = rank_at_k(sim, corpus.query_identities, corpus.gallery_identities, 10);
    report.map = mean_average_precision(sim, corpus.query_identities, corpus.gallery_identities);
    report.queries = static_cast<std::size_t>(sim.rows());
    report.gallery = static_cast<std::size_t>(sim.cols());
    return report;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["r1"] = report.r1;
    j["r5"] = report.r5;
    j["r10"] = report.r10;
    j["map"] = report.map;
    j["Q"] = report.queries;
    j["G"] = report.gallery;
    if (!report.query_source.empty()) j["query_source"] = report.query_source;
    return j.dump(2) + "\n";
}

std::string report_to_kv(const EvalReport& report) {
    std::ostringstream os;
    os << "r1=" << fmt17(report.r1) << '\n'
       << "r5=" << fmt17(report.r5) << '\n'
       << "r10=" << fmt17(report.r10) << '\n'
       << "map=" << fmt17(report.map) << '\n'
       << "Q=" << report.queries << '\n'
       << "G=" << report.gallery << '\n';
    if (!report.query_source.empty()) os << "query_source=" << report.query_source << '\n';
    return os.str();
}

EvalReport report_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        EvalReport r;
        r.r1 = j.at("r1").get<double>();
        r.r5 = j.at("r5").get<double>();
        r.r10 = j.at("r10").get<double>();
        r.map = j.at("map").get<double>();
        r.queries = j.at("Q").get<std::size_t>();
        r.gallery = j.at("G").get<std::size_t>();
        r.query_source = j.value("query_source", std::string{});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, std::string("report: ") + e.what());
    }
}

}  // namespace gtr
