#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "lss/item.hpp"
#include "lss/oracle.hpp"

namespace lss {

inline double rmse(std::span<const double> truth, std::span<const double> estimate) {
    if (truth.empty()) throw std::invalid_argument("rmse over an empty item set");
    if (truth.size() != estimate.size()) throw std::invalid_argument("rmse size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = truth[i] - estimate[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(truth.size()));
}

/// RMSE of `sketch.query` against the oracle over `items`.
template <class Sketch>
double rmse(const exact_oracle& oracle, const Sketch& sketch, std::span<const item_id> items) {
    if (items.empty()) throw std::invalid_argument("rmse over an empty item set");
    double sum = 0.0;
    for (item_id x : items) {
        const double d = static_cast<double>(oracle.count(x)) - static_cast<double>(sketch.query(x));
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(items.size()));
}

template <class Sketch>
double rmse(const exact_oracle& oracle, const Sketch& sketch) {
    return rmse(oracle, sketch, oracle.items());
}

namespace detail {
inline std::size_t overlap(std::span<const item_id> a, std::span<const item_id> b) {
    std::unordered_set<item_id> in_b(b.begin(), b.end());
    std::unordered_set<item_id> seen;
    std::size_t hits = 0;
    for (item_id x : a)
        if (in_b.contains(x) && seen.insert(x).second) ++hits;
    return hits;
}
}  // namespace detail

/// |reported ∩ truth| / |reported|; an empty report scores 0.
inline double precision(std::span<const item_id> reported, std::span<const item_id> truth) {
    if (reported.empty()) return 0.0;
    return static_cast<double>(detail::overlap(reported, truth)) / static_cast<double>(reported.size());
}

/// |reported ∩ truth| / |truth|; an empty truth set scores 1.
inline double recall(std::span<const item_id> reported, std::span<const item_id> truth) {
    if (truth.empty()) return 1.0;
    return static_cast<double>(detail::overlap(truth, reported)) / static_cast<double>(truth.size());
}

template <class Sketch>
double precision_topk(const exact_oracle& oracle, const Sketch& sketch, std::size_t k_req) {
    if (k_req == 0) throw std::invalid_argument("k_req must be at least 1");
    std::vector<item_id> reported;
    for (const auto& [item, count] : sketch.top_k(k_req)) reported.push_back(item);
    const auto truth = oracle.top_k(k_req);
    return precision(reported, truth);
}

template <class Sketch>
double recall_hh(const exact_oracle& oracle, const Sketch& sketch, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
    const auto reported = sketch.report_heavy_hitters(theta);
    const auto truth = oracle.heavy_hitters(theta);
    return recall(reported, truth);
}

}  // namespace lss
