#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lss/item.hpp"

namespace lss {

/// Estimated total frequency of an item over the whole stream.
struct prediction {
    double predicted_count = 0.0;
};

class frequency_predictor {
public:
    virtual ~frequency_predictor() = default;
    virtual prediction predict(item_id item) const = 0;
};

using predictor_ptr = std::shared_ptr<const frequency_predictor>;

struct predictor_thresholds {
    std::uint64_t low_freq_t = 1;
    double hh_count_threshold = std::numeric_limits<double>::infinity();
};

// Algorithm routes "> t" to the counters, so a prediction equal to t is low.
inline bool is_low_frequency(const frequency_predictor& p, item_id item, const predictor_thresholds& th) {
    return p.predict(item).predicted_count <= static_cast<double>(th.low_freq_t);
}

inline bool is_heavy_hitter(const frequency_predictor& p, item_id item, const predictor_thresholds& th) {
    return p.predict(item).predicted_count >= th.hh_count_threshold;
}

class constant_predictor final : public frequency_predictor {
public:
    explicit constant_predictor(double value) : value_(value) {
        if (!(value >= 0.0)) throw std::invalid_argument("prediction must be non-negative");
    }
    prediction predict(item_id) const override { return {value_}; }

private:
    double value_;
};

/// Answers every query with the item's true total count.
class exact_predictor final : public frequency_predictor {
public:
    explicit exact_predictor(std::unordered_map<item_id, std::uint64_t> counts) : counts_(std::move(counts)) {}

    prediction predict(item_id item) const override {
        auto it = counts_.find(item);
        return {it == counts_.end() ? 0.0 : static_cast<double>(it->second)};
    }

private:
    std::unordered_map<item_id, std::uint64_t> counts_;
};

class unknown_item_error : public std::out_of_range {
public:
    explicit unknown_item_error(item_id item)
        : std::out_of_range("simulated predictor has no true count for item " + std::to_string(raw(item))) {}
};

struct simulated_predictor_spec {
    std::uint64_t t = 4;        // small: true count < t, big: true count >= t
    double p = 0.9;             // probability of a class-correct prediction
    double noise = 0.05;        // multiplicative jitter of correct predictions
    double promote_prob = 0.01; // chance a small item is pushed above t
    std::uint64_t seed = 0;
};

/// Simulated learned model. Each item draws its randomness from a hash of
/// (seed, item), so every arrival of an item receives the same prediction.
///
/// With probability 1-p an item is assigned to the wrong class and gets a
/// predicted count drawn from the true counts of the other class. Otherwise
/// the prediction is the true count times a factor in [1-noise, 1+noise];
/// small items are then pushed above t with probability promote_prob.
class simulated_predictor final : public frequency_predictor {
public:
    simulated_predictor(const simulated_predictor_spec& spec,
                        const std::unordered_map<item_id, std::uint64_t>& true_counts)
        : spec_(spec) {
        if (spec.t == 0) throw std::invalid_argument("simulated predictor threshold must be positive");
        if (spec.p < 0.0 || spec.p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
        if (spec.noise < 0.0) throw std::invalid_argument("noise must be non-negative");
        if (spec.promote_prob < 0.0 || spec.promote_prob > 1.0)
            throw std::invalid_argument("promote_prob must lie in [0, 1]");

        std::vector<std::uint64_t> small, big;
        for (const auto& [item, count] : true_counts) (count < spec.t ? small : big).push_back(count);
        // sorted so draws do not depend on hash-map iteration order
        std::sort(small.begin(), small.end());
        std::sort(big.begin(), big.end());

        predictions_.reserve(true_counts.size());
        for (const auto& [item, count] : true_counts) {
            splitmix64 rng(mix64(spec.seed ^ mix64(raw(item))));
            const bool is_small = count < spec.t;
            const auto& other = is_small ? big : small;
            entry e;
            if (unit_draw(rng) >= spec.p && !other.empty()) {
                e.mispredicted = true;
                e.value = static_cast<double>(other[rng() % other.size()]);
            } else {
                const double factor = 1.0 + spec.noise * (2.0 * unit_draw(rng) - 1.0);
                e.value = static_cast<double>(count) * factor;
                if (is_small && unit_draw(rng) < spec.promote_prob)
                    e.value = std::max(e.value, static_cast<double>(spec.t + 1));
            }
            predictions_.emplace(item, e);
        }
    }

    prediction predict(item_id item) const override {
        auto it = predictions_.find(item);
        if (it == predictions_.end()) throw unknown_item_error(item);
        return {it->second.value};
    }

    bool mispredicted(item_id item) const {
        auto it = predictions_.find(item);
        if (it == predictions_.end()) throw unknown_item_error(item);
        return it->second.mispredicted;
    }

    const simulated_predictor_spec& spec() const noexcept { return spec_; }

private:
    struct entry {
        double value = 0.0;
        bool mispredicted = false;
    };

    simulated_predictor_spec spec_;
    std::unordered_map<item_id, entry> predictions_;
};

/// Predictions loaded from an external table (e.g. a trained model's output).
class table_predictor final : public frequency_predictor {
public:
    explicit table_predictor(std::unordered_map<item_id, double> table, double default_count = 1.0)
        : table_(std::move(table)), default_(default_count) {}

    prediction predict(item_id item) const override {
        auto it = table_.find(item);
        return {it == table_.end() ? default_ : it->second};
    }

    std::size_t size() const noexcept { return table_.size(); }

private:
    std::unordered_map<item_id, double> table_;
    double default_;
};

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t line)
        : std::runtime_error(what + " at line " + std::to_string(line)), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Parse "<token>\t<count>" records. Tokens go through `dict`.
inline table_predictor parse_prediction_table(std::istream& in, token_dictionary& dict,
                                              double default_count = 1.0) {
    std::unordered_map<item_id, double> table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos || tab == 0) throw parse_error("expected '<item>\\t<count>'", lineno);
        const char* first = line.data() + tab + 1;
        const char* last = line.data() + line.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last || first == last || !std::isfinite(value) || value < 0.0)
            throw parse_error("invalid predicted count '" + std::string(first, last) + "'", lineno);
        table[dict.intern(std::string_view(line).substr(0, tab))] = value;
    }
    return table_predictor(std::move(table), default_count);
}

inline table_predictor load_prediction_table(const std::string& path, token_dictionary& dict,
                                             double default_count = 1.0) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open prediction table '" + path + "'");
    return parse_prediction_table(in, dict, default_count);
}

}  // namespace lss
