#pragma once

// Learned Space Saving.
//
// Every variant wraps one space_saving_table. The low-frequency variants put
// a filter in front of it: an item predicted to appear at most t times is
// absorbed by the filter until the filter has seen it t times, after which
// its arrivals reach the table. Queries add t back, so estimates never fall
// below the true count. The heavy-hitter variants reserve up to k_hh table
// entries for predicted heavy hitters; those entries are never evicted.
// LSS+ runs the filter step only with probability 1/tau_inv and scales the
// resulting table increment (and the query correction) by tau_inv.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lss/filters.hpp"
#include "lss/predictors.hpp"
#include "lss/space_saving.hpp"

namespace lss {

enum class variant { ss, lss_lfs, lss_lf, lss_hh, lss, lss_plus };

inline constexpr variant all_variants[] = {variant::ss,     variant::lss_lfs, variant::lss_lf,
                                           variant::lss_hh, variant::lss,     variant::lss_plus};

constexpr std::string_view to_string(variant v) noexcept {
    switch (v) {
        case variant::ss: return "ss";
        case variant::lss_lfs: return "lss_lfs";
        case variant::lss_lf: return "lss_lf";
        case variant::lss_hh: return "lss_hh";
        case variant::lss: return "lss";
        case variant::lss_plus: return "lss_plus";
    }
    return "?";
}

inline std::optional<variant> parse_variant(std::string_view name) {
    for (variant v : all_variants)
        if (to_string(v) == name) return v;
    return std::nullopt;
}

constexpr bool uses_filter(variant v) noexcept {
    return v == variant::lss_lfs || v == variant::lss_lf || v == variant::lss || v == variant::lss_plus;
}

constexpr bool uses_fixed_entries(variant v) noexcept {
    return v == variant::lss_hh || v == variant::lss || v == variant::lss_plus;
}

constexpr filter_kind filter_kind_of(variant v) noexcept {
    return v == variant::lss_lfs ? filter_kind::membership : filter_kind::counting;
}

/// Bit costs used for equal-memory comparisons.
struct memory_model {
    unsigned id_bits = 64;
    unsigned counter_bits = 32;
    unsigned flag_bits = 1;
    unsigned cbf_cell_bits = 4;

    constexpr std::size_t entry_bits() const noexcept { return id_bits + counter_bits + flag_bits; }
};

struct lss_config {
    variant kind = variant::lss;
    std::size_t k = 100;
    std::uint64_t t = 4;
    std::size_t k_hh = 0;
    std::size_t filter_bits = 0;
    std::uint64_t tau_inv = 1;
    std::uint64_t seed = 0;
    unsigned filter_hashes = 0;                       // 0: derive from expected_low_items
    std::optional<std::size_t> expected_low_items{};  // filter load estimate
    cbf_update cbf_mode = cbf_update::standard;
    memory_model memory{};
    bool skip_query_correction = false;  // fault injection for negative controls
};

class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Reject inconsistent configurations and clear fields a variant ignores.
inline lss_config normalized(lss_config c) {
    if (c.k == 0) throw config_error("k must be at least 1");
    if (c.tau_inv == 0) throw config_error("tau_inv must be at least 1");
    if (c.t == 0) throw config_error("t must be at least 1");
    if (c.kind == variant::lss_lfs && c.t != 1) throw config_error("lss_lfs requires t=1");
    if (!uses_fixed_entries(c.kind)) c.k_hh = 0;
    if (!uses_filter(c.kind)) c.filter_bits = 0;
    if (c.kind != variant::lss_plus) c.tau_inv = 1;
    if (c.k_hh >= c.k) throw config_error("k_hh must be at most k-1");
    if (uses_filter(c.kind)) {
        const unsigned width = filter_kind_of(c.kind) == filter_kind::membership ? 1u : c.memory.cbf_cell_bits;
        if (c.filter_bits < width) throw config_error("filter_bits too small for variant " +
                                                      std::string(to_string(c.kind)));
    }
    return c;
}

inline filter_geometry geometry_for(const lss_config& c) {
    filter_geometry g = filter_sizing(c.filter_bits, filter_kind_of(c.kind), c.memory.cbf_cell_bits,
                                      c.expected_low_items, derive_seed(c.seed, "filter"));
    if (c.filter_hashes != 0) g.hashes = c.filter_hashes;
    return g;
}

template <class Filter>
concept membership_filter = std::constructible_from<Filter, const filter_geometry&> &&
                            requires(Filter f, const Filter cf, item_id x) {
                                f.add(x);
                                { cf.contains(x) } -> std::convertible_to<bool>;
                            };

template <class Filter>
concept counting_filter = std::constructible_from<Filter, const filter_geometry&> &&
                          requires(Filter f, const Filter cf, item_id x) {
                              f.add(x);
                              { cf.get(x) } -> std::convertible_to<std::uint64_t>;
                          };

template <membership_filter MembershipFilter = bloom_filter, counting_filter CountingFilter = counting_bloom_filter>
class basic_lss_sketch {
public:
    basic_lss_sketch(const lss_config& config, predictor_ptr predictor, predictor_thresholds thresholds = {})
        : config_(normalized(config)),
          predictor_(std::move(predictor)),
          thresholds_(thresholds),
          table_(config_.k, config_.k_hh),
          gate_(derive_seed(config_.seed, "gate")) {
        thresholds_.low_freq_t = config_.t;
        if ((uses_filter(config_.kind) || uses_fixed_entries(config_.kind)) && !predictor_)
            throw config_error(std::string(to_string(config_.kind)) + " requires a predictor");
        if (uses_filter(config_.kind)) {
            const filter_geometry g = geometry_for(config_);
            if (filter_kind_of(config_.kind) == filter_kind::membership)
                membership_.emplace(g);
            else if constexpr (std::constructible_from<CountingFilter, const filter_geometry&, cbf_update>)
                counting_.emplace(g, config_.cbf_mode);
            else
                counting_.emplace(g);
        }
    }

    void add(item_id item) {
        ++arrivals_;
        switch (config_.kind) {
            case variant::ss:
                table_.insert(item);
                return;
            case variant::lss_hh:
                table_.insert(item, is_heavy_hitter(*predictor_, item, thresholds_));
                return;
            default:
                break;
        }
        const bool fixed_route = config_.k_hh > 0 && is_heavy_hitter(*predictor_, item, thresholds_);
        if (!is_low_frequency(*predictor_, item, thresholds_)) {
            table_.insert(item, fixed_route, 1);
            return;
        }
        if (config_.kind == variant::lss_plus && config_.tau_inv > 1 && gate_() % config_.tau_inv != 0) return;
        if (filter_passes(item))
            table_.insert(item, fixed_route, config_.tau_inv);
        else
            filter_add(item);
    }

    std::uint64_t query(item_id item) const { return table_.query(item) + correction(); }

    /// Amount added to every table estimate to undo the filter's absorption.
    std::uint64_t correction() const noexcept {
        if (config_.skip_query_correction) return 0;
        switch (config_.kind) {
            case variant::ss:
            case variant::lss_hh: return 0;
            case variant::lss_plus: return config_.t * config_.tau_inv;
            default: return config_.t;
        }
    }

    /// Resident items whose estimate reaches theta times the arrivals so far.
    std::vector<item_id> report_heavy_hitters(double theta) const {
        std::vector<item_id> out;
        const double bar = theta * static_cast<double>(arrivals_);
        for (const auto& e : table_.entries())
            if (static_cast<double>(e.count + correction()) >= bar) out.push_back(e.item);
        return out;
    }

    std::vector<std::pair<item_id, std::uint64_t>> top_k(std::size_t k_req) const {
        auto out = table_.top_k(k_req);
        for (auto& [item, count] : out) count += correction();
        return out;
    }

    std::size_t memory_bits() const noexcept {
        return config_.k * config_.memory.entry_bits() + config_.filter_bits;
    }

    const lss_config& config() const noexcept { return config_; }
    const space_saving_table& table() const noexcept { return table_; }
    const predictor_thresholds& thresholds() const noexcept { return thresholds_; }
    std::uint64_t arrivals() const noexcept { return arrivals_; }
    std::uint64_t filter_ops() const noexcept { return filter_ops_; }
    const std::optional<MembershipFilter>& membership() const noexcept { return membership_; }
    const std::optional<CountingFilter>& counting() const noexcept { return counting_; }

    friend bool operator==(const basic_lss_sketch& a, const basic_lss_sketch& b) {
        return a.table_ == b.table_ && a.arrivals_ == b.arrivals_ && a.filter_ops_ == b.filter_ops_ &&
               a.membership_ == b.membership_ && a.counting_ == b.counting_;
    }

private:
    bool filter_passes(item_id item) {
        ++filter_ops_;  // one per arrival that consults the filter
        if (membership_) return membership_->contains(item);
        return counting_->get(item) >= config_.t;
    }

    void filter_add(item_id item) {
        if (membership_)
            membership_->add(item);
        else
            counting_->add(item);
    }

    lss_config config_;
    predictor_ptr predictor_;
    predictor_thresholds thresholds_;
    space_saving_table table_;
    std::optional<MembershipFilter> membership_;
    std::optional<CountingFilter> counting_;
    splitmix64 gate_;
    std::uint64_t arrivals_ = 0;
    std::uint64_t filter_ops_ = 0;
};

using lss_sketch = basic_lss_sketch<>;

}  // namespace lss
