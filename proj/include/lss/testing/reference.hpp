#pragma once

// Test-only oracles: a linear-scan Space Saving and exact filters. They
// share no code with the production structures they are compared against.

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lss/filters.hpp"
#include "lss/item.hpp"
#include "lss/space_saving.hpp"

namespace lss::testing {

/// Space Saving with an O(k) scan per replacement.
class reference_space_saving {
public:
    reference_space_saving(std::size_t capacity, std::size_t fixed_cap = 0)
        : capacity_(capacity), fixed_cap_(fixed_cap) {}

    void insert(item_id item, bool mark_fixed = false, std::uint64_t increment = 1) {
        ++inserted_;
        for (auto& e : entries_) {
            if (e.item == item) {
                e.count += increment;
                e.last_touch = inserted_;
                return;
            }
        }
        const bool fix = mark_fixed && fixed_used_ < fixed_cap_;
        if (fix) ++fixed_used_;
        if (entries_.size() < capacity_) {
            entries_.push_back({item, increment, fix, inserted_});
            return;
        }
        sketch_entry* victim = nullptr;
        for (auto& e : entries_) {
            if (e.fixed) continue;
            if (!victim || e.count < victim->count ||
                (e.count == victim->count && e.last_touch < victim->last_touch))
                victim = &e;
        }
        *victim = {item, victim->count + increment, fix, inserted_};
    }

    std::uint64_t query(item_id item) const {
        std::uint64_t best_mutable = 0, best = 0;
        bool any_mutable = false, any = false;
        for (const auto& e : entries_) {
            if (e.item == item) return e.count;
            if (!any || e.count < best) best = e.count;
            any = true;
            if (e.fixed) continue;
            if (!any_mutable || e.count < best_mutable) best_mutable = e.count;
            any_mutable = true;
        }
        return any_mutable ? best_mutable : best;
    }

    /// Same canonical order as space_saving_table::entries().
    std::vector<sketch_entry> entries() const {
        auto out = entries_;
        std::sort(out.begin(), out.end(),
                  [](const sketch_entry& a, const sketch_entry& b) { return raw(a.item) < raw(b.item); });
        return out;
    }

    std::uint64_t inserted() const noexcept { return inserted_; }
    std::size_t fixed_used() const noexcept { return fixed_used_; }

private:
    std::size_t capacity_;
    std::size_t fixed_cap_;
    std::size_t fixed_used_ = 0;
    std::uint64_t inserted_ = 0;
    std::vector<sketch_entry> entries_;
};

/// Membership filter without false positives.
class exact_membership {
public:
    explicit exact_membership(const filter_geometry&) {}
    void add(item_id x) { set_.insert(x); }
    bool contains(item_id x) const { return set_.contains(x); }
    friend bool operator==(const exact_membership&, const exact_membership&) = default;

private:
    std::unordered_set<item_id> set_;
};

/// Counting filter without collisions.
class exact_counter {
public:
    explicit exact_counter(const filter_geometry&) {}
    void add(item_id x) { ++counts_[x]; }
    std::uint64_t get(item_id x) const {
        auto it = counts_.find(x);
        return it == counts_.end() ? 0 : it->second;
    }
    friend bool operator==(const exact_counter&, const exact_counter&) = default;

private:
    std::unordered_map<item_id, std::uint64_t> counts_;
};

}  // namespace lss::testing
