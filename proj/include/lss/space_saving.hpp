#pragma once

// Space Saving with optional fixed (non-evictable) entries.
//
// A table keeps at most `capacity` counters. A resident arrival increments
// its counter; a new arrival either takes a free slot or replaces the
// minimum-count mutable entry and inherits that count plus the increment.
// Equal minimum counts are resolved by evicting the least recently touched
// entry, which makes replacement deterministic.
//
// Mutable and fixed entries live in two ordered indexes keyed by
// (count, last_touch, slot) so the eviction victim and the global minimum are
// both O(1) to read and O(log k) to maintain.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lss/item.hpp"

namespace lss {

struct sketch_entry {
    item_id item{};
    std::uint64_t count = 0;
    bool fixed = false;
    std::uint64_t last_touch = 0;

    friend bool operator==(const sketch_entry&, const sketch_entry&) = default;
};

class space_saving_table {
public:
    space_saving_table(std::size_t capacity, std::size_t fixed_cap = 0)
        : capacity_(capacity), fixed_cap_(fixed_cap) {
        if (capacity == 0) throw std::invalid_argument("space saving capacity must be at least 1");
        if (fixed_cap >= capacity)
            throw std::invalid_argument("fixed entry cap must be at most capacity - 1");
        slots_.reserve(capacity);
        index_.reserve(capacity * 2);
    }

    /// Absorb one arrival. `mark_fixed` only takes effect when the item
    /// claims a new slot and the fixed cap is not yet exhausted; a resident
    /// item is never promoted.
    void insert(item_id item, bool mark_fixed = false, std::uint64_t increment = 1) {
        if (increment == 0) throw std::invalid_argument("increment must be positive");
        ++inserted_;
        const std::uint64_t touch = inserted_;

        if (auto it = index_.find(item); it != index_.end()) {
            const std::size_t slot = it->second;
            sketch_entry& e = slots_[slot];
            auto& order = e.fixed ? fixed_order_ : mutable_order_;
            order.erase(key_of(slot));
            e.count += increment;
            e.last_touch = touch;
            order.insert(key_of(slot));
            return;
        }

        const bool take_fixed = mark_fixed && fixed_used_ < fixed_cap_;
        std::size_t slot;
        std::uint64_t count = increment;
        if (slots_.size() < capacity_) {
            slot = slots_.size();
            slots_.push_back({});
        } else {
            // fixed_cap_ < capacity_ guarantees a mutable victim exists
            auto victim = mutable_order_.begin();
            slot = std::get<2>(*victim);
            mutable_order_.erase(victim);
            index_.erase(slots_[slot].item);
            count += slots_[slot].count;
        }
        slots_[slot] = sketch_entry{item, count, take_fixed, touch};
        index_.emplace(item, slot);
        if (take_fixed) {
            ++fixed_used_;
            fixed_order_.insert(key_of(slot));
        } else {
            mutable_order_.insert(key_of(slot));
        }
    }

    /// Counter of a resident item, else the minimum evictable counter, else
    /// the minimum counter, else 0. Fixed entries never absorb an evicted
    /// item's count, so they do not bound a non-resident item from above.
    std::uint64_t query(item_id item) const {
        if (auto it = index_.find(item); it != index_.end()) return slots_[it->second].count;
        if (!mutable_order_.empty()) return std::get<0>(*mutable_order_.begin());
        return min_count();
    }

    std::uint64_t min_count() const noexcept {
        std::uint64_t best = 0;
        bool any = false;
        if (!mutable_order_.empty()) {
            best = std::get<0>(*mutable_order_.begin());
            any = true;
        }
        if (!fixed_order_.empty()) {
            const std::uint64_t f = std::get<0>(*fixed_order_.begin());
            best = any ? std::min(best, f) : f;
        }
        return best;
    }

    bool contains(item_id item) const { return index_.contains(item); }

    const sketch_entry* find(item_id item) const {
        auto it = index_.find(item);
        return it == index_.end() ? nullptr : &slots_[it->second];
    }

    /// Largest counters first; equal counts ordered by older last_touch.
    std::vector<std::pair<item_id, std::uint64_t>> top_k(std::size_t k_req) const {
        std::vector<const sketch_entry*> order;
        order.reserve(slots_.size());
        for (const auto& e : slots_) order.push_back(&e);
        const std::size_t n = std::min(k_req, order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                          [](const sketch_entry* a, const sketch_entry* b) {
                              if (a->count != b->count) return a->count > b->count;
                              return a->last_touch < b->last_touch;
                          });
        std::vector<std::pair<item_id, std::uint64_t>> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.emplace_back(order[i]->item, order[i]->count);
        return out;
    }

    std::vector<item_id> heavy_hitters(std::uint64_t threshold) const {
        std::vector<item_id> out;
        for (const auto& e : slots_)
            if (e.count >= threshold) out.push_back(e.item);
        return out;
    }

    /// Entries in ascending item order; a canonical form for comparisons.
    std::vector<sketch_entry> entries() const {
        std::vector<sketch_entry> out(slots_.begin(), slots_.end());
        std::sort(out.begin(), out.end(),
                  [](const sketch_entry& a, const sketch_entry& b) { return raw(a.item) < raw(b.item); });
        return out;
    }

    std::uint64_t total_count() const noexcept {
        std::uint64_t sum = 0;
        for (const auto& e : slots_) sum += e.count;
        return sum;
    }

    std::size_t size() const noexcept { return slots_.size(); }
    bool empty() const noexcept { return slots_.empty(); }
    bool full() const noexcept { return slots_.size() == capacity_; }
    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t fixed_cap() const noexcept { return fixed_cap_; }
    std::size_t fixed_used() const noexcept { return fixed_used_; }
    std::uint64_t inserted() const noexcept { return inserted_; }

    friend bool operator==(const space_saving_table& a, const space_saving_table& b) {
        return a.capacity_ == b.capacity_ && a.fixed_cap_ == b.fixed_cap_ &&
               a.fixed_used_ == b.fixed_used_ && a.inserted_ == b.inserted_ &&
               a.entries() == b.entries();
    }

private:
    using order_key = std::tuple<std::uint64_t, std::uint64_t, std::size_t>;

    order_key key_of(std::size_t slot) const {
        return {slots_[slot].count, slots_[slot].last_touch, slot};
    }

    std::size_t capacity_;
    std::size_t fixed_cap_;
    std::size_t fixed_used_ = 0;
    std::uint64_t inserted_ = 0;
    std::vector<sketch_entry> slots_;
    std::unordered_map<item_id, std::size_t> index_;
    std::set<order_key> mutable_order_;
    std::set<order_key> fixed_order_;
};

}  // namespace lss
