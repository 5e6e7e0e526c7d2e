#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <unordered_map>
#include <vector>

#include "lss/item.hpp"

namespace lss {

/// Exact frequencies of a stream prefix. Items are also remembered in
/// first-occurrence order, which breaks ties in the exact top-k.
class exact_oracle {
public:
    exact_oracle() = default;

    explicit exact_oracle(std::span<const item_id> stream) {
        for (item_id x : stream) add(x);
    }

    void add(item_id item) {
        ++total_;
        auto [it, fresh] = index_.try_emplace(item, items_.size());
        if (fresh) {
            items_.push_back(item);
            counts_.push_back(0);
        }
        ++counts_[it->second];
    }

    std::uint64_t count(item_id item) const {
        auto it = index_.find(item);
        return it == index_.end() ? 0 : counts_[it->second];
    }

    std::uint64_t total() const noexcept { return total_; }
    std::size_t distinct() const noexcept { return items_.size(); }

    /// Distinct items in order of first arrival.
    std::span<const item_id> items() const noexcept { return items_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }

    /// ell: number of items seen exactly once.
    std::size_t singletons() const {
        return static_cast<std::size_t>(std::count(counts_.begin(), counts_.end(), std::uint64_t{1}));
    }

    std::vector<item_id> top_k(std::size_t k) const {
        std::vector<std::size_t> order(items_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        const std::size_t n = std::min(k, order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                          [this](std::size_t a, std::size_t b) {
                              if (counts_[a] != counts_[b]) return counts_[a] > counts_[b];
                              return a < b;
                          });
        std::vector<item_id> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(items_[order[i]]);
        return out;
    }

    /// Items with f >= theta * total.
    std::vector<item_id> heavy_hitters(double theta) const {
        const double bar = theta * static_cast<double>(total_);
        std::vector<item_id> out;
        for (std::size_t i = 0; i < items_.size(); ++i)
            if (static_cast<double>(counts_[i]) >= bar) out.push_back(items_[i]);
        return out;
    }

    std::unordered_map<item_id, std::uint64_t> count_map() const {
        std::unordered_map<item_id, std::uint64_t> out;
        out.reserve(items_.size());
        for (std::size_t i = 0; i < items_.size(); ++i) out.emplace(items_[i], counts_[i]);
        return out;
    }

private:
    std::uint64_t total_ = 0;
    std::unordered_map<item_id, std::size_t> index_;
    std::vector<item_id> items_;
    std::vector<std::uint64_t> counts_;
};

}  // namespace lss
