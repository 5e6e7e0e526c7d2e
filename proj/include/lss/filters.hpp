#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lss/item.hpp"

namespace lss {

/// Shape of a filter: number of cells, probes per item, cell width in bits
/// (1 for a plain Bloom filter) and hash seed.
struct filter_geometry {
    std::size_t cells = 0;
    unsigned hashes = 4;
    unsigned cell_width = 1;
    std::uint64_t seed = 0;
};

// Double hashing g_i(x) = h1(x) + i * h2(x) mod m from a single keyed hash.
class probe_sequence {
public:
    probe_sequence(item_id item, std::uint64_t seed, std::size_t cells) noexcept
        : cells_(cells) {
        const std::uint64_t h = mix64(raw(item) ^ seed);
        h1_ = h;
        h2_ = mix64(h) | 1;
    }

    std::size_t operator()(unsigned i) const noexcept {
        return static_cast<std::size_t>((h1_ + static_cast<std::uint64_t>(i) * h2_) % cells_);
    }

private:
    std::size_t cells_;
    std::uint64_t h1_;
    std::uint64_t h2_;
};

inline void check_geometry(const filter_geometry& g) {
    if (g.cells == 0) throw std::invalid_argument("filter needs at least one cell");
    if (g.hashes == 0) throw std::invalid_argument("filter needs at least one hash");
}

class bloom_filter {
public:
    explicit bloom_filter(const filter_geometry& g)
        : bits_(g.cells), hashes_(g.hashes), seed_(g.seed), words_((g.cells + 63) / 64, 0) {
        check_geometry(g);
    }

    bloom_filter(std::size_t bits, unsigned hashes, std::uint64_t seed = 0)
        : bloom_filter(filter_geometry{bits, hashes, 1, seed}) {}

    void add(item_id item) {
        const probe_sequence probe(item, seed_, bits_);
        bool fresh = false;
        for (unsigned i = 0; i < hashes_; ++i) {
            const std::size_t b = probe(i);
            std::uint64_t& w = words_[b >> 6];
            const std::uint64_t mask = std::uint64_t{1} << (b & 63);
            fresh |= (w & mask) == 0;
            w |= mask;
        }
        if (fresh) ++distinct_estimate_;
    }

    bool contains(item_id item) const {
        const probe_sequence probe(item, seed_, bits_);
        for (unsigned i = 0; i < hashes_; ++i) {
            const std::size_t b = probe(i);
            if ((words_[b >> 6] & (std::uint64_t{1} << (b & 63))) == 0) return false;
        }
        return true;
    }

    std::size_t bit_count() const noexcept { return bits_; }
    unsigned hash_count() const noexcept { return hashes_; }
    std::size_t memory_bits() const noexcept { return bits_; }
    // Adds that set at least one new bit; a lower bound on distinct items.
    std::size_t inserted_distinct_estimate() const noexcept { return distinct_estimate_; }

    friend bool operator==(const bloom_filter&, const bloom_filter&) = default;

private:
    std::size_t bits_;
    unsigned hashes_;
    std::uint64_t seed_;
    std::vector<std::uint64_t> words_;
    std::size_t distinct_estimate_ = 0;
};

enum class cbf_update { standard, conservative };

/// Counting Bloom filter with saturating cells of `cell_width` bits (1..8).
class counting_bloom_filter {
public:
    explicit counting_bloom_filter(const filter_geometry& g, cbf_update mode = cbf_update::standard)
        : hashes_(g.hashes), width_(g.cell_width), seed_(g.seed), mode_(mode), cells_(g.cells, 0) {
        check_geometry(g);
        if (width_ == 0 || width_ > 8) throw std::invalid_argument("cell width must be in [1, 8]");
        cap_ = static_cast<std::uint8_t>((1u << width_) - 1);
    }

    counting_bloom_filter(std::size_t cells, unsigned hashes, unsigned cell_width = 4,
                          std::uint64_t seed = 0, cbf_update mode = cbf_update::standard)
        : counting_bloom_filter(filter_geometry{cells, hashes, cell_width, seed}, mode) {}

    void add(item_id item) {
        const probe_sequence probe(item, seed_, cells_.size());
        if (mode_ == cbf_update::conservative) {
            const std::uint8_t target = static_cast<std::uint8_t>(std::min<unsigned>(get(item) + 1u, cap_));
            for (unsigned i = 0; i < hashes_; ++i) {
                std::uint8_t& c = cells_[probe(i)];
                c = std::max(c, target);
            }
            return;
        }
        for (unsigned i = 0; i < hashes_; ++i) {
            std::uint8_t& c = cells_[probe(i)];
            if (c < cap_) ++c;
        }
    }

    std::uint64_t get(item_id item) const {
        const probe_sequence probe(item, seed_, cells_.size());
        std::uint8_t best = cap_;
        for (unsigned i = 0; i < hashes_; ++i) best = std::min(best, cells_[probe(i)]);
        return best;
    }

    std::size_t cell_count() const noexcept { return cells_.size(); }
    unsigned hash_count() const noexcept { return hashes_; }
    unsigned cell_width() const noexcept { return width_; }
    std::size_t memory_bits() const noexcept { return cells_.size() * width_; }

    friend bool operator==(const counting_bloom_filter&, const counting_bloom_filter&) = default;

private:
    unsigned hashes_;
    unsigned width_;
    std::uint64_t seed_;
    cbf_update mode_;
    std::uint8_t cap_ = 0;
    std::vector<std::uint8_t> cells_;
};

enum class filter_kind { membership, counting };

/// round(ln 2 * m / n) clamped to [1, 8]; 4 when no load estimate exists.
inline unsigned optimal_hash_count(std::size_t cells, std::optional<std::size_t> expected_items) {
    if (!expected_items || *expected_items == 0) return 4;
    const double h = std::round(std::log(2.0) * static_cast<double>(cells) /
                                static_cast<double>(*expected_items));
    return static_cast<unsigned>(std::clamp(h, 1.0, 8.0));
}

/// Turn a bit budget into a filter geometry.
inline filter_geometry filter_sizing(std::size_t bits_budget, filter_kind kind, unsigned cell_width = 4,
                                     std::optional<std::size_t> expected_items = std::nullopt,
                                     std::uint64_t seed = 0) {
    if (bits_budget == 0) throw std::invalid_argument("filter bit budget must be positive");
    const unsigned width = kind == filter_kind::membership ? 1u : cell_width;
    if (width == 0) throw std::invalid_argument("cell width must be positive");
    if (bits_budget < width) throw std::invalid_argument("filter bit budget smaller than one cell");
    filter_geometry g;
    g.cell_width = width;
    g.cells = bits_budget / width;
    g.hashes = optimal_hash_count(g.cells, expected_items);
    g.seed = seed;
    return g;
}

/// Standard false-positive estimate (1 - e^{-h n / m})^h.
inline double bloom_false_positive_rate(std::size_t cells, unsigned hashes, std::size_t items) {
    const double load = static_cast<double>(hashes) * static_cast<double>(items) / static_cast<double>(cells);
    return std::pow(1.0 - std::exp(-load), static_cast<double>(hashes));
}

}  // namespace lss
