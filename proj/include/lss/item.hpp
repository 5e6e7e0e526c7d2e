#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lss {

/// Opaque stream token. Trace readers map string tokens onto ids through a
/// token_dictionary, so two distinct tokens never share an id within a run.
enum class item_id : std::uint64_t {};

constexpr std::uint64_t raw(item_id id) noexcept { return static_cast<std::uint64_t>(id); }

constexpr item_id make_item(std::uint64_t value) noexcept { return item_id{value}; }

// splitmix64 finalizer. Used as the keyed hash for filters and as the
// per-item randomness source of the simulated predictor.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic 64-bit generator (splitmix64 sequence).
class splitmix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr splitmix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    constexpr double next_unit() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    constexpr std::uint64_t state() const noexcept { return state_; }

    friend constexpr bool operator==(const splitmix64&, const splitmix64&) = default;

private:
    std::uint64_t state_;
};

/// Uniform double in [0, 1) from any 64-bit engine, independent of the
/// standard library's distribution implementation.
template <class Engine>
double unit_draw(Engine& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Purpose-tagged seed derivation: one user seed fans out into independent
/// streams for the trace, the predictor and the LSS+ gate.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) noexcept {
    return mix64(seed ^ mix64(fnv1a(purpose)));
}

/// Interns string tokens into sequential item ids. Shared between the trace
/// reader and the prediction-table loader so both agree on every token.
class token_dictionary {
public:
    item_id intern(std::string_view token) {
        auto it = ids_.find(std::string(token));
        if (it != ids_.end()) return it->second;
        const item_id id{tokens_.size()};
        tokens_.emplace_back(token);
        ids_.emplace(tokens_.back(), id);
        return id;
    }

    const std::string* token(item_id id) const {
        return raw(id) < tokens_.size() ? &tokens_[raw(id)] : nullptr;
    }

    std::size_t size() const noexcept { return tokens_.size(); }

private:
    std::unordered_map<std::string, item_id> ids_;
    std::vector<std::string> tokens_;
};

}  // namespace lss
