#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lss/item.hpp"

namespace lss {

/// Zipf sampler over ranks 1..n with P(r) proportional to r^-alpha.
/// Inverse-CDF lookup driven by raw mt19937_64 output, so a seed gives the
/// same stream on every platform.
class zipf_generator {
public:
    zipf_generator(double alpha, std::uint64_t n, std::uint64_t seed) : engine_(seed) {
        if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("zipf alpha must be >= 0");
        if (n == 0) throw std::invalid_argument("zipf universe must be at least 1");
        cdf_.resize(n);
        double sum = 0.0;
        for (std::uint64_t r = 1; r <= n; ++r) {
            sum += std::pow(static_cast<double>(r), -alpha);
            cdf_[r - 1] = sum;
        }
        for (double& c : cdf_) c /= sum;
        cdf_.back() = 1.0;
    }

    /// Rank in [1, n].
    std::uint64_t next() {
        const double u = unit_draw(engine_);
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<std::uint64_t>(it - cdf_.begin()) + 1;
    }

    std::uint64_t universe() const noexcept { return cdf_.size(); }

private:
    std::mt19937_64 engine_;
    std::vector<double> cdf_;
};

/// H_{n,alpha} = sum_{r=1..n} r^-alpha.
inline double zipf_normalizer(double alpha, std::uint64_t n) {
    double sum = 0.0;
    for (std::uint64_t r = n; r >= 1; --r) sum += std::pow(static_cast<double>(r), -alpha);
    return sum;
}

/// N i.i.d. Zipf draws; the item id of rank r is r.
inline std::vector<item_id> gen_zipf(double alpha, std::uint64_t n, std::uint64_t length, std::uint64_t seed) {
    if (length == 0) throw std::invalid_argument("zipf stream length must be at least 1");
    zipf_generator gen(alpha, n, seed);
    std::vector<item_id> out;
    out.reserve(length);
    for (std::uint64_t i = 0; i < length; ++i) out.push_back(make_item(gen.next()));
    return out;
}

class trace_error : public std::runtime_error {
public:
    trace_error(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " at line " + std::to_string(line) : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len;
        std::uint32_t cp;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c >> 5) == 0x6) {
            len = 2;
            cp = c & 0x1f;
        } else if ((c >> 4) == 0xe) {
            len = 3;
            cp = c & 0x0f;
        } else if ((c >> 3) == 0x1e) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > s.size()) return false;
        for (std::size_t j = 1; j < len; ++j) {
            const auto cc = static_cast<unsigned char>(s[i + j]);
            if ((cc >> 6) != 0x2) return false;
            cp = (cp << 6) | (cc & 0x3f);
        }
        // overlong forms, surrogates, out of range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff))
            return false;
        i += len;
    }
    return true;
}

/// One token per line; blank lines are skipped.
inline std::vector<item_id> parse_trace(std::istream& in, token_dictionary& dict) {
    std::vector<item_id> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!valid_utf8(line)) throw trace_error("invalid UTF-8 in trace", lineno);
        out.push_back(dict.intern(line));
    }
    if (in.bad()) throw trace_error("read failure", lineno);
    if (out.empty()) throw trace_error("empty trace");
    return out;
}

inline std::vector<item_id> read_trace(const std::string& path, token_dictionary& dict) {
    std::ifstream in(path);
    if (!in) throw trace_error("cannot open trace '" + path + "'");
    return parse_trace(in, dict);
}

/// Writes raw ids, one per line (the format parse_trace reads).
inline void write_trace(const std::string& path, const std::vector<item_id>& stream) {
    std::ofstream out(path);
    if (!out) throw trace_error("cannot open '" + path + "' for writing");
    std::string buf;
    buf.reserve(1 << 16);
    for (item_id x : stream) {
        buf += std::to_string(raw(x));
        buf += '\n';
        if (buf.size() > (1 << 16) - 32) {
            out << buf;
            buf.clear();
        }
    }
    out << buf;
    if (!out) throw trace_error("write failure on '" + path + "'");
}

}  // namespace lss
