#pragma once

// Desk-scale verification of the error bounds and trend claims. Shared by
// the acceptance test binary and `lss selftest`. Every check is seeded from
// options::seed, so two runs with the same seed print the same numbers
// (timings aside).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "lss/experiment.hpp"
#include "lss/testing/reference.hpp"

namespace lss::selftest {

struct options {
    std::uint64_t seed = 42;
    bool skip_correction = false;  // fault injection: queries omit the filter correction
};

struct check_result {
    std::string id;
    std::string name;
    bool passed = false;
    std::string measured;
    std::string allowed;
    double seconds = 0.0;
};

namespace detail {

inline std::string fmt(double v) { return lss::detail::format_double(v); }

template <class Fn>
check_result timed(std::string id, std::string name, Fn fn) {
    const auto start = std::chrono::steady_clock::now();
    check_result r = fn();
    r.id = std::move(id);
    r.name = std::move(name);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Filter bits that sit beside k counters under a 90/10 counter/filter split.
inline std::size_t filter_bits_for(std::size_t k) {
    return (k * memory_model{}.entry_bits() + 8) / 9;
}

inline std::unordered_map<item_id, std::uint64_t> count_stream(std::span<const item_id> s) {
    std::unordered_map<item_id, std::uint64_t> out;
    for (item_id x : s) ++out[x];
    return out;
}

inline std::uint64_t abs_diff(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace detail

// 1 ---------------------------------------------------------------------------

inline check_result space_saving_bounds(const options& opt) {
    return detail::timed("1", "space saving bounds", [&] {
        const auto stream = gen_zipf(1.0, 10'000, 100'000, derive_seed(opt.seed, "c1"));
        const std::size_t k = 100;
        space_saving_table table(k);
        exact_oracle oracle;
        std::uint64_t checks = 0, violations = 0, worst_gap = 0;
        for (std::size_t i = 0; i < stream.size(); ++i) {
            table.insert(stream[i]);
            oracle.add(stream[i]);
            if ((i + 1) % 1000 != 0) continue;
            const std::uint64_t min = table.min_count();
            ++checks;
            if (table.full() && min > (table.inserted() + k - 1) / k) ++violations;
            for (std::size_t j = 0; j < oracle.distinct(); ++j) {
                const item_id x = oracle.items()[j];
                const std::uint64_t f = oracle.counts()[j];
                const std::uint64_t q = table.query(x);
                checks += 2;
                if (q < f || q > f + min) ++violations;
                // resident whenever the true count exceeds the minimum
                if (f > min && !table.contains(x)) ++violations;
                if (q >= f) worst_gap = std::max(worst_gap, q - f);
            }
        }
        check_result r;
        r.passed = violations == 0;
        r.measured = std::to_string(violations) + " violations in " + std::to_string(checks) +
                     " checks (largest q-f " + std::to_string(worst_gap) + ")";
        r.allowed = "0 violations";
        return r;
    });
}

// 2 ---------------------------------------------------------------------------

inline check_result brute_force_equivalence(const options& opt) {
    return detail::timed("2", "optimized table equals linear-scan reference", [&] {
        std::mt19937_64 rng(derive_seed(opt.seed, "c2"));
        const std::size_t streams = 10'000;
        std::size_t mismatches = 0;
        for (std::size_t s = 0; s < streams; ++s) {
            const std::size_t k = 1 + rng() % 20;
            const std::size_t k_hh = rng() % 2 ? rng() % k : 0;
            const std::uint64_t universe = 1 + rng() % 50;
            const std::size_t length = rng() % 201;
            const bool unit = rng() % 2 == 0;
            space_saving_table fast(k, k_hh);
            testing::reference_space_saving slow(k, k_hh);
            bool same = true;
            for (std::size_t i = 0; i < length && same; ++i) {
                const item_id x = make_item(rng() % universe);
                const bool mark = k_hh > 0 && rng() % 3 == 0;
                const std::uint64_t inc = unit ? 1 : 1 + rng() % 3;
                fast.insert(x, mark, inc);
                slow.insert(x, mark, inc);
                same = fast.entries() == slow.entries();
            }
            for (std::uint64_t u = 0; u < universe && same; ++u)
                same = fast.query(make_item(u)) == slow.query(make_item(u));
            if (!same) ++mismatches;
        }
        check_result r;
        r.passed = mismatches == 0;
        r.measured = std::to_string(mismatches) + " mismatching streams of " + std::to_string(streams);
        r.allowed = "0";
        return r;
    });
}

// 3 ---------------------------------------------------------------------------

inline check_result lfs_epsilon_frequency(const options& opt) {
    return detail::timed("3", "lss_lfs eps-frequency", [&] {
        const double eps = 0.01;
        experiment_config cfg;
        cfg.trace.alpha = 1.3;
        cfg.trace.universe = 100'000;
        cfg.trace.length = 100'000;
        cfg.seed = derive_seed(opt.seed, "c3");
        cfg.t = 1;
        cfg.sim_t = 2;  // single-occurrence items form the low class
        const workload w = make_workload(cfg.trace, cfg.seed);
        const predictor_ptr pred = make_predictor(cfg, w);
        const double n = static_cast<double>(w.stream.size());

        lss_config sc;
        sc.kind = variant::lss_lfs;
        sc.t = 1;
        sc.k = static_cast<std::size_t>(std::ceil(1.0 / (eps - 1.0 / n)));
        sc.filter_bits = detail::filter_bits_for(sc.k);
        sc.seed = derive_seed(cfg.seed, "sketch");
        sc.expected_low_items = predicted_low_items(w, *pred, 1);
        sc.skip_query_correction = opt.skip_correction;
        lss_sketch sketch(sc, pred);

        exact_oracle oracle;
        std::uint64_t checks = 0, violations = 0;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < w.stream.size(); ++i) {
            sketch.add(w.stream[i]);
            oracle.add(w.stream[i]);
            if ((i + 1) % cfg.window != 0) continue;
            const double slack = eps * static_cast<double>(oracle.total());
            for (std::size_t j = 0; j < oracle.distinct(); ++j) {
                const std::uint64_t f = oracle.counts()[j];
                const std::uint64_t q = sketch.query(oracle.items()[j]);
                ++checks;
                if (q < f || static_cast<double>(q - f) > slack) ++violations;
                worst = std::max(worst, (static_cast<double>(q) - static_cast<double>(f)) / slack);
            }
        }
        check_result r;
        r.passed = violations == 0;
        r.measured = std::to_string(violations) + " violations in " + std::to_string(checks) +
                     " checks (k=" + std::to_string(sc.k) + ", max (q-f)/(eps*N) " + detail::fmt(worst) + ")";
        r.allowed = "0 violations of f <= q <= f + 0.01*N";
        return r;
    });
}

// 4 ---------------------------------------------------------------------------

inline check_result adversarial_predictors(const options& opt) {
    return detail::timed("4", "constant predictors stay close to space saving", [&] {
        experiment_config base;
        base.trace.alpha = 1.3;
        base.trace.universe = 100'000;
        base.trace.length = 100'000;
        base.seed = derive_seed(opt.seed, "c4");
        const workload w = make_workload(base.trace, base.seed);

        experiment_config ss_cfg = base;
        const metrics_report ss = run_experiment(ss_cfg, variant::ss, w, make_predictor(ss_cfg, w));

        bool ok = true;
        std::string measured = "ss precision " + detail::fmt(ss.precision_topk);
        for (predictor_kind kind : {predictor_kind::constant_low, predictor_kind::constant_heavy}) {
            experiment_config cfg = base;
            cfg.predictor = kind;
            cfg.fixed_ratio = kind == predictor_kind::constant_low ? 0.0 : 0.1;
            const predictor_ptr pred = make_predictor(cfg, w);
            const metrics_report rep = run_experiment(cfg, variant::lss, w, pred);

            lss_sketch sketch = make_sketch(cfg, variant::lss, w, pred, opt.skip_correction);
            exact_oracle oracle;
            std::uint64_t under = 0;
            for (std::size_t i = 0; i < w.stream.size(); ++i) {
                sketch.add(w.stream[i]);
                oracle.add(w.stream[i]);
                if ((i + 1) % cfg.window != 0) continue;
                for (std::size_t j = 0; j < oracle.distinct(); ++j)
                    if (sketch.query(oracle.items()[j]) < oracle.counts()[j]) ++under;
            }
            ok = ok && under == 0 && rep.precision_topk >= ss.precision_topk - 0.05;
            measured += "; " + std::string(to_string(kind)) + " precision " + detail::fmt(rep.precision_topk) +
                        ", underestimates " + std::to_string(under);
        }
        check_result r;
        r.passed = ok;
        r.measured = measured;
        r.allowed = "0 underestimates; precision >= ss - 0.05";
        return r;
    });
}

// 5 ---------------------------------------------------------------------------

inline check_result perfect_low_frequency_gain(const options& opt) {
    return detail::timed("5", "perfect single-occurrence predictions", [&] {
        const auto stream = gen_zipf(1.3, 100'000, 100'000, derive_seed(opt.seed, "c5"));
        const auto counts = detail::count_stream(stream);
        auto pred = std::make_shared<exact_predictor>(counts);

        lss_config sc;
        sc.kind = variant::lss_lfs;
        sc.t = 1;
        sc.k = 100;
        sc.filter_bits = 1;  // the exact filter ignores its geometry
        sc.skip_query_correction = opt.skip_correction;
        basic_lss_sketch<testing::exact_membership, testing::exact_counter> sketch(sc, pred);
        for (item_id x : stream) sketch.add(x);

        const exact_oracle oracle(stream);
        std::uint64_t max_err = 0;
        for (std::size_t j = 0; j < oracle.distinct(); ++j)
            max_err = std::max(max_err, detail::abs_diff(sketch.query(oracle.items()[j]), oracle.counts()[j]));
        const double ell = static_cast<double>(oracle.singletons());
        const double bound = (static_cast<double>(stream.size()) - ell) / static_cast<double>(sc.k);

        check_result r;
        r.passed = static_cast<double>(max_err) < bound;
        r.measured = "max error " + std::to_string(max_err) + " (ell=" + detail::fmt(ell) + ")";
        r.allowed = "< " + detail::fmt(bound);
        return r;
    });
}

// 6 ---------------------------------------------------------------------------

inline check_result bloom_filter_gain(const options& opt) {
    return detail::timed("6", "false-positive-adjusted gain", [&] {
        const double nu = 0.1;
        const double target_fpr = 0.01;
        const auto stream = gen_zipf(1.3, 100'000, 100'000, derive_seed(opt.seed, "c6"));
        const auto counts = detail::count_stream(stream);
        const exact_oracle oracle(stream);
        const std::size_t ell = oracle.singletons();
        auto pred = std::make_shared<exact_predictor>(counts);

        const double ln2 = std::log(2.0);
        lss_config sc;
        sc.kind = variant::lss_lfs;
        sc.t = 1;
        sc.k = 100;
        sc.filter_bits = static_cast<std::size_t>(
            std::ceil(-static_cast<double>(ell) * std::log(target_fpr) / (ln2 * ln2)));
        sc.filter_hashes =
            static_cast<unsigned>(std::round(ln2 * static_cast<double>(sc.filter_bits) / static_cast<double>(ell)));
        sc.seed = derive_seed(opt.seed, "c6-sketch");
        sc.skip_query_correction = opt.skip_correction;
        lss_sketch sketch(sc, pred);
        const bloom_filter& bf = *sketch.membership();

        // every single-occurrence arrival is a Bernoulli trial whose success
        // probability is the filter's false-positive rate at its current load
        std::size_t load = 0, leaked = 0;
        double expected = 0.0, variance = 0.0;
        for (item_id x : stream) {
            if (counts.at(x) == 1) {
                const double q = bloom_false_positive_rate(bf.bit_count(), bf.hash_count(), load);
                expected += q;
                variance += q * (1.0 - q);
                if (bf.contains(x))
                    ++leaked;
                else
                    ++load;
            }
            sketch.add(x);
        }
        const double sigma = std::sqrt(variance);
        const bool count_ok = std::abs(static_cast<double>(leaked) - expected) <= 3.0 * sigma;

        const double fpr = bloom_false_positive_rate(bf.bit_count(), bf.hash_count(), load);
        std::uint64_t max_err = 0;
        for (std::size_t j = 0; j < oracle.distinct(); ++j)
            max_err = std::max(max_err, detail::abs_diff(sketch.query(oracle.items()[j]), oracle.counts()[j]));
        const double bound = (static_cast<double>(stream.size()) - static_cast<double>(ell) * (1.0 - (1.0 + nu) * fpr)) /
                             static_cast<double>(sc.k);

        check_result r;
        r.passed = count_ok && static_cast<double>(max_err) < bound;
        r.measured = "leaked singletons " + std::to_string(leaked) + " of " + std::to_string(ell) +
                     "; max error " + std::to_string(max_err) + " (final fpr " + detail::fmt(fpr) + ")";
        r.allowed = "leaked " + detail::fmt(expected) + " +- " + detail::fmt(3.0 * sigma) + "; error < " +
                    detail::fmt(bound);
        return r;
    });
}

// 7 ---------------------------------------------------------------------------

inline check_result perfect_heavy_hitter_gain(const options& opt) {
    return detail::timed("7", "perfect heavy-hitter predictions", [&] {
        const std::size_t n = 100'000, k = 50, k_hh = 5, tail_items = 2000;
        const double theta = 0.05;
        const std::uint64_t hh_count = 6000;
        std::mt19937_64 rng(derive_seed(opt.seed, "c7"));

        std::vector<item_id> stream;
        for (std::uint64_t h = 0; h < k_hh; ++h) stream.push_back(make_item(h));
        std::vector<item_id> rest;
        for (std::uint64_t h = 0; h < k_hh; ++h) rest.insert(rest.end(), hh_count - 1, make_item(h));
        while (rest.size() + k_hh < n) rest.push_back(make_item(k_hh + rng() % tail_items));
        std::shuffle(rest.begin(), rest.end(), rng);
        stream.insert(stream.end(), rest.begin(), rest.end());

        const exact_oracle oracle(stream);
        const double bar = theta * static_cast<double>(n);
        const auto heavy = oracle.heavy_hitters(theta);

        lss_config sc;
        sc.kind = variant::lss_hh;
        sc.k = k;
        sc.k_hh = k_hh;
        predictor_thresholds th;
        th.hh_count_threshold = bar;
        lss_sketch sketch(sc, std::make_shared<exact_predictor>(oracle.count_map()), th);
        for (item_id x : stream) sketch.add(x);

        const double bound = (static_cast<double>(n) - static_cast<double>(k_hh) * bar) / static_cast<double>(k - k_hh);
        std::uint64_t fixed_errors = 0, violations = 0, max_other = 0;
        for (std::size_t j = 0; j < oracle.distinct(); ++j) {
            const item_id x = oracle.items()[j];
            const std::uint64_t err = detail::abs_diff(sketch.query(x), oracle.counts()[j]);
            if (std::find(heavy.begin(), heavy.end(), x) != heavy.end()) {
                const auto* e = sketch.table().find(x);
                if (err != 0 || !e || !e->fixed) ++fixed_errors;
            } else {
                max_other = std::max(max_other, err);
                if (static_cast<double>(err) >= bound) ++violations;
            }
        }
        check_result r;
        r.passed = heavy.size() == k_hh && fixed_errors == 0 && violations == 0;
        r.measured = std::to_string(heavy.size()) + " heavy hitters, " + std::to_string(fixed_errors) +
                     " with nonzero error; max other error " + std::to_string(max_other);
        r.allowed = std::to_string(k_hh) + " heavy hitters, 0 fixed errors; other error < " + detail::fmt(bound);
        return r;
    });
}

// 8 ---------------------------------------------------------------------------

inline check_result sampled_filter_expectation(const options& opt) {
    return detail::timed("8", "lss_plus expectation at tau=1/2", [&] {
        const std::size_t runs = 1000;
        const std::uint64_t tau_inv = 2, t = 4;
        const double eps = 0.01;
        const auto stream = gen_zipf(1.3, 10'000, 20'000, derive_seed(opt.seed, "c8"));
        const double n = static_cast<double>(stream.size());
        const exact_oracle oracle(stream);

        simulated_predictor_spec ps;
        ps.t = t;
        ps.seed = derive_seed(opt.seed, "c8-predictor");
        const predictor_ptr pred = std::make_shared<simulated_predictor>(ps, oracle.count_map());

        lss_config base;
        base.t = t;
        base.k = static_cast<std::size_t>(std::ceil(1.0 / (eps - static_cast<double>(t * tau_inv) / n)));
        base.k_hh = base.k / 10;
        base.filter_bits = detail::filter_bits_for(base.k);
        base.skip_query_correction = opt.skip_correction;
        predictor_thresholds th;
        th.hh_count_threshold = 0.25 / static_cast<double>(base.k) * n;
        {
            workload w;
            w.true_counts = oracle.count_map();
            base.expected_low_items = predicted_low_items(w, *pred, t);
        }

        // probes at log-spaced ranks of the exact frequency order
        const auto ranked = oracle.top_k(oracle.distinct());
        std::vector<item_id> probes;
        for (std::size_t i = 0; i < 20; ++i) {
            const double pos = std::pow(static_cast<double>(ranked.size()), static_cast<double>(i) / 19.0) - 1.0;
            const item_id x = ranked[static_cast<std::size_t>(std::llround(pos))];
            if (std::find(probes.begin(), probes.end(), x) == probes.end()) probes.push_back(x);
        }

        std::vector<std::vector<double>> answers(probes.size());
        std::vector<double> ops_plus, ops_lss;
        for (std::size_t r = 0; r < runs; ++r) {
            lss_config plus = base;
            plus.kind = variant::lss_plus;
            plus.tau_inv = tau_inv;
            plus.seed = derive_seed(opt.seed, "c8-run") + r;
            lss_config plain = plus;
            plain.kind = variant::lss;
            lss_sketch a(plus, pred, th), b(plain, pred, th);
            for (item_id x : stream) {
                a.add(x);
                b.add(x);
            }
            for (std::size_t i = 0; i < probes.size(); ++i) answers[i].push_back(static_cast<double>(a.query(probes[i])));
            ops_plus.push_back(static_cast<double>(a.filter_ops()));
            ops_lss.push_back(static_cast<double>(b.filter_ops()));
        }

        std::size_t outside = 0;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double f = static_cast<double>(oracle.count(probes[i]));
            const double m = detail::mean(answers[i]);
            const double band = 3.0 * detail::sample_sd(answers[i]) / std::sqrt(static_cast<double>(runs));
            if (m < f - band || m > f + eps * n + band) ++outside;
            worst = std::max(worst, (m - f) / (eps * n));
        }
        const double tau = 1.0 / static_cast<double>(tau_inv);
        const double lss_ops = detail::mean(ops_lss);
        const double plus_ops = detail::mean(ops_plus);
        const double sigma = std::sqrt(lss_ops * tau * (1.0 - tau));
        const bool ops_ok = std::abs(plus_ops - tau * lss_ops) <= 3.0 * sigma;

        check_result r;
        r.passed = outside == 0 && ops_ok;
        r.measured = std::to_string(outside) + " of " + std::to_string(probes.size()) +
                     " probe means outside (max (mean-f)/(eps*N) " + detail::fmt(worst) + "); filter ops " +
                     detail::fmt(plus_ops) + " vs lss " + detail::fmt(lss_ops);
        r.allowed = "0 outside [f, f+eps*N] +- 3 se; filter ops " + detail::fmt(tau * lss_ops) + " +- " +
                    detail::fmt(3.0 * sigma);
        return r;
    });
}

// 9 ---------------------------------------------------------------------------

inline check_result tau_one_reduction(const options& opt) {
    return detail::timed("9", "lss_plus at tau=1 equals lss", [&] {
        std::mt19937_64 rng(derive_seed(opt.seed, "c9"));
        const std::size_t streams = 100;
        std::size_t mismatches = 0;
        for (std::size_t s = 0; s < streams; ++s) {
            const std::uint64_t universe = 1 + rng() % 300;
            const std::size_t length = 1 + rng() % 2000;
            std::vector<item_id> stream(length);
            zipf_generator gen(0.5 + static_cast<double>(rng() % 100) / 100.0, universe, rng());
            for (auto& x : stream) x = make_item(gen.next());

            simulated_predictor_spec ps;
            ps.t = 1 + rng() % 4;
            ps.p = static_cast<double>(rng() % 101) / 100.0;
            ps.seed = rng();
            const auto pred = std::make_shared<simulated_predictor>(ps, detail::count_stream(stream));

            lss_config c;
            c.kind = variant::lss;
            c.t = ps.t;
            c.k = 2 + rng() % 49;
            c.k_hh = rng() % (c.k / 2);
            c.filter_bits = 4 + rng() % 2000;
            c.seed = rng();
            predictor_thresholds th;
            th.hh_count_threshold = static_cast<double>(1 + rng() % 50);
            lss_config p = c;
            p.kind = variant::lss_plus;
            p.tau_inv = 1;
            lss_sketch a(c, pred, th), b(p, pred, th);
            for (item_id x : stream) {
                a.add(x);
                b.add(x);
            }
            bool same = a == b && a.memory_bits() == b.memory_bits();
            for (std::uint64_t u = 0; u <= universe && same; ++u) same = a.query(make_item(u)) == b.query(make_item(u));
            if (!same) ++mismatches;
        }
        check_result r;
        r.passed = mismatches == 0;
        r.measured = std::to_string(mismatches) + " differing streams of " + std::to_string(streams);
        r.allowed = "0";
        return r;
    });
}

// 10 --------------------------------------------------------------------------

inline experiment_config trend_config(const options& opt) {
    experiment_config cfg;
    cfg.trace.alpha = 1.3;
    cfg.trace.universe = 1'000'000;
    cfg.trace.length = 1'000'000;
    cfg.p = 0.9;
    cfg.t = 4;
    cfg.filter_ratio = 0.1;
    cfg.seed = derive_seed(opt.seed, "c10");
    return cfg;
}

inline check_result trend_precision(const options& opt, const workload& w) {
    return detail::timed("10a", "top-k precision of lss vs ss as p varies", [&] {
        experiment_config cfg = trend_config(opt);
        cfg.fixed_ratio = 0.0;
        const metrics_report ss = run_experiment(cfg, variant::ss, w, make_predictor(cfg, w));
        bool dominates = true;
        double gain_at_one = 0.0;
        std::string measured = "ss " + detail::fmt(ss.precision_topk);
        for (double p : {0.9, 1.0}) {
            cfg.p = p;
            const metrics_report lss = run_experiment(cfg, variant::lss, w, make_predictor(cfg, w));
            dominates = dominates && lss.precision_topk >= ss.precision_topk;
            if (p == 1.0) gain_at_one = lss.precision_topk / ss.precision_topk;
            measured += "; lss p=" + detail::fmt(p) + " " + detail::fmt(lss.precision_topk);
        }
        check_result r;
        r.passed = dominates && gain_at_one >= 1.2;
        r.measured = measured + "; ratio at p=1 " + detail::fmt(gain_at_one);
        r.allowed = "lss >= ss at both p; ratio at p=1 >= 1.2";
        return r;
    });
}

inline check_result trend_fixed_ratio(const options& opt, const workload& w) {
    return detail::timed("10b", "recall up and precision flat as fixed_ratio grows", [&] {
        experiment_config cfg = trend_config(opt);
        const predictor_ptr pred = make_predictor(cfg, w);
        std::vector<double> recall, precision;
        for (double fr : {0.0, 0.05, 0.1, 0.2}) {
            cfg.fixed_ratio = fr;
            const metrics_report rep = run_experiment(cfg, variant::lss, w, pred);
            recall.push_back(rep.recall_hh);
            precision.push_back(rep.precision_topk);
        }
        std::size_t recall_drops = 0, precision_rises = 0;
        for (std::size_t i = 1; i < recall.size(); ++i) {
            recall_drops += recall[i] < recall[i - 1];
            precision_rises += precision[i] > precision[i - 1];
        }
        std::string measured = "recall";
        for (double v : recall) measured += " " + detail::fmt(v);
        measured += "; precision";
        for (double v : precision) measured += " " + detail::fmt(v);
        check_result r;
        r.passed = recall_drops <= 1 && precision_rises == 0;
        r.measured = measured;
        r.allowed = "recall drops <= 1; precision rises 0";
        return r;
    });
}

inline check_result trend_memory(const options& opt, const workload& w) {
    return detail::timed("10c", "rmse falls with memory for every variant", [&] {
        experiment_config cfg = trend_config(opt);
        const predictor_ptr pred = make_predictor(cfg, w);
        std::size_t rises = 0;
        std::string measured;
        for (variant v : {variant::ss, variant::lss_lf, variant::lss_hh, variant::lss, variant::lss_plus}) {
            measured += (measured.empty() ? "" : "; ") + std::string(to_string(v));
            double prev = std::numeric_limits<double>::infinity();
            for (unsigned e = 14; e <= 19; ++e) {
                cfg.memory_bits = std::size_t{1} << e;
                const double rmse = run_experiment(cfg, v, w, pred).rmse;
                if (!(rmse < prev)) ++rises;
                prev = rmse;
                measured += " " + detail::fmt(rmse);
            }
        }
        check_result r;
        r.passed = rises == 0;
        r.measured = measured;
        r.allowed = "strictly decreasing over 2^14..2^19 bits";
        return r;
    });
}

// 11 --------------------------------------------------------------------------

inline check_result metric_formulas(const options&) {
    return detail::timed("11", "metric formulas on hand-computed values", [] {
        const std::vector<double> truth{2, 1}, est{3, 1};
        const auto a = make_item(1), b = make_item(2), c = make_item(3), d = make_item(4);
        const std::vector<item_id> reported{a, b, c}, relevant{a, c, d};
        const double r1 = rmse(truth, est);
        const double p1 = precision(reported, relevant);
        const double c1 = recall(reported, relevant);
        const double p0 = precision({}, relevant);
        const double c0 = recall(reported, {});
        check_result r;
        r.passed = r1 == std::sqrt(0.5) && p1 == 2.0 / 3.0 && c1 == 2.0 / 3.0 && p0 == 0.0 && c0 == 1.0;
        r.measured = "rmse " + detail::fmt(r1) + ", precision " + detail::fmt(p1) + ", recall " + detail::fmt(c1) +
                     ", empty-report precision " + detail::fmt(p0) + ", empty-truth recall " + detail::fmt(c0);
        r.allowed = "rmse 0.7071067812, precision 0.6666666667, recall 0.6666666667, 0, 1";
        return r;
    });
}

// -----------------------------------------------------------------------------

inline const std::vector<std::string>& check_ids() {
    static const std::vector<std::string> ids{"1", "2", "3", "4", "5", "6", "7", "8", "9", "10a", "10b", "10c", "11"};
    return ids;
}

/// Run the checks whose id is listed (all when `only` is empty).
inline std::vector<check_result> run(const options& opt, const std::vector<std::string>& only = {}) {
    auto wanted = [&](const std::string& id) {
        return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
    };
    std::vector<check_result> out;
    if (wanted("1")) out.push_back(space_saving_bounds(opt));
    if (wanted("2")) out.push_back(brute_force_equivalence(opt));
    if (wanted("3")) out.push_back(lfs_epsilon_frequency(opt));
    if (wanted("4")) out.push_back(adversarial_predictors(opt));
    if (wanted("5")) out.push_back(perfect_low_frequency_gain(opt));
    if (wanted("6")) out.push_back(bloom_filter_gain(opt));
    if (wanted("7")) out.push_back(perfect_heavy_hitter_gain(opt));
    if (wanted("8")) out.push_back(sampled_filter_expectation(opt));
    if (wanted("9")) out.push_back(tau_one_reduction(opt));
    if (wanted("10a") || wanted("10b") || wanted("10c")) {
        const experiment_config cfg = trend_config(opt);
        const workload w = make_workload(cfg.trace, cfg.seed);
        if (wanted("10a")) out.push_back(trend_precision(opt, w));
        if (wanted("10b")) out.push_back(trend_fixed_ratio(opt, w));
        if (wanted("10c")) out.push_back(trend_memory(opt, w));
    }
    if (wanted("11")) out.push_back(metric_formulas(opt));
    return out;
}

/// One line per check: PASS/FAIL, id, name, measured vs allowed.
inline void print(std::ostream& os, const check_result& r, bool with_time = true) {
    os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": measured " << r.measured
       << " | allowed " << r.allowed;
    if (with_time) os << " (" << detail::fmt(std::round(r.seconds * 100.0) / 100.0) << " s)";
    os << '\n';
}

}  // namespace lss::selftest
