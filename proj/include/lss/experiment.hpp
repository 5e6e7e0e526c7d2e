#pragma once

// Experiment harness: resolves a memory budget into sketch parameters, runs
// the windowed evaluation protocol against an exact oracle, and sweeps one
// parameter axis at a time. All runs of one sweep share the same arrival
// sequence and predictor draws so variants can be compared pairwise.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "lss/metrics.hpp"
#include "lss/oracle.hpp"
#include "lss/predictors.hpp"
#include "lss/sketch.hpp"
#include "lss/workload.hpp"

namespace lss {

enum class predictor_kind { simulated, table, constant_low, constant_heavy, exact };

constexpr std::string_view to_string(predictor_kind k) noexcept {
    switch (k) {
        case predictor_kind::simulated: return "sim";
        case predictor_kind::table: return "table";
        case predictor_kind::constant_low: return "const_low";
        case predictor_kind::constant_heavy: return "const_heavy";
        case predictor_kind::exact: return "exact";
    }
    return "?";
}

inline std::optional<predictor_kind> parse_predictor_kind(std::string_view name) {
    for (auto k : {predictor_kind::simulated, predictor_kind::table, predictor_kind::constant_low,
                   predictor_kind::constant_heavy, predictor_kind::exact})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

struct trace_spec {
    enum class source { zipf, file };
    source kind = source::zipf;
    double alpha = 1.3;
    std::uint64_t universe = 1'000'000;
    std::uint64_t length = 1'000'000;
    std::string path;
};

struct experiment_config {
    trace_spec trace;
    std::vector<variant> variants{variant::ss, variant::lss};
    std::size_t memory_bits = 1 << 16;
    std::uint64_t t = 4;
    std::uint64_t tau_inv = 2;
    double filter_ratio = 0.10;
    double fixed_ratio = 0.10;
    double theta_factor = 0.25;
    std::size_t top_k = 64;
    std::size_t window = 1000;
    double nu = 0.1;
    std::size_t repetitions = 1;
    std::uint64_t seed = 1;

    predictor_kind predictor = predictor_kind::simulated;
    double p = 0.9;
    double noise = 0.05;
    double promote_prob = 0.01;
    std::uint64_t sim_t = 0;  // 0: same as t
    std::string pred_table;
    double pred_default = 1.0;

    unsigned filter_hashes = 0;
    unsigned cell_width = 4;
    cbf_update cbf_mode = cbf_update::standard;
    std::size_t rmse_sample = 0;  // 0: every distinct item seen so far
    std::size_t threads = 1;
};

/// Materialized stream plus its exact whole-stream counts.
struct workload {
    std::vector<item_id> stream;
    std::unordered_map<item_id, std::uint64_t> true_counts;
    std::optional<double> alpha;
    std::shared_ptr<token_dictionary> dict = std::make_shared<token_dictionary>();
};

inline workload make_workload(const trace_spec& spec, std::uint64_t seed,
                              std::shared_ptr<token_dictionary> dict = std::make_shared<token_dictionary>()) {
    workload w;
    w.dict = std::move(dict);
    if (spec.kind == trace_spec::source::file) {
        w.stream = read_trace(spec.path, *w.dict);
    } else {
        if (spec.length == 0) throw config_error("zipf_len must be at least 1");
        if (spec.universe == 0) throw config_error("zipf_n must be at least 1");
        zipf_generator gen(spec.alpha, spec.universe, derive_seed(seed, "trace"));
        // ranks go through the dictionary so a generated trace read back
        // from disk yields the same ids
        std::vector<std::optional<item_id>> by_rank(spec.universe + 1);
        w.stream.reserve(spec.length);
        for (std::uint64_t i = 0; i < spec.length; ++i) {
            const std::uint64_t r = gen.next();
            if (!by_rank[r]) by_rank[r] = w.dict->intern(std::to_string(r));
            w.stream.push_back(*by_rank[r]);
        }
        w.alpha = spec.alpha;
    }
    for (item_id x : w.stream) ++w.true_counts[x];
    return w;
}

inline workload truncated(const workload& w, std::size_t prefix) {
    workload out;
    out.dict = w.dict;
    out.alpha = w.alpha;
    out.stream.assign(w.stream.begin(), w.stream.begin() + static_cast<std::ptrdiff_t>(std::min(prefix, w.stream.size())));
    for (item_id x : out.stream) ++out.true_counts[x];
    return out;
}

inline predictor_ptr make_predictor(const experiment_config& cfg, const workload& w) {
    switch (cfg.predictor) {
        case predictor_kind::simulated: {
            simulated_predictor_spec spec;
            spec.t = cfg.sim_t ? cfg.sim_t : cfg.t;
            spec.p = cfg.p;
            spec.noise = cfg.noise;
            spec.promote_prob = cfg.promote_prob;
            spec.seed = derive_seed(cfg.seed, "predictor");
            return std::make_shared<simulated_predictor>(spec, w.true_counts);
        }
        case predictor_kind::table:
            if (cfg.pred_table.empty()) throw config_error("pred_table: path required for table predictor");
            return std::make_shared<table_predictor>(load_prediction_table(cfg.pred_table, *w.dict, cfg.pred_default));
        case predictor_kind::constant_low: return std::make_shared<constant_predictor>(1.0);
        case predictor_kind::constant_heavy:
            return std::make_shared<constant_predictor>(static_cast<double>(w.stream.size()) + 1.0);
        case predictor_kind::exact: return std::make_shared<exact_predictor>(w.true_counts);
    }
    throw config_error("predictor: unknown kind");
}

/// Counter capacity of plain Space Saving under the budget; eps = 1 / k_ss.
inline std::size_t baseline_capacity(const experiment_config& cfg) {
    return cfg.memory_bits / memory_model{}.entry_bits();
}

inline double heavy_hitter_theta(const experiment_config& cfg) {
    const std::size_t k_ss = baseline_capacity(cfg);
    if (k_ss == 0) throw config_error("memory_bits: budget holds no counter");
    return cfg.theta_factor / static_cast<double>(k_ss);
}

/// Split the memory budget into counters, fixed entries and filter bits.
inline lss_config resolve_sketch(const experiment_config& cfg, variant v) {
    if (cfg.filter_ratio < 0.0 || cfg.filter_ratio >= 1.0) throw config_error("filter_ratio: must lie in [0, 1)");
    if (cfg.fixed_ratio < 0.0 || cfg.fixed_ratio >= 1.0) throw config_error("fixed_ratio: must lie in [0, 1)");
    lss_config c;
    c.kind = v;
    c.t = v == variant::lss_lfs ? 1 : cfg.t;
    if (v == variant::lss_lfs && cfg.t != 1) throw config_error("t: lss_lfs requires t=1");
    c.tau_inv = cfg.tau_inv;
    c.seed = derive_seed(cfg.seed, "sketch");
    c.filter_hashes = cfg.filter_hashes;
    c.cbf_mode = cfg.cbf_mode;
    c.memory.cbf_cell_bits = cfg.cell_width;
    const std::size_t eb = c.memory.entry_bits();
    if (uses_filter(v)) {
        c.k = static_cast<std::size_t>(std::floor((1.0 - cfg.filter_ratio) * static_cast<double>(cfg.memory_bits) /
                                                  static_cast<double>(eb)));
        if (c.k * eb > cfg.memory_bits) throw config_error("memory_bits: budget too small");
        c.filter_bits = cfg.memory_bits - c.k * eb;
    } else {
        c.k = cfg.memory_bits / eb;
    }
    if (c.k == 0) throw config_error("memory_bits: budget holds no counter");
    if (uses_fixed_entries(v))
        c.k_hh = static_cast<std::size_t>(std::floor(cfg.fixed_ratio * static_cast<double>(c.k)));
    try {
        return normalized(c);
    } catch (const config_error& e) {
        throw config_error(std::string("memory_bits/filter_ratio: ") + e.what());
    }
}

struct window_metrics {
    std::uint64_t prefix = 0;
    double rmse = 0.0;
    double precision_topk = 0.0;
    double recall_hh = 0.0;
    std::uint64_t max_abs_error = 0;
};

struct metrics_report {
    variant kind = variant::ss;
    lss_config sketch;
    std::string axis = "none";
    std::string axis_value;
    std::size_t memory_bits = 0;
    double p = 0.0;
    std::optional<double> alpha;
    std::size_t window = 0;
    std::uint64_t seed = 0;
    double theta = 0.0;

    std::vector<window_metrics> windows;
    double rmse = 0.0;
    double precision_topk = 0.0;
    double recall_hh = 0.0;
    std::uint64_t max_abs_error = 0;
    double updates_per_sec = 0.0;
    std::uint64_t filter_ops = 0;
};

/// Validation shared by run_experiment and the CLI.
inline void validate(const experiment_config& cfg) {
    if (cfg.window == 0) throw config_error("window: must be at least 1");
    if (cfg.top_k == 0) throw config_error("top_k: must be at least 1");
    if (cfg.repetitions == 0) throw config_error("repetitions: must be at least 1");
    if (cfg.variants.empty()) throw config_error("variants: at least one variant required");
    if (cfg.theta_factor <= 0.0) throw config_error("theta_factor: must be positive");
    if (cfg.p < 0.0 || cfg.p > 1.0) throw config_error("p: must lie in [0, 1]");
    if (cfg.nu <= 0.0) throw config_error("nu: must be positive");
    if (cfg.t == 0) throw config_error("t: must be at least 1");
    if (cfg.tau_inv == 0) throw config_error("tau_inv: must be at least 1");
    if (cfg.cell_width == 0 || cfg.cell_width > 8) throw config_error("cell_width: must lie in [1, 8]");
    for (variant v : cfg.variants) resolve_sketch(cfg, v);
    if (heavy_hitter_theta(cfg) > 1.0) throw config_error("theta_factor: heavy hitter threshold above 1");
}

/// Distinct items whose prediction routes them through the filter.
inline std::size_t predicted_low_items(const workload& w, const frequency_predictor& pred, std::uint64_t t) {
    std::size_t n = 0;
    predictor_thresholds th;
    th.low_freq_t = t;
    for (const auto& [item, count] : w.true_counts) n += is_low_frequency(pred, item, th);
    return n;
}

/// The sketch run_experiment evaluates, before any arrival.
inline lss_sketch make_sketch(const experiment_config& cfg, variant v, const workload& w,
                              const predictor_ptr& predictor, bool skip_query_correction = false) {
    lss_config sc = resolve_sketch(cfg, v);
    if (uses_filter(v) && cfg.filter_hashes == 0)
        sc.expected_low_items = predicted_low_items(w, *predictor, sc.t);
    sc.skip_query_correction = skip_query_correction;
    predictor_thresholds th;
    th.low_freq_t = sc.t;
    th.hh_count_threshold = heavy_hitter_theta(cfg) * static_cast<double>(w.stream.size());
    return lss_sketch(sc, predictor, th);
}

inline metrics_report run_experiment(const experiment_config& cfg, variant v, const workload& w,
                                     const predictor_ptr& predictor) {
    if (cfg.window == 0) throw config_error("window: must be at least 1");
    if (w.stream.size() < cfg.window) throw config_error("window: stream shorter than one window");
    const double theta = heavy_hitter_theta(cfg);
    lss_sketch sketch = make_sketch(cfg, v, w, predictor);

    metrics_report rep;
    rep.kind = v;
    rep.sketch = sketch.config();
    rep.memory_bits = cfg.memory_bits;
    rep.p = cfg.p;
    rep.alpha = w.alpha;
    rep.window = cfg.window;
    rep.seed = cfg.seed;
    rep.theta = theta;

    exact_oracle oracle;
    splitmix64 sampler(derive_seed(cfg.seed, "rmse-sample"));
    std::vector<item_id> sample;
    std::chrono::steady_clock::duration ingest{};
    const std::size_t n = w.stream.size();
    for (std::size_t begin = 0; begin + cfg.window <= n; begin += cfg.window) {
        const auto* first = w.stream.data() + begin;
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < cfg.window; ++i) sketch.add(first[i]);
        ingest += std::chrono::steady_clock::now() - start;
        for (std::size_t i = 0; i < cfg.window; ++i) oracle.add(first[i]);

        std::span<const item_id> population = oracle.items();
        if (cfg.rmse_sample && cfg.rmse_sample < population.size()) {
            sample.clear();
            for (std::size_t i = 0; i < cfg.rmse_sample; ++i)
                sample.push_back(population[sampler() % population.size()]);
            population = sample;
        }
        window_metrics wm;
        wm.prefix = oracle.total();
        double sq = 0.0;
        for (item_id x : population) {
            const std::uint64_t f = oracle.count(x);
            const std::uint64_t q = sketch.query(x);
            const std::uint64_t err = q > f ? q - f : f - q;
            wm.max_abs_error = std::max(wm.max_abs_error, err);
            sq += static_cast<double>(err) * static_cast<double>(err);
        }
        wm.rmse = std::sqrt(sq / static_cast<double>(population.size()));
        wm.precision_topk = precision_topk(oracle, sketch, cfg.top_k);
        wm.recall_hh = recall_hh(oracle, sketch, theta);
        rep.windows.push_back(wm);
    }
    // arrivals beyond the last full window still count toward throughput
    {
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t i = rep.windows.size() * cfg.window; i < n; ++i) sketch.add(w.stream[i]);
        ingest += std::chrono::steady_clock::now() - start;
    }

    for (const auto& wm : rep.windows) {
        rep.rmse += wm.rmse;
        rep.precision_topk += wm.precision_topk;
        rep.recall_hh += wm.recall_hh;
        rep.max_abs_error = std::max(rep.max_abs_error, wm.max_abs_error);
    }
    const double nw = static_cast<double>(rep.windows.size());
    rep.rmse /= nw;
    rep.precision_topk /= nw;
    rep.recall_hh /= nw;
    const double secs = std::chrono::duration<double>(ingest).count();
    rep.updates_per_sec = secs > 0.0 ? static_cast<double>(n) / secs : 0.0;
    rep.filter_ops = sketch.filter_ops();
    return rep;
}

/// Run every configured variant once per repetition on one shared workload.
inline std::vector<metrics_report> run_experiment(const experiment_config& cfg) {
    validate(cfg);
    const workload w = make_workload(cfg.trace, cfg.seed);
    const predictor_ptr pred = make_predictor(cfg, w);
    std::vector<metrics_report> out;
    for (std::size_t r = 0; r < cfg.repetitions; ++r)
        for (variant v : cfg.variants) out.push_back(run_experiment(cfg, v, w, pred));
    return out;
}

// ---------------------------------------------------------------------------
// sweeps

enum class sweep_axis { memory, p, t, alpha, tau, fixed_ratio, filter_ratio, stream_prefix };

constexpr std::string_view to_string(sweep_axis a) noexcept {
    switch (a) {
        case sweep_axis::memory: return "memory";
        case sweep_axis::p: return "p";
        case sweep_axis::t: return "t";
        case sweep_axis::alpha: return "alpha";
        case sweep_axis::tau: return "tau";
        case sweep_axis::fixed_ratio: return "fixed_ratio";
        case sweep_axis::filter_ratio: return "filter_ratio";
        case sweep_axis::stream_prefix: return "stream_prefix";
    }
    return "?";
}

inline std::optional<sweep_axis> parse_axis(std::string_view name) {
    for (auto a : {sweep_axis::memory, sweep_axis::p, sweep_axis::t, sweep_axis::alpha, sweep_axis::tau,
                   sweep_axis::fixed_ratio, sweep_axis::filter_ratio, sweep_axis::stream_prefix})
        if (to_string(a) == name) return a;
    return std::nullopt;
}

namespace detail {

inline double parse_double(std::string_view key, std::string_view text) {
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw config_error(std::string(key) + ": expected a number, got '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v))
        throw config_error(std::string(key) + ": expected a number, got '" + s + "'");
    return v;
}

inline std::uint64_t parse_uint(std::string_view key, std::string_view text) {
    std::string s(text);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw config_error(std::string(key) + ": expected a non-negative integer, got '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw config_error(std::string(key) + ": integer out of range '" + s + "'");
    }
}

inline std::uint64_t tau_to_inverse(double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw config_error("tau: must lie in (0, 1]");
    const double inv = 1.0 / tau;
    const double rounded = std::round(inv);
    if (std::abs(inv - rounded) > 1e-9 * inv) throw config_error("tau: 1/tau must be an integer");
    return static_cast<std::uint64_t>(rounded);
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace detail

inline experiment_config apply_axis(experiment_config cfg, sweep_axis axis, std::string_view value) {
    const std::string_view key = to_string(axis);
    switch (axis) {
        case sweep_axis::memory: cfg.memory_bits = detail::parse_uint(key, value); break;
        case sweep_axis::p: cfg.p = detail::parse_double(key, value); break;
        case sweep_axis::t: cfg.t = detail::parse_uint(key, value); break;
        case sweep_axis::alpha:
            if (cfg.trace.kind != trace_spec::source::zipf) throw config_error("alpha: sweep needs a zipf trace");
            cfg.trace.alpha = detail::parse_double(key, value);
            break;
        case sweep_axis::tau: cfg.tau_inv = detail::tau_to_inverse(detail::parse_double(key, value)); break;
        case sweep_axis::fixed_ratio: cfg.fixed_ratio = detail::parse_double(key, value); break;
        case sweep_axis::filter_ratio: cfg.filter_ratio = detail::parse_double(key, value); break;
        case sweep_axis::stream_prefix:
            if (detail::parse_uint(key, value) == 0) throw config_error("stream_prefix: must be positive");
            break;
    }
    return cfg;
}

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// One run per (value, variant, repetition). Values that leave the trace
/// untouched share a single workload and predictor.
inline std::vector<metrics_report> run_sweep(const experiment_config& base, sweep_axis axis,
                                             const std::vector<std::string>& values) {
    if (values.empty()) throw config_error("values: at least one axis value required");
    std::vector<experiment_config> configs;
    for (const auto& v : values) {
        configs.push_back(apply_axis(base, axis, v));
        validate(configs.back());
    }

    const bool shared_trace = axis != sweep_axis::alpha;
    std::optional<workload> base_workload;
    if (shared_trace) base_workload = make_workload(base.trace, base.seed);

    struct job {
        std::size_t value_index;
        variant kind;
    };
    std::vector<job> jobs;
    std::vector<workload> workloads(values.size());
    std::vector<predictor_ptr> predictors(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& cfg = configs[i];
        if (axis == sweep_axis::alpha)
            workloads[i] = make_workload(cfg.trace, cfg.seed);
        else if (axis == sweep_axis::stream_prefix)
            workloads[i] = truncated(*base_workload, detail::parse_uint("stream_prefix", values[i]));
        const workload& w = workloads[i].stream.empty() ? *base_workload : workloads[i];
        predictors[i] = make_predictor(cfg, w);
        for (std::size_t r = 0; r < cfg.repetitions; ++r)
            for (variant v : cfg.variants) jobs.push_back({i, v});
    }

    std::vector<metrics_report> out(jobs.size());
    parallel_for(jobs.size(), base.threads, [&](std::size_t j) {
        const std::size_t i = jobs[j].value_index;
        const workload& w = workloads[i].stream.empty() ? *base_workload : workloads[i];
        out[j] = run_experiment(configs[i], jobs[j].kind, w, predictors[i]);
        out[j].axis = std::string(to_string(axis));
        out[j].axis_value = values[i];
    });
    return out;
}

// ---------------------------------------------------------------------------
// CSV and config text

inline constexpr std::string_view csv_header =
    "variant,axis,axis_value,memory_bits,k,k_hh,filter_bits,t,tau_inv,p,alpha,window,rmse,precision_topk,"
    "recall_hh,max_abs_error,updates_per_sec,filter_ops,seed";

inline std::string csv_row(const metrics_report& r) {
    using detail::format_double;
    std::ostringstream os;
    os << to_string(r.kind) << ',' << r.axis << ',' << r.axis_value << ',' << r.memory_bits << ','
       << r.sketch.k << ',' << r.sketch.k_hh << ',' << r.sketch.filter_bits << ',' << r.sketch.t << ','
       << r.sketch.tau_inv << ',' << format_double(r.p) << ',' << (r.alpha ? format_double(*r.alpha) : "")
       << ',' << r.window << ',' << format_double(r.rmse) << ',' << format_double(r.precision_topk) << ','
       << format_double(r.recall_hh) << ',' << r.max_abs_error << ',' << format_double(r.updates_per_sec)
       << ',' << r.filter_ops << ',' << r.seed;
    return os.str();
}

inline void write_csv(std::ostream& os, const std::vector<metrics_report>& reports) {
    os << csv_header << '\n';
    for (const auto& r : reports) os << csv_row(r) << '\n';
}

/// Apply one `key = value` setting; unknown keys are rejected by name.
inline void set_config_value(experiment_config& cfg, std::string_view key, std::string_view value) {
    using detail::parse_double;
    using detail::parse_uint;
    const std::string v(value);
    if (key == "variants") {
        cfg.variants.clear();
        std::stringstream ss(v);
        std::string name;
        while (std::getline(ss, name, ',')) {
            auto parsed = parse_variant(name);
            if (!parsed) throw config_error("variants: unknown variant '" + name + "'");
            cfg.variants.push_back(*parsed);
        }
    } else if (key == "memory_bits") cfg.memory_bits = parse_uint(key, v);
    else if (key == "t") cfg.t = parse_uint(key, v);
    else if (key == "tau_inv") cfg.tau_inv = parse_uint(key, v);
    else if (key == "tau") cfg.tau_inv = detail::tau_to_inverse(parse_double(key, v));
    else if (key == "filter_ratio") cfg.filter_ratio = parse_double(key, v);
    else if (key == "fixed_ratio") cfg.fixed_ratio = parse_double(key, v);
    else if (key == "theta_factor") cfg.theta_factor = parse_double(key, v);
    else if (key == "top_k") cfg.top_k = parse_uint(key, v);
    else if (key == "window") cfg.window = parse_uint(key, v);
    else if (key == "nu") cfg.nu = parse_double(key, v);
    else if (key == "repetitions") cfg.repetitions = parse_uint(key, v);
    else if (key == "seed") cfg.seed = parse_uint(key, v);
    else if (key == "trace") {
        cfg.trace.kind = trace_spec::source::file;
        cfg.trace.path = v;
    } else if (key == "zipf_alpha") {
        cfg.trace.kind = trace_spec::source::zipf;
        cfg.trace.alpha = parse_double(key, v);
    } else if (key == "zipf_n") cfg.trace.universe = parse_uint(key, v);
    else if (key == "zipf_len") cfg.trace.length = parse_uint(key, v);
    else if (key == "predictor") {
        auto k = parse_predictor_kind(v);
        if (!k) throw config_error("predictor: unknown kind '" + v + "'");
        cfg.predictor = *k;
    } else if (key == "p") cfg.p = parse_double(key, v);
    else if (key == "noise") cfg.noise = parse_double(key, v);
    else if (key == "promote_prob") cfg.promote_prob = parse_double(key, v);
    else if (key == "sim_t") cfg.sim_t = parse_uint(key, v);
    else if (key == "pred_table") cfg.pred_table = v;
    else if (key == "pred_default") cfg.pred_default = parse_double(key, v);
    else if (key == "filter_hashes") cfg.filter_hashes = static_cast<unsigned>(parse_uint(key, v));
    else if (key == "cell_width") cfg.cell_width = static_cast<unsigned>(parse_uint(key, v));
    else if (key == "cbf_mode") {
        if (v == "standard") cfg.cbf_mode = cbf_update::standard;
        else if (v == "conservative") cfg.cbf_mode = cbf_update::conservative;
        else throw config_error("cbf_mode: expected standard or conservative");
    } else if (key == "rmse_sample") cfg.rmse_sample = parse_uint(key, v);
    else if (key == "threads") cfg.threads = parse_uint(key, v);
    else throw config_error(std::string(key) + ": unknown configuration key");
}

inline experiment_config parse_config(std::istream& in, experiment_config cfg = {}) {
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) return std::string_view{};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = line;
        if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
        set_config_value(cfg, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    }
    return cfg;
}

inline experiment_config load_config(const std::string& path, experiment_config cfg = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    return parse_config(in, std::move(cfg));
}

/// Fully resolved configuration in the config-file format.
inline std::string to_config_text(const experiment_config& cfg) {
    using detail::format_double;
    std::ostringstream os;
    os << "variants = ";
    for (std::size_t i = 0; i < cfg.variants.size(); ++i) os << (i ? "," : "") << to_string(cfg.variants[i]);
    os << '\n';
    if (cfg.trace.kind == trace_spec::source::file) {
        os << "trace = " << cfg.trace.path << '\n';
    } else {
        os << "zipf_alpha = " << format_double(cfg.trace.alpha) << '\n'
           << "zipf_n = " << cfg.trace.universe << '\n'
           << "zipf_len = " << cfg.trace.length << '\n';
    }
    os << "memory_bits = " << cfg.memory_bits << '\n'
       << "t = " << cfg.t << '\n'
       << "tau_inv = " << cfg.tau_inv << '\n'
       << "filter_ratio = " << format_double(cfg.filter_ratio) << '\n'
       << "fixed_ratio = " << format_double(cfg.fixed_ratio) << '\n'
       << "theta_factor = " << format_double(cfg.theta_factor) << '\n'
       << "top_k = " << cfg.top_k << '\n'
       << "window = " << cfg.window << '\n'
       << "nu = " << format_double(cfg.nu) << '\n'
       << "repetitions = " << cfg.repetitions << '\n'
       << "seed = " << cfg.seed << '\n'
       << "predictor = " << to_string(cfg.predictor) << '\n'
       << "p = " << format_double(cfg.p) << '\n'
       << "noise = " << format_double(cfg.noise) << '\n'
       << "promote_prob = " << format_double(cfg.promote_prob) << '\n'
       << "sim_t = " << cfg.sim_t << '\n';
    if (!cfg.pred_table.empty()) os << "pred_table = " << cfg.pred_table << '\n';
    os << "pred_default = " << format_double(cfg.pred_default) << '\n'
       << "filter_hashes = " << cfg.filter_hashes << '\n'
       << "cell_width = " << cfg.cell_width << '\n'
       << "cbf_mode = " << (cfg.cbf_mode == cbf_update::standard ? "standard" : "conservative") << '\n'
       << "rmse_sample = " << cfg.rmse_sample << '\n'
       << "threads = " << cfg.threads << '\n';
    return os.str();
}

}  // namespace lss
