// lss: generate traces, run and sweep sketch experiments, run the selftest.
//
// Exit codes: 0 ok, 2 usage or configuration error, 3 selftest violation,
// 4 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lss/lss.hpp"
#include "lss/selftest.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_violation = 3;
constexpr int exit_io = 4;

/// Flag name -> configuration key. Flags override the config file.
const std::vector<std::pair<std::string, std::string>> config_flags = {
    {"--variant", "variants"},          {"--memory-bits", "memory_bits"}, {"--trace", "trace"},
    {"--zipf-alpha", "zipf_alpha"},     {"--zipf-n", "zipf_n"},           {"--zipf-len", "zipf_len"},
    {"--pred", "predictor"},            {"--pred-table", "pred_table"},   {"--pred-default", "pred_default"},
    {"--p", "p"},                       {"--noise", "noise"},             {"--promote-prob", "promote_prob"},
    {"--sim-t", "sim_t"},               {"--t", "t"},                     {"--tau", "tau"},
    {"--tau-inv", "tau_inv"},           {"--filter-ratio", "filter_ratio"}, {"--fixed-ratio", "fixed_ratio"},
    {"--theta-factor", "theta_factor"}, {"--top-k", "top_k"},             {"--window", "window"},
    {"--nu", "nu"},                     {"--repetitions", "repetitions"}, {"--seed", "seed"},
    {"--filter-hashes", "filter_hashes"}, {"--cell-width", "cell_width"}, {"--cbf-mode", "cbf_mode"},
    {"--rmse-sample", "rmse_sample"},   {"--threads", "threads"},
};

struct experiment_flags {
    std::string config_path;
    std::map<std::string, std::string> values;

    void attach(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "key = value configuration file");
        for (const auto& [flag, key] : config_flags) cmd.add_option(flag, values[key], "sets '" + key + "'");
    }

    lss::experiment_config resolve(const CLI::App& cmd) const {
        lss::experiment_config cfg;
        if (!config_path.empty()) cfg = lss::load_config(config_path);
        for (const auto& [flag, key] : config_flags)
            if (cmd.count(flag) > 0) lss::set_config_value(cfg, key, values.at(key));
        lss::validate(cfg);
        return cfg;
    }
};

void print_effective(const lss::experiment_config& cfg) {
    std::istringstream lines(lss::to_config_text(cfg));
    std::cerr << "# effective configuration\n";
    for (std::string line; std::getline(lines, line);) std::cerr << "#   " << line << '\n';
}

/// Writes to `path`, or stdout when empty.
template <class Fn>
void with_output(const std::string& path, Fn fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw lss::trace_error("cannot open '" + path + "' for writing");
    fn(out);
    if (!out) throw lss::trace_error("write failure on '" + path + "'");
}

void print_summary(std::ostream& os, const std::vector<lss::metrics_report>& reports) {
    os << std::left << std::setw(12) << "axis_value" << std::setw(10) << "variant" << std::right << std::setw(14)
       << "rmse" << std::setw(16) << "precision_topk" << std::setw(12) << "recall_hh" << '\n';
    for (const auto& r : reports) {
        os << std::left << std::setw(12) << r.axis_value << std::setw(10) << lss::to_string(r.kind) << std::right
           << std::fixed << std::setprecision(4) << std::setw(14) << r.rmse << std::setw(16) << r.precision_topk
           << std::setw(12) << r.recall_hh << '\n';
        os.unsetf(std::ios::floatfield);
    }
}

int cmd_gen(double alpha, std::uint64_t n, std::uint64_t len, std::uint64_t seed, const std::string& out) {
    std::cerr << "# gen N=" << len << " n=" << n << " alpha=" << lss::detail::format_double(alpha)
              << " seed=" << seed << '\n';
    const auto stream = lss::gen_zipf(alpha, n, len, lss::derive_seed(seed, "trace"));
    lss::write_trace(out, stream);
    return exit_ok;
}

int cmd_run(const lss::experiment_config& cfg, const std::string& out) {
    print_effective(cfg);
    const auto reports = lss::run_experiment(cfg);
    with_output(out, [&](std::ostream& os) { lss::write_csv(os, reports); });
    return exit_ok;
}

int cmd_sweep(const lss::experiment_config& cfg, const std::string& axis_name, const std::vector<std::string>& values,
              const std::string& out) {
    const auto axis = lss::parse_axis(axis_name);
    if (!axis) throw CLI::ValidationError("--axis", "unknown sweep axis '" + axis_name + "'");
    print_effective(cfg);
    std::cerr << "# sweep axis=" << axis_name << " values=" << values.size() << '\n';
    const auto reports = lss::run_sweep(cfg, *axis, values);
    with_output(out, [&](std::ostream& os) { lss::write_csv(os, reports); });
    print_summary(std::cerr, reports);
    return exit_ok;
}

int cmd_selftest(const lss::selftest::options& opt, const std::vector<std::string>& only) {
    std::cerr << "# selftest seed=" << opt.seed << (opt.skip_correction ? " fault=skip-correction" : "") << '\n';
    bool all = true;
    for (const auto& r : lss::selftest::run(opt, only)) {
        lss::selftest::print(std::cout, r, false);
        std::cerr << "# [" << r.id << "] " << lss::detail::format_double(r.seconds) << " s\n";
        all = all && r.passed;
    }
    std::cout << (all ? "selftest passed" : "selftest FAILED") << '\n';
    return all ? exit_ok : exit_violation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learned Space Saving sketches: traces, experiments, sweeps, selftest"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "write a Zipf trace, one token per line");
    double alpha = 1.3;
    std::uint64_t n = 0, len = 0, gen_seed = 1;
    std::string gen_out;
    gen->add_option("--alpha", alpha, "Zipf exponent")->required();
    gen->add_option("--n", n, "universe size")->required();
    gen->add_option("--len", len, "number of arrivals")->required();
    gen->add_option("--seed", gen_seed, "seed");
    gen->add_option("-o,--output", gen_out, "trace file")->required();

    auto* run = app.add_subcommand("run", "run every configured variant once per repetition; CSV out");
    experiment_flags run_flags;
    run_flags.attach(*run);
    std::string run_out;
    run->add_option("-o,--output", run_out, "CSV file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "vary one parameter; CSV out, summary on stderr");
    experiment_flags sweep_flags;
    sweep_flags.attach(*sweep);
    std::string axis, sweep_out;
    std::vector<std::string> values;
    sweep->add_option("--axis", axis, "memory|p|t|alpha|tau|fixed_ratio|filter_ratio|stream_prefix")->required();
    sweep->add_option("--values", values, "comma-separated axis values")->required()->delimiter(',');
    sweep->add_option("-o,--output", sweep_out, "CSV file (default stdout)");

    auto* selftest = app.add_subcommand("selftest", "check every error bound and trend claim");
    lss::selftest::options st;
    std::string fault;
    std::vector<std::string> only;
    selftest->add_option("--seed", st.seed, "seed");
    selftest->add_option("--inject-fault", fault, "negative control")->check(CLI::IsMember({"skip-correction"}));
    selftest->add_option("--only", only, "check ids to run, e.g. 1,3,10a")
        ->delimiter(',')
        ->check(CLI::IsMember(lss::selftest::check_ids()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*gen) return cmd_gen(alpha, n, len, gen_seed, gen_out);
        if (*run) return cmd_run(run_flags.resolve(*run), run_out);
        if (*sweep) return cmd_sweep(sweep_flags.resolve(*sweep), axis, values, sweep_out);
        st.skip_correction = fault == "skip-correction";
        return cmd_selftest(st, only);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const lss::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
