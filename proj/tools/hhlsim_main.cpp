#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <string>
#include <vector>

#include "hhlsim/harness.hpp"

namespace {

using namespace hhlsim;

struct CliOverrides {
    std::string config_path;
    std::vector<std::string> a{"", "", "", ""};
    std::string b0, b1;
    int n_clock = -1;
    double t = -1.0, c_const = -1.0;
    bool defended = false;
    std::vector<std::string> attacks;
    std::string mode;
    std::int64_t shots = -1, seed = -1;
    double noise_depol = -1.0, noise_readout = -1.0;
    std::string out, cache_dir;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_path, "key=value configuration file");
    cmd->add_option("--a00", o.a[0], "matrix entry, re or re,im");
    cmd->add_option("--a01", o.a[1], "matrix entry");
    cmd->add_option("--a10", o.a[2], "matrix entry");
    cmd->add_option("--a11", o.a[3], "matrix entry");
    cmd->add_option("--b0", o.b0, "right-hand side entry");
    cmd->add_option("--b1", o.b1, "right-hand side entry");
    cmd->add_option("--n-clock", o.n_clock, "clock register width");
    cmd->add_option("--t", o.t, "evolution time");
    cmd->add_option("--c-const", o.c_const, "rotation constant");
    cmd->add_flag("--defended", o.defended, "use the hardened circuit");
    cmd->add_option("--attack", o.attacks, "attack as role:kind (repeatable)");
}

cx parse_cx_flag(const std::string& name, const std::string& v) {
    const auto comma = v.find(',');
    try {
        if (comma == std::string::npos) return cx{std::stod(v), 0.0};
        return cx{std::stod(v.substr(0, comma)), std::stod(v.substr(comma + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument(fmt::format("bad value '{}' for {}", v, name));
    }
}

ExperimentConfig build_config(const CLI::App* cmd, const CliOverrides& o) {
    // dump lacks the run-only options; count() throws on names never added
    const auto given = [cmd](const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    ExperimentConfig cfg;
    if (given("--config")) cfg = load_config_file(o.config_path);
    const char* names[4] = {"--a00", "--a01", "--a10", "--a11"};
    for (int i = 0; i < 4; ++i)
        if (given(names[i])) cfg.system.a[i] = parse_cx_flag(names[i], o.a[i]);
    if (given("--b0")) cfg.system.b[0] = parse_cx_flag("--b0", o.b0);
    if (given("--b1")) cfg.system.b[1] = parse_cx_flag("--b1", o.b1);
    if (given("--n-clock")) cfg.n_clock = o.n_clock;
    if (given("--t")) cfg.t = o.t;
    if (given("--c-const")) cfg.c_const = o.c_const;
    if (given("--defended")) cfg.defended = true;
    if (given("--attack")) {
        cfg.attacks.entries.clear();
        for (const std::string& item : o.attacks) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument(
                    fmt::format("attack '{}' must be role:kind", item));
            cfg.attacks.entries.push_back(
                {item.substr(0, colon), parse_attack_kind(item.substr(colon + 1))});
        }
    }
    if (given("--mode")) cfg.mode = parse_run_mode(o.mode);
    if (given("--shots")) cfg.shots = static_cast<std::uint64_t>(o.shots);
    if (given("--seed")) cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (given("--noise-depol")) cfg.noise.p_depol = o.noise_depol;
    if (given("--noise-readout")) cfg.noise.p_readout = o.noise_readout;
    if (given("--out")) cfg.out = o.out;
    if (given("--cache-dir")) cfg.cache_dir = o.cache_dir;
    return cfg;
}

int cmd_run(const CLI::App* cmd, const CliOverrides& o) {
    const ExperimentConfig cfg = build_config(cmd, o);
    const ExperimentResult r = run_experiment(cfg);

    fmt::print("mode={} defended={} shots={} seed={}\n", to_string(cfg.mode), cfg.defended,
               cfg.mode == RunMode::Sampled ? fmt::format("{}", cfg.shots) : "-", cfg.seed);
    if (!cfg.attacks.empty()) {
        std::string list;
        for (const AttackEntry& e : cfg.attacks.entries)
            list += fmt::format("{}{}:{}", list.empty() ? "" : ",", e.role, to_string(e.kind));
        fmt::print("attacks={}\n", list);
    }
    for (const auto& [k, p] : r.solution_marginal)
        fmt::print("  P(b,ancilla = {}) = {:.6f}\n", k, p);
    if (r.ratio)
        fmt::print("solution ratio P(01)/P(11) = {:.9f} (inverse {:.4f})\n", *r.ratio,
                   *r.ratio > 0 ? 1.0 / *r.ratio : 0.0);
    else
        fmt::print("solution ratio undefined: no mass on ancilla=1\n");
    fmt::print("variational distance to baseline = {:.9f}\n", r.distance);
    if (r.defense) {
        fmt::print("defense verdicts: converged={:.4f} iterating={:.4f} detected={:.4f}\n",
                   r.defense->converged, r.defense->iterating, r.defense->detected);
        for (const auto& [code, p] : r.defense->code_probability)
            fmt::print("  P(code {}) = {:.6f}\n", code, p);
    }
    fmt::print("wall seconds = {:.3f}\n", r.wall_seconds);
    if (!cfg.out.empty()) {
        write_result_files(r);
        fmt::print("wrote {}.json and {}.csv\n", cfg.out, cfg.out);
    }
    return 0;
}

int cmd_dump(const CLI::App* cmd, const CliOverrides& o) {
    const ExperimentConfig cfg = build_config(cmd, o);
    HhlParams params{cfg.system, cfg.n_clock, cfg.t, cfg.c_const, true};
    const Circuit circuit = cfg.defended ? build_secure_hhl(params) : build_hhl(params);
    const PreparedExperiment prep = apply_attacks(circuit, cfg.attacks);
    fmt::print("{}", dump_text(prep.circuit));
    for (std::size_t w = 0; w < prep.initial_levels.size(); ++w) {
        if (prep.initial_levels[w] != 0)
            fmt::print(stderr, "note: wire {} ({}) starts at level {} (state, not an operation)\n",
                       w, prep.circuit.wires()[w].label, prep.initial_levels[w]);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"leakage-aware simulator for the hardened linear-system circuit"};
    app.require_subcommand(1);

    CliOverrides run_o;
    CLI::App* run = app.add_subcommand("run", "run one experiment");
    add_common_options(run, run_o);
    run->add_option("--mode", run_o.mode, "exact or sampled");
    run->add_option("--shots", run_o.shots, "shot count for sampled mode")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--seed", run_o.seed, "master seed")->check(CLI::NonNegativeNumber);
    run->add_option("--noise-depol", run_o.noise_depol, "depolarizing probability per gate wire");
    run->add_option("--noise-readout", run_o.noise_readout, "readout flip probability");
    run->add_option("--out", run_o.out, "output stem for .json/.csv");
    run->add_option("--cache-dir", run_o.cache_dir, "baseline cache directory");

    CliOverrides dump_o;
    CLI::App* dump = app.add_subcommand("dump", "print the circuit as text");
    add_common_options(dump, dump_o);

    SuiteOptions suite;
    std::int64_t suite_seed = -1;
    std::string out_dir;
    CLI::App* rep = app.add_subcommand("reproduce", "rerun the reference experiment suite");
    rep->add_option("--out-dir", out_dir, "directory for report.json and histograms")->required();
    rep->add_flag("--corrupt-defense", suite.corrupt_defense,
                  "negative control: remove a probe gate and expect failures");
    rep->add_option("--seed", suite_seed, "master seed")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(run, run_o);
        if (dump->parsed()) return cmd_dump(dump, dump_o);
        suite.out_dir = out_dir;
        if (suite_seed >= 0) suite.seed = static_cast<std::uint64_t>(suite_seed);
        const int violations = reproduce_suite(suite);
        if (violations > 0) {
            fmt::print(stderr, "{} checks outside tolerance; see {}/report.json\n", violations,
                       suite.out_dir.string());
            return 1;
        }
        fmt::print("all checks within tolerance; report at {}/report.json\n",
                   suite.out_dir.string());
        return 0;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
}
