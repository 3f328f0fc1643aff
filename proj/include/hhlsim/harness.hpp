#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "hhlsim/attack.hpp"
#include "hhlsim/defense.hpp"
#include "hhlsim/engine.hpp"
#include "hhlsim/hhl.hpp"
#include "hhlsim/metrics.hpp"

namespace hhlsim {

enum class RunMode { Exact, Sampled };

RunMode parse_run_mode(const std::string& s);  // "exact" | "sampled"
const char* to_string(RunMode m);

inline constexpr std::uint64_t kDefaultSeed = 20250924;

struct ExperimentConfig {
    LinearSystem system;
    int n_clock = 2;
    double t = kPi;
    double c_const = 1.0;
    bool defended = false;
    AttackSpec attacks;
    RunMode mode = RunMode::Sampled;
    std::uint64_t shots = 1000;
    std::uint64_t seed = kDefaultSeed;
    NoiseConfig noise;
    std::string out;  // output file stem; empty writes nothing
    std::string cache_dir = "baseline_cache";
};

/// Parses flat key=value text (one pair per line, '#' comments). Unknown keys
/// error. Complex entries are "re" or "re,im"; attacks are a comma-separated
/// "role:kind" list.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Rejects inconsistent configurations (noise in exact mode, zero shots in
/// sampled mode, malformed probabilities, attacks on unknown roles).
void validate_config(const ExperimentConfig& cfg);

struct DefenseSummary {
    std::map<std::string, double> code_probability;  // canonical "aa bbb cc"
    double converged = 0.0;
    double iterating = 0.0;
    double detected = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    OutcomeDistribution distribution;       // full readout strings
    CountsHistogram counts;                 // sampled mode only
    OutcomeDistribution solution_marginal;  // (b, ancilla) readout
    std::optional<double> ratio;            // P("01")/P("11"), unset when undefined
    OutcomeDistribution baseline_marginal;  // no-attack undefended reference
    double distance = 0.0;                  // TV(solution_marginal, baseline)
    std::optional<DefenseSummary> defense;  // defended runs only
    double wall_seconds = 0.0;              // reported on stdout, never serialized
};

/// Builds the configured circuit, applies attacks, runs it in the requested
/// mode, and attaches solution metrics against the cached no-attack baseline.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Deterministic serialization: identical config and seed give identical
/// bytes, so wall-clock time is deliberately absent.
std::string result_to_json(const ExperimentResult& r);
std::string distribution_to_csv(const OutcomeDistribution& d);

/// Writes <out>.json and <out>.csv next to the configured stem.
void write_result_files(const ExperimentResult& r);

/// Test hook and negative control: returns the circuit with the first probe
/// CNOT removed, which must break the input-integrity table.
Circuit corrupt_defense_probe(const Circuit& c);

struct SuiteOptions {
    std::filesystem::path out_dir;
    bool corrupt_defense = false;
    std::uint64_t seed = kDefaultSeed;
};

/// Reruns the reference experiments end to end: exact and sampled baselines,
/// the improper-initialization distance table, all 27 detection-table rows,
/// and the noise sweep. Writes report.json plus per-run histograms under
/// out_dir and returns the number of checks outside tolerance (0 = clean).
int reproduce_suite(const SuiteOptions& opt);

}  // namespace hhlsim
