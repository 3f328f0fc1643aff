#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hhlsim/circuit.hpp"
#include "hhlsim/metrics.hpp"

namespace hhlsim {

/// Dense mixed-radix state vector. Amplitude index = sum_w digit(w) * stride(w)
/// with wire 0 the least significant digit. Gates act on the {0,1} subspace of
/// the wires they touch and are an exact identity on any basis component where
/// a touched wire sits at level 2.
struct StateVector {
    std::vector<int> radices;
    std::vector<std::int64_t> strides;
    std::vector<cx> amps;

    /// All wires at level 0.
    static StateVector zero_state(const Circuit& c);
    /// One basis state; levels[w] must be below wire w's level count.
    static StateVector init_state(const Circuit& c, const std::vector<int>& levels);

    std::int64_t dim() const { return static_cast<std::int64_t>(amps.size()); }
    int digit(std::int64_t index, int wire) const {
        return static_cast<int>(index / strides[wire] % radices[wire]);
    }
    double norm() const;
    /// Probability mass of `wire` sitting at `level`.
    double level_mass(int wire, int level) const;
};

/// Deterministic per-shot randomness. Shot streams derive from the master seed
/// and shot index alone, so results are independent of thread scheduling.
class ShotRng {
public:
    explicit ShotRng(std::uint64_t seed) : gen_(seed) {}
    static std::uint64_t derive(std::uint64_t master_seed, std::uint64_t shot_index);

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

struct NoiseConfig {
    /// Per gate application and per touched wire: with probability p_depol,
    /// apply X, Z, or XZ (equal thirds) to that wire's qubit subspace.
    double p_depol = 0.0;
    /// Independent classical flip of each recorded measurement bit.
    double p_readout = 0.0;

    bool enabled() const { return p_depol > 0.0 || p_readout > 0.0; }
};

/// Applies one gate operation in place. Errors on Measure/Reset (Barrier is a
/// no-op).
void apply_gate(StateVector& sv, const Operation& op);

/// Binary measurement: outcome 0 = level 0, outcome 1 = levels {1,2} together
/// (leakage is read as 1). Collapses and renormalizes; u in [0,1) drives the
/// outcome draw.
int measure_wire(StateVector& sv, int wire, double u);

/// Measurement without a record, then relabel level 1 -> 0. Leakage survives
/// reset: a wire at level 2 stays there.
void reset_wire(StateVector& sv, int wire, double u);

/// Runs the circuit once from the given initial levels; returns the readout
/// string (registers in declaration order, unwritten bits read '0').
std::string run_shot(const Circuit& c, const std::vector<int>& initial_levels,
                     std::uint64_t shot_seed, const NoiseConfig& noise = {});

/// Independent shots with per-shot seeds derive(master_seed, i). Parallelized
/// over shots; the histogram is identical to run_shots_serial by construction.
CountsHistogram run_shots(const Circuit& c, const std::vector<int>& initial_levels,
                          std::uint64_t shots, std::uint64_t master_seed,
                          const NoiseConfig& noise = {});

/// Serial reference for run_shots.
CountsHistogram run_shots_serial(const Circuit& c, const std::vector<int>& initial_levels,
                                 std::uint64_t shots, std::uint64_t master_seed,
                                 const NoiseConfig& noise = {});

/// Exact readout distribution by branching on every measurement and reset.
/// Noise-free by construction. Branches below 1e-15 probability are dropped;
/// errors if the number of leaves would exceed max_leaves.
OutcomeDistribution exact_distribution(const Circuit& c,
                                       const std::vector<int>& initial_levels,
                                       std::uint64_t max_leaves = 1u << 20);

}  // namespace hhlsim
