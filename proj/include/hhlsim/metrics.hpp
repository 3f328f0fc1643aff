#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hhlsim {

/// Probability mass by readout string. Keys are fixed-width bit strings in
/// register declaration order, bit 0 of a register first.
using OutcomeDistribution = std::map<std::string, double>;

/// Shot counts by readout string.
struct CountsHistogram {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(const std::string& readout, std::uint64_t n = 1);
    void merge(const CountsHistogram& other);

    /// Empirical distribution; errors when no shots were recorded.
    OutcomeDistribution to_distribution() const;
};

/// P("01") / P("11") over a two-character (b, ancilla) distribution.
/// Returns nullopt when P("11") = 0 (the ratio is undefined, not infinite:
/// zero successful post-selections carry no solution estimate).
std::optional<double> solution_ratio(const OutcomeDistribution& d);

/// Total variation distance, 0.5 * sum_k |p_k - q_k|. Both inputs must be
/// normalized to 1 within 1e-6.
double variational_distance(const OutcomeDistribution& p, const OutcomeDistribution& q);

/// Marginal distribution over the given readout character positions, kept in
/// the order given. Positions must be in range for every key.
OutcomeDistribution project_marginal(const OutcomeDistribution& d,
                                     const std::vector<std::size_t>& positions);

}  // namespace hhlsim
