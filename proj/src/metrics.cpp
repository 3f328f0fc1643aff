#include "hhlsim/metrics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <set>
#include <stdexcept>

namespace hhlsim {

void CountsHistogram::add(const std::string& readout, std::uint64_t n) {
    counts[readout] += n;
    total += n;
}

void CountsHistogram::merge(const CountsHistogram& other) {
    for (const auto& [k, v] : other.counts) counts[k] += v;
    total += other.total;
}

OutcomeDistribution CountsHistogram::to_distribution() const {
    if (total == 0) throw std::invalid_argument("empty histogram has no distribution");
    OutcomeDistribution d;
    for (const auto& [k, v] : counts)
        d[k] = static_cast<double>(v) / static_cast<double>(total);
    return d;
}

std::optional<double> solution_ratio(const OutcomeDistribution& d) {
    double p01 = 0.0, p11 = 0.0;
    for (const auto& [k, p] : d) {
        if (k.size() != 2)
            throw std::invalid_argument(
                fmt::format("solution_ratio needs two-character keys, got '{}'", k));
        if (k == "01") p01 = p;
        if (k == "11") p11 = p;
    }
    if (p11 <= 0.0) return std::nullopt;
    return p01 / p11;
}

double variational_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
    constexpr double kNormTol = 1e-6;
    double sp = 0.0, sq = 0.0;
    for (const auto& [k, v] : p) sp += v;
    for (const auto& [k, v] : q) sq += v;
    if (std::abs(sp - 1.0) > kNormTol || std::abs(sq - 1.0) > kNormTol)
        throw std::invalid_argument(
            fmt::format("distributions must be normalized (sums {} and {})", sp, sq));
    std::set<std::string> keys;
    for (const auto& [k, v] : p) keys.insert(k);
    for (const auto& [k, v] : q) keys.insert(k);
    double acc = 0.0;
    for (const std::string& k : keys) {
        const auto ip = p.find(k);
        const auto iq = q.find(k);
        acc += std::abs((ip == p.end() ? 0.0 : ip->second) - (iq == q.end() ? 0.0 : iq->second));
    }
    return 0.5 * acc;
}

OutcomeDistribution project_marginal(const OutcomeDistribution& d,
                                     const std::vector<std::size_t>& positions) {
    OutcomeDistribution out;
    for (const auto& [k, p] : d) {
        std::string key;
        key.reserve(positions.size());
        for (std::size_t pos : positions) {
            if (pos >= k.size())
                throw std::invalid_argument(
                    fmt::format("marginal position {} out of range for '{}'", pos, k));
            key.push_back(k[pos]);
        }
        out[key] += p;
    }
    return out;
}

}  // namespace hhlsim
