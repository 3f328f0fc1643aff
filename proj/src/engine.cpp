#include "hhlsim/engine.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hhlsim {

namespace {

constexpr double kBranchCutoff = 1e-15;

Mat2 mat2_for(const Operation& op) {
    switch (op.kind) {
        case OpKind::GateX:
            return Mat2{{cx{0.0}, cx{1.0}, cx{1.0}, cx{0.0}}};
        case OpKind::GateH: {
            const double s = 1.0 / std::sqrt(2.0);
            return Mat2{{cx{s}, cx{s}, cx{s}, cx{-s}}};
        }
        case OpKind::GateRy: {
            const double ch = std::cos(op.angle / 2.0);
            const double sh = std::sin(op.angle / 2.0);
            return Mat2{{cx{ch}, cx{-sh}, cx{sh}, cx{ch}}};
        }
        default:
            throw std::invalid_argument(fmt::format("{} is not a one-wire gate", op_name(op.kind)));
    }
}

std::array<cx, 16> mat4_for(const Operation& op) {
    std::array<cx, 16> m{};
    m[0] = m[5] = cx{1.0};  // control-0 block
    switch (op.kind) {
        case OpKind::GateCPhase:
            m[10] = cx{1.0};
            m[15] = std::exp(cx{0.0, op.angle});
            break;
        case OpKind::GateCnot:
            m[11] = m[14] = cx{1.0};
            break;
        case OpKind::GateCU:
            m[10] = op.unitary.a[0];
            m[11] = op.unitary.a[1];
            m[14] = op.unitary.a[2];
            m[15] = op.unitary.a[3];
            break;
        default:
            throw std::invalid_argument(fmt::format("{} is not a two-wire gate", op_name(op.kind)));
    }
    return m;
}

// Mass of the wire's level-0 digit (outcome 0) or of levels 1 and 2 together
// (outcome 1).
double outcome_mass(const StateVector& sv, int wire, int outcome) {
    double m = 0.0;
    for (std::int64_t i = 0; i < sv.dim(); ++i) {
        const int d = sv.digit(i, wire);
        if ((d == 0) == (outcome == 0)) m += std::norm(sv.amps[i]);
    }
    return m;
}

// Zeroes the non-selected digits and renormalizes.
void project_outcome(StateVector& sv, int wire, int outcome, double mass) {
    const double scale = 1.0 / std::sqrt(mass);
    for (std::int64_t i = 0; i < sv.dim(); ++i) {
        const int d = sv.digit(i, wire);
        if ((d == 0) == (outcome == 0))
            sv.amps[i] *= scale;
        else
            sv.amps[i] = cx{0.0};
    }
}

// Relabels level 1 as level 0. Level 2 is untouched: reset does not clear
// leakage.
void fold_level1(StateVector& sv, int wire) {
    const std::int64_t stride = sv.strides[wire];
    for (std::int64_t i = 0; i < sv.dim(); ++i) {
        if (sv.digit(i, wire) == 1) {
            sv.amps[i - stride] += sv.amps[i];
            sv.amps[i] = cx{0.0};
        }
    }
}

void apply_one_wire(StateVector& sv, int wire, const Mat2& u) {
    const std::int64_t stride = sv.strides[wire];
    for (std::int64_t i = 0; i < sv.dim(); ++i) {
        if (sv.digit(i, wire) != 0) continue;
        const std::int64_t j = i + stride;
        const cx a0 = sv.amps[i];
        const cx a1 = sv.amps[j];
        sv.amps[i] = u.a[0] * a0 + u.a[1] * a1;
        sv.amps[j] = u.a[2] * a0 + u.a[3] * a1;
    }
}

void apply_two_wire(StateVector& sv, int control, int target, const std::array<cx, 16>& m) {
    const std::int64_t sc = sv.strides[control];
    const std::int64_t st = sv.strides[target];
    for (std::int64_t i = 0; i < sv.dim(); ++i) {
        if (sv.digit(i, control) != 0 || sv.digit(i, target) != 0) continue;
        const std::array<std::int64_t, 4> idx{i, i + st, i + sc, i + sc + st};
        std::array<cx, 4> a;
        for (int k = 0; k < 4; ++k) a[k] = sv.amps[idx[k]];
        for (int r = 0; r < 4; ++r) {
            cx acc{0.0};
            for (int k = 0; k < 4; ++k) acc += m[4 * r + k] * a[k];
            sv.amps[idx[r]] = acc;
        }
    }
}

}  // namespace

StateVector StateVector::zero_state(const Circuit& c) {
    return init_state(c, std::vector<int>(c.wires().size(), 0));
}

StateVector StateVector::init_state(const Circuit& c, const std::vector<int>& levels) {
    if (levels.size() != c.wires().size())
        throw std::invalid_argument(fmt::format("init_state needs {} levels, got {}",
                                                c.wires().size(), levels.size()));
    constexpr std::int64_t kMaxDim = std::int64_t{1} << 22;
    if (c.dim() > kMaxDim) throw std::invalid_argument("state dimension too large");
    StateVector sv;
    sv.radices.reserve(levels.size());
    sv.strides.reserve(levels.size());
    std::int64_t stride = 1;
    std::int64_t index = 0;
    for (std::size_t w = 0; w < levels.size(); ++w) {
        const int radix = c.wires()[w].levels;
        if (levels[w] < 0 || levels[w] >= radix)
            throw std::invalid_argument(
                fmt::format("initial level {} out of range for wire {}", levels[w], w));
        sv.radices.push_back(radix);
        sv.strides.push_back(stride);
        index += levels[w] * stride;
        stride *= radix;
    }
    sv.amps.assign(stride, cx{0.0});
    sv.amps[index] = cx{1.0};
    return sv;
}

double StateVector::norm() const {
    double n = 0.0;
    for (const cx& a : amps) n += std::norm(a);
    return std::sqrt(n);
}

double StateVector::level_mass(int wire, int level) const {
    double m = 0.0;
    for (std::int64_t i = 0; i < dim(); ++i) {
        if (digit(i, wire) == level) m += std::norm(amps[i]);
    }
    return m;
}

std::uint64_t ShotRng::derive(std::uint64_t master_seed, std::uint64_t shot_index) {
    // splitmix64 over the pair: well-mixed seeds for adjacent shot indices.
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ull * (shot_index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

void apply_gate(StateVector& sv, const Operation& op) {
    switch (op.kind) {
        case OpKind::GateX:
        case OpKind::GateH:
        case OpKind::GateRy:
            apply_one_wire(sv, op.wires[0], mat2_for(op));
            break;
        case OpKind::GateCPhase:
        case OpKind::GateCnot:
        case OpKind::GateCU:
            apply_two_wire(sv, op.wires[0], op.wires[1], mat4_for(op));
            break;
        case OpKind::Barrier:
            break;
        case OpKind::Measure:
        case OpKind::Reset:
            throw std::invalid_argument(
                fmt::format("apply_gate cannot run {}", op_name(op.kind)));
    }
}

int measure_wire(StateVector& sv, int wire, double u) {
    const double m0 = outcome_mass(sv, wire, 0);
    const double m1 = outcome_mass(sv, wire, 1);
    const double p0 = m0 / (m0 + m1);
    int outcome;
    if (m0 < 1e-30)
        outcome = 1;
    else if (m1 < 1e-30)
        outcome = 0;
    else
        outcome = (u < p0) ? 0 : 1;
    project_outcome(sv, wire, outcome, outcome == 0 ? m0 : m1);
    return outcome;
}

void reset_wire(StateVector& sv, int wire, double u) {
    measure_wire(sv, wire, u);
    fold_level1(sv, wire);
}

namespace {

struct ReadoutRecorder {
    const Circuit& circuit;
    std::string bits;

    explicit ReadoutRecorder(const Circuit& c)
        : circuit(c), bits(static_cast<std::size_t>(c.readout_width()), '0') {}

    void record(const std::string& reg, int bit, int value) {
        bits[static_cast<std::size_t>(circuit.readout_position(reg, bit))] = value ? '1' : '0';
    }
};

void apply_depolarizing(StateVector& sv, const Operation& op, double p_depol, ShotRng& rng) {
    static const Mat2 kX{{cx{0.0}, cx{1.0}, cx{1.0}, cx{0.0}}};
    static const Mat2 kZ{{cx{1.0}, cx{0.0}, cx{0.0}, cx{-1.0}}};
    static const Mat2 kXZ{{cx{0.0}, cx{-1.0}, cx{1.0}, cx{0.0}}};
    for (int w : op.wires) {
        if (rng.uniform() >= p_depol) continue;
        const double pick = rng.uniform() * 3.0;
        apply_one_wire(sv, w, pick < 1.0 ? kX : pick < 2.0 ? kZ : kXZ);
    }
}

}  // namespace

std::string run_shot(const Circuit& c, const std::vector<int>& initial_levels,
                     std::uint64_t shot_seed, const NoiseConfig& noise) {
    StateVector sv = StateVector::init_state(c, initial_levels);
    ReadoutRecorder out(c);
    ShotRng rng(shot_seed);
    for (const Operation& op : c.ops()) {
        switch (op.kind) {
            case OpKind::Measure: {
                int m = measure_wire(sv, op.wires[0], rng.uniform());
                if (noise.p_readout > 0.0 && rng.uniform() < noise.p_readout) m ^= 1;
                out.record(op.reg, op.bit, m);
                break;
            }
            case OpKind::Reset:
                reset_wire(sv, op.wires[0], rng.uniform());
                break;
            case OpKind::Barrier:
                break;
            default:
                apply_gate(sv, op);
                if (noise.p_depol > 0.0) apply_depolarizing(sv, op, noise.p_depol, rng);
                break;
        }
    }
    return out.bits;
}

CountsHistogram run_shots_serial(const Circuit& c, const std::vector<int>& initial_levels,
                                 std::uint64_t shots, std::uint64_t master_seed,
                                 const NoiseConfig& noise) {
    CountsHistogram hist;
    for (std::uint64_t i = 0; i < shots; ++i)
        hist.add(run_shot(c, initial_levels, ShotRng::derive(master_seed, i), noise));
    return hist;
}

CountsHistogram run_shots(const Circuit& c, const std::vector<int>& initial_levels,
                          std::uint64_t shots, std::uint64_t master_seed,
                          const NoiseConfig& noise) {
    CountsHistogram hist;
#pragma omp parallel
    {
        CountsHistogram local;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(shots); ++i) {
            local.add(run_shot(c, initial_levels,
                               ShotRng::derive(master_seed, static_cast<std::uint64_t>(i)), noise));
        }
#pragma omp critical
        hist.merge(local);
    }
    return hist;
}

namespace {

struct BranchWalker {
    const Circuit& circuit;
    std::uint64_t max_leaves;
    std::uint64_t leaves = 0;
    OutcomeDistribution dist;

    void walk(StateVector sv, std::size_t opi, double prob, ReadoutRecorder out) {
        const auto& ops = circuit.ops();
        for (; opi < ops.size(); ++opi) {
            const Operation& op = ops[opi];
            if (op.kind == OpKind::Measure || op.kind == OpKind::Reset) {
                const double m0 = outcome_mass(sv, op.wires[0], 0);
                const double m1 = outcome_mass(sv, op.wires[0], 1);
                const double total = m0 + m1;
                for (int outcome = 0; outcome < 2; ++outcome) {
                    const double mass = outcome == 0 ? m0 : m1;
                    const double branch = prob * (mass / total);
                    if (branch <= kBranchCutoff) continue;
                    StateVector next = sv;
                    project_outcome(next, op.wires[0], outcome, mass);
                    ReadoutRecorder rec = out;
                    if (op.kind == OpKind::Measure)
                        rec.record(op.reg, op.bit, outcome);
                    else
                        fold_level1(next, op.wires[0]);
                    walk(std::move(next), opi + 1, branch, std::move(rec));
                }
                return;
            }
            apply_gate(sv, op);
        }
        if (++leaves > max_leaves)
            throw std::runtime_error("exact_distribution exceeded the branch limit");
        dist[out.bits] += prob;
    }
};

}  // namespace

OutcomeDistribution exact_distribution(const Circuit& c, const std::vector<int>& initial_levels,
                                       std::uint64_t max_leaves) {
    BranchWalker walker{.circuit = c, .max_leaves = max_leaves, .leaves = 0, .dist = {}};
    walker.walk(StateVector::init_state(c, initial_levels), 0, 1.0, ReadoutRecorder(c));
    return walker.dist;
}

}  // namespace hhlsim
