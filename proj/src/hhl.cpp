#include "hhlsim/hhl.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hhlsim {

namespace {

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

// Right-hand-side preparation from |0>. Real vectors take one Ry (a literal X
// for (0, 1)); a complex phase would need a phase gate the gate set lacks.
std::vector<Operation> prep_ops(const std::array<cx, 2>& b, int b_wire) {
    constexpr double tol = 1e-12;
    if (std::abs(b[0].imag()) > tol || std::abs(b[1].imag()) > tol)
        throw std::invalid_argument("complex right-hand side is not supported by the gate set");
    const double n = std::sqrt(std::norm(b[0]) + std::norm(b[1]));
    if (n <= tol) throw std::invalid_argument("right-hand side must be nonzero");
    const double b0 = b[0].real() / n;
    const double b1 = b[1].real() / n;
    const double theta = 2.0 * std::atan2(b1, b0);
    if (std::abs(theta) <= tol) return {};
    if (std::abs(theta - kPi) <= tol) return {Operation::x(b_wire)};
    return {Operation::ry(b_wire, theta)};
}

std::vector<Operation> inverted_segment(std::vector<Operation> ops) {
    std::reverse(ops.begin(), ops.end());
    for (Operation& op : ops) op = inverted_op(op);
    return ops;
}

}  // namespace

HhlSegments build_segments(const HhlParams& p, const WirePlan& w) {
    if (p.n_clock < 1 || p.n_clock > 8)
        throw std::invalid_argument(fmt::format("n_clock must be in [1, 8], got {}", p.n_clock));
    if (!(p.t > 0.0) || !std::isfinite(p.t))
        throw std::invalid_argument("evolution time t must be positive");
    if (!(p.c_const > 0.0) || !std::isfinite(p.c_const))
        throw std::invalid_argument("rotation constant must be positive");
    if (static_cast<int>(w.clocks.size()) != p.n_clock)
        throw std::invalid_argument("wire plan does not match n_clock");

    const EigenDecomposition dec = eigendecompose(p.system);
    const long two_n = 1L << p.n_clock;

    // The estimates lambda_tilde = lambda * t * 2^n / (2 pi) must be exact
    // integers for the phase estimate to be a basis state, and one-hot so the
    // per-bit rotation network inverts each eigenvalue exactly.
    HhlSegments seg;
    std::vector<long> rounded;
    for (double lam : dec.values) {
        const double lt = lam * p.t * static_cast<double>(two_n) / (2.0 * kPi);
        const double r = std::round(lt);
        if (std::abs(lt - r) > 1e-9)
            throw std::invalid_argument(
                fmt::format("eigenvalue estimate {} is not an integer", lt));
        if (r < 1.0 || r > static_cast<double>(two_n - 1))
            throw std::invalid_argument(
                fmt::format("eigenvalue estimate {} outside [1, {}]", lt, two_n - 1));
        seg.lambda_tilde.push_back(r);
        rounded.push_back(static_cast<long>(r));
    }
    for (long v : rounded) {
        if (!is_power_of_two(v))
            throw std::invalid_argument(fmt::format(
                "eigenvalue estimate {} is not a power of two; the rotation network needs "
                "one-hot clock readouts", v));
        if (p.c_const > static_cast<double>(v) * (1.0 + 1e-12))
            throw std::invalid_argument(
                fmt::format("rotation constant {} exceeds eigenvalue estimate {}", p.c_const, v));
    }
    if (rounded[0] == rounded[1])
        throw std::invalid_argument("eigenvalue estimates must be distinct");

    seg.prep = prep_ops(p.system.b, w.b);

    // Phase estimation: clocks[j] controls U^(2^j).
    for (int j = 0; j < p.n_clock; ++j) seg.qpe.push_back(Operation::h(w.clocks[j]));
    for (int j = 0; j < p.n_clock; ++j) {
        const Mat2 u = evolution_unitary(dec, p.t, static_cast<double>(1L << j));
        seg.qpe.push_back(Operation::cu(w.clocks[j], w.b, u));
    }

    // Inverse QFT without terminal swaps: the estimate reads out bit-reversed,
    // value 2^k on wire clocks[n-1-k].
    std::vector<Operation> qft;
    for (int j = 0; j < p.n_clock; ++j) {
        qft.push_back(Operation::h(w.clocks[j]));
        for (int k = j + 1; k < p.n_clock; ++k)
            qft.push_back(Operation::cphase(w.clocks[k], w.clocks[j], kPi / double(1L << (k - j))));
    }
    seg.iqft = inverted_segment(qft);

    // One controlled Ry per eigenvalue estimate, attached to the clock wire
    // that reads 1 exactly for that estimate.
    for (long v : rounded) {
        int k = 0;
        while ((1L << k) != v) ++k;
        const int wire = w.clocks[static_cast<std::size_t>(p.n_clock - 1 - k)];
        const double theta = 2.0 * std::asin(std::min(1.0, p.c_const / static_cast<double>(v)));
        const double ch = std::cos(theta / 2.0);
        const double sh = std::sin(theta / 2.0);
        seg.rotation.push_back(
            Operation::cu(wire, w.ancilla, Mat2{{cx{ch}, cx{-sh}, cx{sh}, cx{ch}}}));
    }

    std::vector<Operation> forward = seg.qpe;
    forward.insert(forward.end(), seg.iqft.begin(), seg.iqft.end());
    seg.uncompute = inverted_segment(std::move(forward));
    return seg;
}

Circuit build_hhl(const HhlParams& p) {
    Circuit c;
    WirePlan plan;
    plan.ancilla = c.add_wire(3, "ancilla");
    for (int j = 0; j < p.n_clock; ++j)
        plan.clocks.push_back(c.add_wire(3, fmt::format("clock{}", j)));
    plan.b = c.add_wire(3, "b");

    const HhlSegments seg = build_segments(p, plan);
    if (p.include_measurements) c.add_register("c_out", 2);
    c.push_all(seg.prep);
    c.push_all(seg.qpe);
    c.push_all(seg.iqft);
    c.push_all(seg.rotation);
    c.push_all(seg.uncompute);
    if (p.include_measurements) {
        c.push(Operation::measure(plan.b, "c_out", 0));
        c.push(Operation::measure(plan.ancilla, "c_out", 1));
    }
    return c;
}

}  // namespace hhlsim
