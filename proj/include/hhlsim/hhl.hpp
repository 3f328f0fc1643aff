#pragma once

#include <vector>

#include "hhlsim/circuit.hpp"
#include "hhlsim/linear_system.hpp"

namespace hhlsim {

struct HhlParams {
    LinearSystem system;
    int n_clock = 2;
    double t = kPi;        // evolution time; lambda_tilde_i = lambda_i * t * 2^n / (2 pi)
    double c_const = 1.0;  // rotation constant C in theta = 2 asin(C / lambda_tilde)
    bool include_measurements = true;
};

/// Wire ids used by the builders. clocks[j] controls U^(2^j); after the
/// inverse QFT the estimate of lambda_tilde reads out bit-reversed, so the
/// value 2^k sits on wire clocks[n-1-k].
struct WirePlan {
    int ancilla = 0;
    std::vector<int> clocks;
    int b = 0;
};

/// The gate segments shared by the plain and hardened constructions, in
/// application order: prep, qpe, iqft, rotation, uncompute.
struct HhlSegments {
    std::vector<Operation> prep;
    std::vector<Operation> qpe;
    std::vector<Operation> iqft;
    std::vector<Operation> rotation;
    std::vector<Operation> uncompute;
    std::vector<double> lambda_tilde;  // ascending, paired with the eigenvalues
};

/// Builds the segments for the given parameters and wiring. Validates that
/// every lambda_tilde is an integer in [1, 2^n - 1] within 1e-9, that the set
/// is one-hot (each a power of two, all distinct) so the per-bit rotation
/// network is exact, and that c_const <= min lambda_tilde. The right-hand side
/// must be real; b = (0, 1) prepares with a literal X, other real vectors with
/// one Ry.
HhlSegments build_segments(const HhlParams& p, const WirePlan& w);

/// Plain circuit. Wires: ancilla, clock0..clock{n-1}, b, all three-level.
/// Register c_out, bit 0 = b readout, bit 1 = ancilla readout.
Circuit build_hhl(const HhlParams& p);

}  // namespace hhlsim
