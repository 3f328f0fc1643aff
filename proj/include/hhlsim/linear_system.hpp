#pragma once

#include <array>

#include "hhlsim/circuit.hpp"

namespace hhlsim {

/// 2x2 Hermitian system A x = b, row-major A. Defaults to the reference
/// instance A = [[3/4, 1/4], [1/4, 3/4]], b = (0, 1).
struct LinearSystem {
    std::array<cx, 4> a{cx{0.75}, cx{0.25}, cx{0.25}, cx{0.75}};
    std::array<cx, 2> b{cx{0.0}, cx{1.0}};
};

struct EigenDecomposition {
    std::array<double, 2> values;              // ascending
    std::array<std::array<cx, 2>, 2> vectors;  // vectors[i] pairs with values[i]
};

/// Closed-form eigendecomposition. A must be Hermitian within 1e-10 and
/// nonsingular. Deterministic conventions: eigenvalues ascending; each
/// eigenvector normalized with its first nonvanishing component real positive;
/// for diagonal A the basis vectors are assigned in diagonal order.
EigenDecomposition eigendecompose(const LinearSystem& sys);

/// exp(+i A t power) assembled in the eigenbasis.
Mat2 evolution_unitary(const EigenDecomposition& dec, double t, double power);

/// Classical solution A^{-1} b.
std::array<cx, 2> reference_solution(const LinearSystem& sys);

/// |x0|^2 / |x1|^2 of the classical solution; errors when x1 = 0.
double reference_ratio(const LinearSystem& sys);

}  // namespace hhlsim
