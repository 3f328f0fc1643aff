#include "hhlsim/linear_system.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace hhlsim {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kSingularTol = 1e-12;

void check_hermitian(const LinearSystem& sys) {
    if (std::abs(sys.a[0].imag()) > kHermTol || std::abs(sys.a[3].imag()) > kHermTol ||
        std::abs(sys.a[1] - std::conj(sys.a[2])) > kHermTol)
        throw std::invalid_argument("matrix is not Hermitian");
}

// Fixed phase convention: first nonvanishing component real positive.
std::array<cx, 2> normalize_vec(cx v0, cx v1) {
    const double n = std::sqrt(std::norm(v0) + std::norm(v1));
    v0 /= n;
    v1 /= n;
    const cx lead = std::abs(v0) > 1e-12 ? v0 : v1;
    const cx phase = std::abs(lead) / lead;
    return {v0 * phase, v1 * phase};
}

}  // namespace

EigenDecomposition eigendecompose(const LinearSystem& sys) {
    check_hermitian(sys);
    const double a = sys.a[0].real();
    const double d = sys.a[3].real();
    const cx b = sys.a[1];
    const double det = a * d - std::norm(b);
    if (std::abs(det) <= kSingularTol) throw std::invalid_argument("matrix is singular");
    const double tr = a + d;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    EigenDecomposition dec;
    dec.values = {0.5 * (tr - disc), 0.5 * (tr + disc)};
    if (std::abs(b) <= kHermTol) {
        // Diagonal matrix: basis vectors, assigned in ascending-value order.
        const bool swap = a > d;
        dec.vectors[0] = swap ? std::array<cx, 2>{cx{0.0}, cx{1.0}}
                              : std::array<cx, 2>{cx{1.0}, cx{0.0}};
        dec.vectors[1] = swap ? std::array<cx, 2>{cx{1.0}, cx{0.0}}
                              : std::array<cx, 2>{cx{0.0}, cx{1.0}};
        return dec;
    }
    for (int i = 0; i < 2; ++i) {
        // Row (a - lambda, b) annihilates the eigenvector: take (b, lambda - a).
        dec.vectors[i] = normalize_vec(b, cx{dec.values[i] - a});
    }
    return dec;
}

Mat2 evolution_unitary(const EigenDecomposition& dec, double t, double power) {
    Mat2 u;
    u.a = {cx{0.0}, cx{0.0}, cx{0.0}, cx{0.0}};
    for (int i = 0; i < 2; ++i) {
        const cx phase = std::exp(cx{0.0, dec.values[i] * t * power});
        const auto& v = dec.vectors[i];
        u.a[0] += phase * v[0] * std::conj(v[0]);
        u.a[1] += phase * v[0] * std::conj(v[1]);
        u.a[2] += phase * v[1] * std::conj(v[0]);
        u.a[3] += phase * v[1] * std::conj(v[1]);
    }
    return u;
}

std::array<cx, 2> reference_solution(const LinearSystem& sys) {
    check_hermitian(sys);
    const cx det = sys.a[0] * sys.a[3] - sys.a[1] * sys.a[2];
    if (std::abs(det) <= kSingularTol) throw std::invalid_argument("matrix is singular");
    return {(sys.a[3] * sys.b[0] - sys.a[1] * sys.b[1]) / det,
            (sys.a[0] * sys.b[1] - sys.a[2] * sys.b[0]) / det};
}

double reference_ratio(const LinearSystem& sys) {
    const auto x = reference_solution(sys);
    const double denom = std::norm(x[1]);
    if (denom <= 1e-30)
        throw std::invalid_argument("solution ratio undefined: x1 vanishes");
    return std::norm(x[0]) / denom;
}

}  // namespace hhlsim
