#pragma once

#include <gtest/gtest.h>

#include <cstdint>

#include "dcb/dcb.hpp"

namespace support {

using dcb::cplx;

template <std::size_t N>
dcb::CMat<N> random_matrix(dcb::Rng& rng, double scale = 1.0) {
    dcb::CMat<N> m;
    for (auto& v : m.a) {
        v = cplx(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
    }
    return m;
}

// Diagonally dominated random matrix: condition number stays small.
template <std::size_t N>
dcb::CMat<N> well_conditioned(dcb::Rng& rng) {
    return random_matrix<N>(rng) + (2.0 * static_cast<double>(N)) * dcb::CMat<N>::identity();
}

template <std::size_t N>
::testing::AssertionResult mat_near(const dcb::CMat<N>& a, const dcb::CMat<N>& b, double tol) {
    const double d = dcb::max_abs_diff(a, b);
    if (d <= tol) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << "max |a - b| = " << d << " > " << tol;
}

template <std::size_t N>
::testing::AssertionResult is_unitary(const dcb::CMat<N>& s, double tol) {
    return mat_near(dcb::adjoint(s) * s, dcb::CMat<N>::identity(), tol);
}

template <std::size_t N>
::testing::AssertionResult is_symmetric(const dcb::CMat<N>& s, double tol) {
    return mat_near(s, dcb::transpose(s), tol);
}

inline ::testing::AssertionResult cnear(cplx a, cplx b, double tol) {
    if (std::abs(a - b) <= tol) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << a << " vs " << b << " (|diff| " << std::abs(a - b) << ")";
}

} // namespace support
