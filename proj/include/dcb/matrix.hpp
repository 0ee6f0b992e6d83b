#pragma once

// Fixed-size dense complex matrices for the 2x2 / 4x4 transfer-matrix algebra.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>

#include "dcb/error.hpp"

namespace dcb {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

template <std::size_t N>
struct CMat {
    static_assert(N >= 1, "empty matrix");
    static constexpr std::size_t dim = N;

    std::array<cplx, N * N> a{}; // row-major

    CMat() = default;

    // Row-major initializer; missing entries stay zero.
    CMat(std::initializer_list<cplx> values) {
        std::size_t k = 0;
        for (const auto& v : values) {
            if (k == N * N) {
                break;
            }
            a[k++] = v;
        }
    }

    cplx& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

    static CMat identity() {
        CMat m;
        for (std::size_t i = 0; i < N; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    // Anti-diagonal permutation (E2 / E4).
    static CMat exchange() {
        CMat m;
        for (std::size_t i = 0; i < N; ++i) {
            m(i, N - 1 - i) = 1.0;
        }
        return m;
    }

    static CMat diagonal(const std::array<cplx, N>& d) {
        CMat m;
        for (std::size_t i = 0; i < N; ++i) {
            m(i, i) = d[i];
        }
        return m;
    }

    CMat& operator+=(const CMat& o) {
        for (std::size_t k = 0; k < N * N; ++k) {
            a[k] += o.a[k];
        }
        return *this;
    }
    CMat& operator-=(const CMat& o) {
        for (std::size_t k = 0; k < N * N; ++k) {
            a[k] -= o.a[k];
        }
        return *this;
    }
    CMat& operator*=(cplx s) {
        for (auto& v : a) {
            v *= s;
        }
        return *this;
    }

    friend CMat operator+(CMat l, const CMat& r) { return l += r; }
    friend CMat operator-(CMat l, const CMat& r) { return l -= r; }
    friend CMat operator-(CMat m) { return m *= -1.0; }
    friend CMat operator*(CMat m, cplx s) { return m *= s; }
    friend CMat operator*(cplx s, CMat m) { return m *= s; }
    friend CMat operator*(CMat m, double s) { return m *= cplx(s); }
    friend CMat operator*(double s, CMat m) { return m *= cplx(s); }

    friend bool operator==(const CMat&, const CMat&) = default;
};

using CMat2 = CMat<2>;
using CMat4 = CMat<4>;

template <std::size_t N>
CMat<N> mat_mul(const CMat<N>& x, const CMat<N>& y) {
    CMat<N> r;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t k = 0; k < N; ++k) {
            const cplx xik = x(i, k);
            if (xik == cplx{}) {
                continue;
            }
            for (std::size_t j = 0; j < N; ++j) {
                r(i, j) += xik * y(k, j);
            }
        }
    }
    return r;
}

template <std::size_t N>
CMat<N> operator*(const CMat<N>& x, const CMat<N>& y) {
    return mat_mul(x, y);
}

template <std::size_t N>
std::array<cplx, N> operator*(const CMat<N>& m, const std::array<cplx, N>& v) {
    std::array<cplx, N> r{};
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            r[i] += m(i, j) * v[j];
        }
    }
    return r;
}

// Maximum absolute row sum.
template <std::size_t N>
double inf_norm(const CMat<N>& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            row += std::abs(m(i, j));
        }
        best = std::max(best, row);
    }
    return best;
}

// Largest entry-wise absolute difference. Used for tolerances stated "within x".
template <std::size_t N>
double max_abs_diff(const CMat<N>& x, const CMat<N>& y) {
    double d = 0.0;
    for (std::size_t k = 0; k < N * N; ++k) {
        d = std::max(d, std::abs(x.a[k] - y.a[k]));
    }
    return d;
}

template <std::size_t N>
CMat<N> transpose(const CMat<N>& m) {
    CMat<N> r;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            r(j, i) = m(i, j);
        }
    }
    return r;
}

template <std::size_t N>
CMat<N> adjoint(const CMat<N>& m) {
    CMat<N> r;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            r(j, i) = std::conj(m(i, j));
        }
    }
    return r;
}

template <std::size_t N>
bool all_finite(const CMat<N>& m) {
    return std::all_of(m.a.begin(), m.a.end(), [](const cplx& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
}

inline cplx det(const CMat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

// Inverse by LU with partial pivoting. A pivot below 1e-14 * ||a||_inf is
// treated as singular.
template <std::size_t N>
CMat<N> mat_inv(const CMat<N>& m) {
    const double scale = inf_norm(m);
    const double floor = 1e-14 * scale;
    if (!(scale > 0.0) || !all_finite(m)) {
        throw singular_matrix_error("matrix is singular (zero or non-finite)");
    }

    CMat<N> lu = m;
    CMat<N> inv = CMat<N>::identity();
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r) {
            if (std::abs(lu(r, col)) > std::abs(lu(piv, col))) {
                piv = r;
            }
        }
        if (std::abs(lu(piv, col)) <= floor) {
            throw singular_matrix_error("matrix is singular to working precision");
        }
        if (piv != col) {
            for (std::size_t j = 0; j < N; ++j) {
                std::swap(lu(piv, j), lu(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        const cplx p = lu(col, col);
        for (std::size_t r = 0; r < N; ++r) {
            if (r == col) {
                continue;
            }
            const cplx f = lu(r, col) / p;
            if (f == cplx{}) {
                continue;
            }
            for (std::size_t j = 0; j < N; ++j) {
                lu(r, j) -= f * lu(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    for (std::size_t r = 0; r < N; ++r) {
        const cplx p = lu(r, r);
        for (std::size_t j = 0; j < N; ++j) {
            inv(r, j) /= p;
        }
    }
    return inv;
}

struct EigenPair {
    cplx value;
    std::array<cplx, 2> vector; // unit norm, first nonzero entry real positive
};

namespace detail {

inline std::array<cplx, 2> normalize_eigenvector(std::array<cplx, 2> v) {
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    v[0] /= n;
    v[1] /= n;
    const cplx lead = std::abs(v[0]) > 1e-12 ? v[0] : v[1];
    const cplx rot = std::conj(lead) / std::abs(lead);
    v[0] *= rot;
    v[1] *= rot;
    return v;
}

inline std::array<cplx, 2> null_vector(const CMat2& m, cplx lambda) {
    // Two candidate kernel vectors of (m - lambda I); keep the better conditioned one.
    std::array<cplx, 2> from_row0{m(0, 1), lambda - m(0, 0)};
    std::array<cplx, 2> from_row1{lambda - m(1, 1), m(1, 0)};
    const double n0 = std::norm(from_row0[0]) + std::norm(from_row0[1]);
    const double n1 = std::norm(from_row1[0]) + std::norm(from_row1[1]);
    return n0 >= n1 ? from_row0 : from_row1;
}

} // namespace detail

// Closed-form eigendecomposition of a 2x2 matrix. The first pair is the
// eigenvalue continuously connected to m(0,0) as the off-diagonal coupling
// vanishes. Throws on (near-)coincident eigenvalues.
inline std::array<EigenPair, 2> eig_2x2(const CMat2& m) {
    const cplx mean = 0.5 * (m(0, 0) + m(1, 1));
    const cplx half_gap = 0.5 * (m(0, 0) - m(1, 1));
    cplx s = std::sqrt(half_gap * half_gap + m(0, 1) * m(1, 0));
    if ((s * std::conj(half_gap)).real() < 0.0) {
        s = -s;
    }
    const cplx l1 = mean + s;
    const cplx l2 = mean - s;
    const double mag = std::max(std::abs(l1), std::abs(l2));
    if (!(mag > 0.0) || std::abs(l1 - l2) < 1e-9 * mag) {
        throw numerical_error("eigenvalues coincide; matrix is defective or degenerate");
    }
    return {EigenPair{l1, detail::normalize_eigenvector(detail::null_vector(m, l1))},
            EigenPair{l2, detail::normalize_eigenvector(detail::null_vector(m, l2))}};
}

} // namespace dcb
