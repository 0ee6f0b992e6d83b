#pragma once

// Uniform lossless TEM coupled-line section: the involutory D matrix and the
// closed-form wave scattering transfer matrix M = cos(theta) I + j sin(theta) D.
//
// Port convention: (a1, a2, b1, b2)^T = M (b3, b4, a3, a4)^T, ports 1/2 on the
// left end, 3/4 on the right end, conductor 1 owning ports 1 and 3.

#include <cmath>
#include <cstddef>
#include <utility>

#include "dcb/error.hpp"
#include "dcb/matrix.hpp"

namespace dcb {

// Per-unit-length capacitance matrix [c11 c12; c12 c22] (c12 = -C_M <= 0)
// together with the TEM wave velocity and the physical section length.
struct CapacitancePerLength {
    double c11 = 0.0;   // F/m
    double c22 = 0.0;   // F/m
    double c12 = 0.0;   // F/m, non-positive
    double v_tl = 0.0;  // m/s
    double length = 0.0; // m

    void validate() const {
        if (!(c11 > 0.0) || !(c22 > 0.0)) {
            throw domain_error("capacitance: c11 and c22 must be positive");
        }
        if (!(c12 <= 0.0)) {
            throw domain_error("capacitance: mutual entry c12 must be non-positive");
        }
        if (!(c11 * c22 - c12 * c12 > 0.0)) {
            throw domain_error("capacitance: matrix is not positive definite");
        }
        if (!(v_tl > 0.0) || !(length > 0.0)) {
            throw domain_error("capacitance: wave velocity and length must be positive");
        }
    }
};

// Symmetric coupled section in design terms.
struct CoupledSectionSpec {
    double cr = 0.0;     // coupling ratio, [0, 1)
    double z_cl = 50.0;  // ohm, sqrt(Z0e * Z0o)
    double theta0 = 0.0; // rad at the reference frequency

    void validate() const {
        if (!(cr >= 0.0 && cr < 1.0)) {
            throw domain_error("coupled section: coupling ratio must lie in [0, 1)");
        }
        if (!(z_cl > 0.0)) {
            throw domain_error("coupled section: Z_CL must be positive");
        }
        if (!(theta0 >= 0.0)) {
            throw domain_error("coupled section: electrical length must be non-negative");
        }
    }
};

// Real 4x4 involutory matrix (D * D = I) carried as complex for direct use in M.
struct DImag {
    CMat4 m;
};

inline double electrical_length(const CapacitancePerLength& c, double freq_hz) {
    if (!(freq_hz >= 0.0)) {
        throw domain_error("electrical_length: frequency must be non-negative");
    }
    return 2.0 * pi * freq_hz * c.length / c.v_tl;
}

struct EvenOdd {
    double z0e;
    double z0o;
};

inline EvenOdd even_odd_from_cr(double cr, double z_cl) {
    if (!(cr < 1.0)) {
        throw domain_error("even_odd_from_cr: coupling ratio >= 1 gives singular coupling");
    }
    if (!(cr >= 0.0) || !(z_cl > 0.0)) {
        throw domain_error("even_odd_from_cr: need 0 <= cr < 1 and z_cl > 0");
    }
    const double ratio = std::sqrt((1.0 + cr) / (1.0 - cr));
    return {z_cl * ratio, z_cl / ratio};
}

struct CrZcl {
    double cr;
    double z_cl;
};

inline CrZcl cr_from_even_odd(double z0e, double z0o) {
    if (!(z0o > 0.0)) {
        throw domain_error("cr_from_even_odd: impedances must be positive");
    }
    if (z0e < z0o) {
        throw domain_error("cr_from_even_odd: expected z0e >= z0o (arguments swapped?)");
    }
    return {(z0e - z0o) / (z0e + z0o), std::sqrt(z0e * z0o)};
}

namespace detail {

inline CMat4 from_blocks(const CMat2& tl, const CMat2& tr, const CMat2& bl, const CMat2& br) {
    CMat4 r;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            r(i, j) = tl(i, j);
            r(i, j + 2) = tr(i, j);
            r(i + 2, j) = bl(i, j);
            r(i + 2, j + 2) = br(i, j);
        }
    }
    return r;
}

// D from the normalized capacitance P = v Z0 C_u:
// D = 1/2 [[P + P^-1, P - P^-1], [P^-1 - P, -(P + P^-1)]].
inline CMat4 d_from_normalized_capacitance(const CMat2& p) {
    const CMat2 pinv = mat_inv(p);
    const CMat2 sum = 0.5 * (p + pinv);
    const CMat2 diff = 0.5 * (p - pinv);
    return from_blocks(sum, diff, -diff, -sum);
}

} // namespace detail

// Symmetric-line D from coupling ratio and z_ratio = Z0 / Z_CL.
inline DImag d_imag_from_cr(double cr, double z_ratio) {
    if (!(cr < 1.0)) {
        throw domain_error("d_imag_from_cr: coupling ratio >= 1 gives singular coupling");
    }
    if (!(cr >= 0.0) || !(z_ratio > 0.0)) {
        throw domain_error("d_imag_from_cr: need 0 <= cr < 1 and z_ratio > 0");
    }
    const double pref = 1.0 / (2.0 * std::sqrt(1.0 - cr * cr));
    const CMat2 a{1.0, -cr, -cr, 1.0};
    const CMat2 b{1.0, cr, cr, 1.0};
    // r [I; -I] A [I I] + (1/r) [I; I] B [I -I]
    const CMat2 ra = z_ratio * a;
    const CMat2 br = (1.0 / z_ratio) * b;
    return {pref * (detail::from_blocks(ra, ra, -ra, -ra) + detail::from_blocks(br, -br, br, -br))};
}

// General (possibly asymmetric) D from the per-unit-length capacitance.
inline DImag d_imag_from_capacitance(const CapacitancePerLength& c, double z0) {
    c.validate();
    if (!(z0 > 0.0)) {
        throw domain_error("d_imag_from_capacitance: reference impedance must be positive");
    }
    const double k = c.v_tl * z0;
    const CMat2 p{k * c.c11, k * c.c12, k * c.c12, k * c.c22};
    return {detail::d_from_normalized_capacitance(p)};
}

// Symmetric capacitance matrix reproducing (cr, z_cl) through the even/odd map.
inline CapacitancePerLength capacitance_from_cr(double cr, double z_cl, double v_tl, double length) {
    const auto eo = even_odd_from_cr(cr, z_cl);
    const double c_even = 1.0 / (v_tl * eo.z0e);
    const double c_odd = 1.0 / (v_tl * eo.z0o);
    return {0.5 * (c_even + c_odd), 0.5 * (c_even + c_odd), 0.5 * (c_even - c_odd), v_tl, length};
}

inline CMat4 m_total(const DImag& d, double theta) {
    return std::cos(theta) * CMat4::identity() + cplx(0.0, std::sin(theta)) * d.m;
}

inline CMat4 m_total(const CoupledSectionSpec& s, double z0, double theta) {
    s.validate();
    return m_total(d_imag_from_cr(s.cr, z0 / s.z_cl), theta);
}

// Second-order coefficient of the infinitesimal element, 1/2 [[I, I], [I, I]].
inline CMat4 d_real() {
    const CMat2 h{0.5, 0.0, 0.0, 0.5};
    return detail::from_blocks(h, h, h, h);
}

// Element matrix I - (theta/n)^2 D^r + j (theta/n) D^i.
inline CMat4 m_element(const DImag& d, double theta, std::size_t n) {
    const double h = theta / static_cast<double>(n);
    return CMat4::identity() - (h * h) * d_real() + cplx(0.0, h) * d.m;
}

// Element matrix of one lumped series-L / shunt-C cell of length l/n, built
// from the ladder voltages and currents and then mapped to power waves.
inline CMat4 m_element_lumped(const CapacitancePerLength& c, double z0, double freq_hz, std::size_t n) {
    const double seg = c.length / static_cast<double>(n);
    const double w = 2.0 * pi * freq_hz;
    const CMat2 ce{c.c11 * seg, c.c12 * seg, c.c12 * seg, c.c22 * seg};
    const CMat2 le = (seg / (c.v_tl * c.v_tl)) * mat_inv(CMat2{c.c11, c.c12, c.c12, c.c22});

    // [V_left; Z0 I_left] = X [V_right; Z0 I_right], currents flowing left to right.
    const CMat2 id = CMat2::identity();
    const CMat4 x = detail::from_blocks(id - (w * w) * (le * ce), cplx(0.0, w / z0) * le,
                                        cplx(0.0, w * z0) * ce, id);
    const CMat4 wave = detail::from_blocks(id, id, id, -id);
    return 0.5 * (wave * x * wave);
}

// Brute-force M as the product of n lumped elements. Converges to the closed
// form with first-order error ~ theta^2 / n.
inline CMat4 m_total_discrete_oracle(const CapacitancePerLength& c, double z0, double freq_hz, std::size_t n) {
    c.validate();
    if (n < 1) {
        throw domain_error("m_total_discrete_oracle: need at least one element");
    }
    if (!(z0 > 0.0)) {
        throw domain_error("m_total_discrete_oracle: reference impedance must be positive");
    }
    const CMat4 el = m_element_lumped(c, z0, freq_hz, n);
    CMat4 acc = el;
    for (std::size_t k = 1; k < n; ++k) {
        acc = acc * el;
    }
    return acc;
}

} // namespace dcb
