#pragma once

// Structural operations on wave transfer matrices and two-/four-port
// scattering matrices. All reference impedances are real.

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "dcb/coupled_line.hpp"
#include "dcb/error.hpp"
#include "dcb/matrix.hpp"

namespace dcb {

// Four-port wave transfer matrix: (a1, a2, b1, b2)^T = m (b3, b4, a3, a4)^T.
struct FourPortM {
    CMat4 m = CMat4::identity();
    double z0 = 50.0;
};

// Two-port wave transfer matrix: (a1, b1)^T = t (b2, a2)^T.
struct TwoPortT {
    CMat2 t = CMat2::identity();
    double z0 = 50.0;
};

struct TwoPortS {
    CMat2 s;
    double z0 = 50.0;
    std::optional<double> freq; // Hz
    // Set when the result is the full-reflection branch of an open-port
    // reduction (transmission null), where no transfer matrix exists.
    bool degenerate = false;
};

struct FourPortS {
    CMat4 s;
    double z0 = 50.0;
};

namespace detail {

inline void require_positive_z(double z, const char* what) {
    if (!(z > 0.0)) {
        throw domain_error(std::string(what) + ": reference impedance must be positive");
    }
}

} // namespace detail

// Pair of uncoupled lines of characteristic impedance z_line seen at
// reference z_ref. For z_line == z_ref this is the diagonal delay matrix.
inline FourPortM m_delay_line(double theta_d1, double theta_d2, double z_line, double z_ref) {
    detail::require_positive_z(z_line, "m_delay_line");
    detail::require_positive_z(z_ref, "m_delay_line");
    const double r = z_ref / z_line;
    const double alpha = 0.5 * (r + 1.0 / r);
    const double beta = 0.5 * (r - 1.0 / r);
    FourPortM out{CMat4{}, z_ref};
    const std::array<double, 2> thetas{theta_d1, theta_d2};
    for (std::size_t c = 0; c < 2; ++c) {
        const double co = std::cos(thetas[c]);
        const cplx js(0.0, std::sin(thetas[c]));
        out.m(c, c) = co + js * alpha;
        out.m(c, c + 2) = js * beta;
        out.m(c + 2, c) = -js * beta;
        out.m(c + 2, c + 2) = co - js * alpha;
    }
    return out;
}

// Matched delay lines: diag(e^{j td1}, e^{j td2}, e^{-j td1}, e^{-j td2}).
inline FourPortM m_delay(double theta_d1, double theta_d2, double z0) {
    detail::require_positive_z(z0, "m_delay");
    FourPortM out{CMat4::diagonal({std::polar(1.0, theta_d1), std::polar(1.0, theta_d2),
                                   std::polar(1.0, -theta_d1), std::polar(1.0, -theta_d2)}),
                  z0};
    return out;
}

// The same network physically turned end for end: E4 M^-1 E4.
inline FourPortM rotate_m(const FourPortM& m) {
    const CMat4 e4 = CMat4::exchange();
    return {e4 * mat_inv(m.m) * e4, m.z0};
}

inline FourPortM cascade(std::span<const FourPortM> ms) {
    if (ms.empty()) {
        throw domain_error("cascade: empty network list");
    }
    FourPortM acc = ms.front();
    for (std::size_t k = 1; k < ms.size(); ++k) {
        if (ms[k].z0 != acc.z0) {
            throw domain_error("cascade: sections use different reference impedances");
        }
        acc.m = acc.m * ms[k].m;
    }
    return acc;
}

inline FourPortM cascade(std::initializer_list<FourPortM> ms) {
    return cascade(std::span<const FourPortM>(ms.begin(), ms.size()));
}

// Two-port obtained by leaving ports 2 and 3 open. `t` is empty on the
// transmission-null branch (M proportional to the identity), where the
// network fully reflects at both ports.
struct ReducedTwoPort {
    std::optional<TwoPortT> t;
    double z0 = 50.0;

    bool degenerate() const { return !t.has_value(); }
};

inline ReducedTwoPort reduce_open_2_3(const FourPortM& fm) {
    const CMat4& m = fm.m;
    // Open ends: a2 = b2 and a3 = b3. Subtracting rows 2 and 4 of the transfer
    // relation eliminates the common port-2 wave and leaves one equation for a3.
    const cplx den = m(1, 0) + m(1, 2) - m(3, 0) - m(3, 2);
    if (std::abs(den) < 1e-9 * inf_norm(m)) {
        return {std::nullopt, fm.z0};
    }
    const cplx c0 = m(0, 0) + m(0, 2);
    const cplx c1 = m(2, 0) + m(2, 2);
    const cplx r0 = m(1, 1) - m(3, 1);
    const cplx r1 = m(1, 3) - m(3, 3);
    TwoPortT t{CMat2{m(0, 1) - c0 * r0 / den, m(0, 3) - c0 * r1 / den,
                     m(2, 1) - c1 * r0 / den, m(2, 3) - c1 * r1 / den},
               fm.z0};
    return {t, fm.z0};
}

inline TwoPortS s_from_t(const TwoPortT& t) {
    const cplx t11 = t.t(0, 0);
    if (std::abs(t11) == 0.0 || !all_finite(t.t)) {
        throw numerical_error("s_from_t: T11 is zero or non-finite");
    }
    return {CMat2{t.t(1, 0) / t11, det(t.t) / t11, 1.0 / t11, -t.t(0, 1) / t11}, t.z0};
}

inline TwoPortT t_from_s(const TwoPortS& s) {
    const cplx s21 = s.s(1, 0);
    if (!(std::abs(s21) > 1e-12)) {
        throw numerical_error("t_from_s: S21 is zero, transfer matrix undefined");
    }
    return {CMat2{1.0 / s21, -s.s(1, 1) / s21, s.s(0, 0) / s21,
                  (s.s(0, 1) * s21 - s.s(0, 0) * s.s(1, 1)) / s21},
            s.z0};
}

// Scattering matrix of a reduced two-port; the degenerate branch maps to
// S11 = S22 = 1, S21 = S12 = 0.
inline TwoPortS to_s(const ReducedTwoPort& r) {
    if (r.degenerate()) {
        TwoPortS s{CMat2::identity(), r.z0};
        s.degenerate = true;
        return s;
    }
    return s_from_t(*r.t);
}

// Outgoing waves b = S a from the transfer relation.
inline FourPortS s4_from_m(const FourPortM& fm) {
    const CMat4& m = fm.m;
    const CMat2 a{m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
    const CMat2 b{m(0, 2), m(0, 3), m(1, 2), m(1, 3)};
    const CMat2 c{m(2, 0), m(2, 1), m(3, 0), m(3, 1)};
    const CMat2 d{m(2, 2), m(2, 3), m(3, 2), m(3, 3)};
    CMat2 ainv;
    try {
        ainv = mat_inv(a);
    } catch (const singular_matrix_error&) {
        throw singular_matrix_error("s4_from_m: transfer matrix cannot be rearranged to S");
    }
    const CMat2 s_ll = c * ainv;
    const CMat2 s_lr = d - c * ainv * b;
    const CMat2 s_rl = ainv;
    const CMat2 s_rr = -(ainv * b);
    return {detail::from_blocks(s_ll, s_lr, s_rl, s_rr), fm.z0};
}

// Re-reference an N-port scattering matrix from z0 to z_new (both real).
template <std::size_t N>
CMat<N> renormalize_matrix(const CMat<N>& s, double z0, double z_new) {
    detail::require_positive_z(z0, "renormalize");
    detail::require_positive_z(z_new, "renormalize");
    const double rho = (z_new - z0) / (z_new + z0);
    const CMat<N> id = CMat<N>::identity();
    CMat<N> rhs;
    try {
        rhs = mat_inv(id - rho * s);
    } catch (const singular_matrix_error&) {
        throw numerical_error("renormalize: (I - rho S) is singular");
    }
    return (s - rho * id) * rhs;
}

inline TwoPortS renormalize(const TwoPortS& s, double z_new) {
    TwoPortS out = s;
    out.s = renormalize_matrix(s.s, s.z0, z_new);
    out.z0 = z_new;
    return out;
}

template <std::size_t N>
CMat<N> z_from_s(const CMat<N>& s, double z0) {
    const CMat<N> id = CMat<N>::identity();
    try {
        return z0 * ((id + s) * mat_inv(id - s));
    } catch (const singular_matrix_error&) {
        throw numerical_error("z_from_s: network has no impedance matrix");
    }
}

template <std::size_t N>
CMat<N> s_from_z(const CMat<N>& z, double z0) {
    const CMat<N> id = CMat<N>::identity();
    try {
        return (z - z0 * id) * mat_inv(z + z0 * id);
    } catch (const singular_matrix_error&) {
        throw numerical_error("s_from_z: singular conversion");
    }
}

template <std::size_t N>
CMat<N> y_from_s(const CMat<N>& s, double z0) {
    const CMat<N> id = CMat<N>::identity();
    try {
        return (1.0 / z0) * ((id - s) * mat_inv(id + s));
    } catch (const singular_matrix_error&) {
        throw numerical_error("y_from_s: network has no admittance matrix");
    }
}

template <std::size_t N>
CMat<N> s_from_y(const CMat<N>& y, double z0) {
    const CMat<N> id = CMat<N>::identity();
    try {
        return (id - z0 * y) * mat_inv(id + z0 * y);
    } catch (const singular_matrix_error&) {
        throw numerical_error("s_from_y: singular conversion");
    }
}

// Two identical copies connected in series at both ports (Z_total = 2 Z),
// expressed back at the original reference.
inline TwoPortS series_pair_oracle(const TwoPortS& s) {
    TwoPortS out = s;
    out.s = s_from_z(2.0 * z_from_s(s.s, s.z0), s.z0);
    out.degenerate = false;
    return out;
}

inline TwoPortS ideal_inverter(double z0) {
    detail::require_positive_z(z0, "ideal_inverter");
    return {CMat2{0.0, -1.0, -1.0, 0.0}, z0};
}

// Port 2 of `a` connected to port 1 of `b` (Redheffer star product). Works
// on full-reflection networks where the transfer form is undefined.
inline TwoPortS cascade_s(const TwoPortS& a, const TwoPortS& b) {
    if (a.z0 != b.z0) {
        throw domain_error("cascade_s: reference impedances differ");
    }
    const cplx loop = 1.0 - a.s(1, 1) * b.s(0, 0);
    if (std::abs(loop) < 1e-14) {
        throw numerical_error("cascade_s: resonant interconnection (1 - S22a S11b = 0)");
    }
    TwoPortS out{CMat2{a.s(0, 0) + a.s(0, 1) * b.s(0, 0) * a.s(1, 0) / loop,
                       a.s(0, 1) * b.s(0, 1) / loop,
                       a.s(1, 0) * b.s(1, 0) / loop,
                       b.s(1, 1) + b.s(1, 0) * a.s(1, 1) * b.s(0, 1) / loop},
                 a.z0, a.freq};
    out.degenerate = a.degenerate || b.degenerate;
    return out;
}

} // namespace dcb
