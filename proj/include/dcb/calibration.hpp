#pragma once

// Through-Line error-box extraction and de-embedding.
//
// Measured cascades: T_through = T_x T_y, T_line = T_x T_l T_y, with the
// right-hand fixture the mirror image of the left one, T_y = (E2 T_x E2)^-1,
// and T_l = diag(e^{j theta}, e^{-j theta}) for the lossless line standard.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcb/error.hpp"
#include "dcb/matrix.hpp"
#include "dcb/network.hpp"

namespace dcb {

struct CalPoint {
    double freq = 0.0; // Hz
    TwoPortS through;
    TwoPortS line;
    double theta_line = 0.0; // rad, nominal line length at this frequency
};

struct CalStandardSet {
    std::vector<CalPoint> points; // ascending frequency
};

struct ErrorBoxPoint {
    double freq = 0.0;
    TwoPortT t_x;
    cplx line_eigenvalue; // recovered e^{j theta_line}
};

struct ErrorBox {
    std::vector<ErrorBoxPoint> points;
    std::vector<double> dropped_freqs; // standards without usable transmission
    std::vector<std::string> warnings;
};

namespace detail {

inline bool same_freq(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1.0});
}

inline std::string freq_label(double f) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g Hz", f);
    return buf;
}

inline double wrapped_phase_distance(cplx z, double phase) {
    return std::abs(std::arg(z * std::polar(1.0, -phase)));
}

inline CMat2 line_t(double theta) {
    return CMat2::diagonal({std::polar(1.0, theta), std::polar(1.0, -theta)});
}

// Mirror-image fixture on the right-hand side.
inline CMat2 mirrored_inverse(const CMat2& t_x) {
    const CMat2 e2 = CMat2::exchange();
    return mat_inv(e2 * t_x * e2);
}

} // namespace detail

// Pair two standards measured on the same frequency list.
inline CalStandardSet make_cal_set(std::span<const TwoPortS> through, std::span<const TwoPortS> line,
                                   std::span<const double> theta_line) {
    if (through.size() != line.size() || through.size() != theta_line.size()) {
        throw alignment_error("calibration standards have different point counts");
    }
    CalStandardSet cal;
    cal.points.reserve(through.size());
    for (std::size_t i = 0; i < through.size(); ++i) {
        if (!through[i].freq || !line[i].freq) {
            throw alignment_error("calibration standard point without frequency tag");
        }
        if (!detail::same_freq(*through[i].freq, *line[i].freq)) {
            throw alignment_error("through/line frequency mismatch at point " + std::to_string(i) +
                                  " (" + detail::freq_label(*through[i].freq) + " vs " +
                                  detail::freq_label(*line[i].freq) + ")");
        }
        cal.points.push_back({*through[i].freq, through[i], line[i], theta_line[i]});
    }
    return cal;
}

inline ErrorBox extract_error_box(const CalStandardSet& cal) {
    ErrorBox eb;
    const CMat2 e2 = CMat2::exchange();

    for (std::size_t i = 0; i < cal.points.size(); ++i) {
        const CalPoint& p = cal.points[i];
        if (i > 0 && !(p.freq > cal.points[i - 1].freq)) {
            throw alignment_error("calibration frequencies must be strictly increasing");
        }
        if (p.through.freq && !detail::same_freq(*p.through.freq, p.freq)) {
            throw alignment_error("through standard not aligned at " + detail::freq_label(p.freq));
        }
        if (p.line.freq && !detail::same_freq(*p.line.freq, p.freq)) {
            throw alignment_error("line standard not aligned at " + detail::freq_label(p.freq));
        }
        if (!(std::abs(p.through.s(1, 0)) > 1e-12) || !(std::abs(p.line.s(1, 0)) > 1e-12)) {
            eb.dropped_freqs.push_back(p.freq);
            eb.warnings.push_back("dropped " + detail::freq_label(p.freq) +
                                  ": standard has no transmission (|S21| <= 1e-12)");
            continue;
        }
        if (!(std::abs(std::sin(p.theta_line)) > 1e-3)) {
            throw calibration_degenerate_error(
                "calibration degenerate at " + detail::freq_label(p.freq) +
                    ": line length is a multiple of 180 deg",
                p.freq);
        }

        const CMat2 t_thru = t_from_s(p.through).t;
        const CMat2 t_line = t_from_s(p.line).t;
        const CMat2 t_tl = t_line * mat_inv(t_thru);

        std::array<EigenPair, 2> eig;
        try {
            eig = eig_2x2(t_tl);
        } catch (const numerical_error&) {
            throw calibration_degenerate_error(
                "calibration degenerate at " + detail::freq_label(p.freq) + ": line eigenvalues coincide",
                p.freq);
        }
        if (detail::wrapped_phase_distance(eig[1].value, p.theta_line) <
            detail::wrapped_phase_distance(eig[0].value, p.theta_line)) {
            std::swap(eig[0], eig[1]);
        }

        const CMat2 v{eig[0].vector[0], eig[1].vector[0], eig[0].vector[1], eig[1].vector[1]};
        // Through consistency: V^-1 T_through E2 V E2 = diag(k, 1/k) where k is
        // the ratio of the two column scales of T_x.
        const CMat2 x = mat_inv(v) * t_thru * e2 * v * e2;
        cplx k = std::sqrt(x(0, 0) / x(1, 1));
        if (std::abs(-k - x(0, 0)) < std::abs(k - x(0, 0))) {
            k = -k;
        }
        CMat2 t_x = v * CMat2::diagonal({k, 1.0});
        // Reciprocal fixture: det T_x = S12/S21 = 1 fixes the common scale up to sign.
        t_x *= 1.0 / std::sqrt(det(t_x));

        eb.points.push_back({p.freq, {t_x, p.through.z0}, eig[0].value});
    }

    // Sign branch: continuous fixture transmission, lowest frequency near 0 deg.
    for (std::size_t i = 0; i < eb.points.size(); ++i) {
        CMat2& t = eb.points[i].t_x.t;
        const cplx s21 = 1.0 / t(0, 0);
        const cplx ref = i == 0 ? cplx(1.0) : 1.0 / eb.points[i - 1].t_x.t(0, 0);
        if (std::abs(std::arg(s21 / ref)) > 0.5 * pi) {
            t = -t;
        }
    }
    return eb;
}

inline TwoPortS deembed_point(const TwoPortS& s_test, const TwoPortT& t_x) {
    const CMat2 e2 = CMat2::exchange();
    const CMat2 t_test = t_from_s(s_test).t;
    const CMat2 t_dut = mat_inv(t_x.t) * t_test * e2 * t_x.t * e2;
    TwoPortS out = s_from_t({t_dut, s_test.z0});
    out.freq = s_test.freq;
    return out;
}

inline std::vector<TwoPortS> deembed(std::span<const TwoPortS> s_test, const ErrorBox& eb) {
    std::vector<TwoPortS> out;
    out.reserve(s_test.size());
    std::size_t cursor = 0;
    for (const TwoPortS& s : s_test) {
        if (!s.freq) {
            throw alignment_error("test measurement point without frequency tag");
        }
        while (cursor < eb.points.size() && eb.points[cursor].freq < *s.freq &&
               !detail::same_freq(eb.points[cursor].freq, *s.freq)) {
            ++cursor;
        }
        if (cursor == eb.points.size() || !detail::same_freq(eb.points[cursor].freq, *s.freq)) {
            throw alignment_error("no error-box point at " + detail::freq_label(*s.freq));
        }
        out.push_back(deembed_point(s, eb.points[cursor].t_x));
    }
    return out;
}

struct SyntheticCal {
    CalStandardSet cal;
    std::vector<TwoPortS> test; // empty when no DUT was supplied
};

// Measurements a Through-Line kit would produce for known fixtures (and DUT).
inline SyntheticCal synth_cal_data(std::span<const double> freqs, std::span<const TwoPortT> t_x,
                                   std::span<const double> theta_line,
                                   std::span<const TwoPortS> s_dut = {}) {
    if (freqs.size() != t_x.size() || freqs.size() != theta_line.size() ||
        (!s_dut.empty() && s_dut.size() != freqs.size())) {
        throw alignment_error("synth_cal_data: input lengths differ");
    }
    SyntheticCal out;
    out.cal.points.reserve(freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const CMat2& tx = t_x[i].t;
        const double z0 = t_x[i].z0;
        const CMat2 ty = detail::mirrored_inverse(tx);
        TwoPortS thru = s_from_t({tx * ty, z0});
        TwoPortS line = s_from_t({tx * detail::line_t(theta_line[i]) * ty, z0});
        thru.freq = freqs[i];
        line.freq = freqs[i];
        out.cal.points.push_back({freqs[i], thru, line, theta_line[i]});
        if (!s_dut.empty()) {
            TwoPortS test = s_from_t({tx * t_from_s(s_dut[i]).t * ty, z0});
            test.freq = freqs[i];
            out.test.push_back(test);
        }
    }
    return out;
}

} // namespace dcb
