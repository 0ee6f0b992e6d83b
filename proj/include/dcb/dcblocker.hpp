#pragma once

// Balanced phase-inverted coupled-line DC-blocker: five-section path model,
// differential/common-mode responses, sweeps and bandwidth metrics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dcb/coupled_line.hpp"
#include "dcb/error.hpp"
#include "dcb/network.hpp"

namespace dcb {

inline constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

// One path is cpl1 -> delay -> cpl2 -> rotated delay -> rotated cpl1 (cpl3).
// Electrical lengths are given at f0 and scale linearly with frequency.
struct DcBlockerParams {
    double z_cl1 = 50.0;
    double z_cl2 = 50.0;
    double cr1 = 0.0;
    double cr2 = 0.0;
    double theta1 = 0.0;   // rad at f0
    double theta2 = 0.0;   // rad at f0
    double theta3 = 0.0;   // rad at f0; equals theta1 for the rotated-copy layout
    double theta_d1 = 0.0; // rad at f0
    double theta_d2 = 0.0; // rad at f0
    double f0 = 7.2e9;     // Hz
    double z_diff = 50.0;  // differential port reference
    double z_comm = 50.0;  // common-mode port reference
    double z_delay = 50.0; // characteristic impedance of the delay lines

    void validate() const {
        if (!(z_cl1 > 0.0) || !(z_cl2 > 0.0) || !(z_diff > 0.0) || !(z_comm > 0.0) ||
            !(z_delay > 0.0)) {
            throw domain_error("dc-blocker: impedances must be positive");
        }
        if (!(cr1 >= 0.0 && cr1 < 1.0) || !(cr2 >= 0.0 && cr2 < 1.0)) {
            throw domain_error("dc-blocker: coupling ratios must lie in [0, 1)");
        }
        if (!(theta1 >= 0.0) || !(theta2 >= 0.0) || !(theta3 >= 0.0) || !(theta_d1 >= 0.0) ||
            !(theta_d2 >= 0.0)) {
            throw domain_error("dc-blocker: electrical lengths must be non-negative");
        }
        if (!(f0 > 0.0)) {
            throw domain_error("dc-blocker: f0 must be positive");
        }
    }
};

// Unoptimized quarter-wave design (43.3 ohm, CR 0.58, 22.5/45/22.5 deg).
inline DcBlockerParams table1_params() {
    DcBlockerParams p;
    p.z_cl1 = 43.3;
    p.z_cl2 = 43.3;
    p.cr1 = 0.58;
    p.cr2 = 0.58;
    p.theta1 = deg_to_rad(22.5);
    p.theta2 = deg_to_rad(45.0);
    p.theta3 = p.theta1;
    return p;
}

// Optimized design with broadside-coupled middle section and delay lines.
inline DcBlockerParams table2_params() {
    DcBlockerParams p;
    p.z_cl1 = 100.0;
    p.z_cl2 = 65.0;
    p.cr1 = 0.3;
    p.cr2 = 0.75;
    p.theta1 = deg_to_rad(14.4);
    p.theta2 = deg_to_rad(22.4);
    p.theta3 = p.theta1;
    p.theta_d1 = deg_to_rad(12.0);
    p.theta_d2 = deg_to_rad(16.0);
    return p;
}

inline FourPortM build_path_m(const DcBlockerParams& p, double f_norm, double z_ref) {
    p.validate();
    if (!(f_norm > 0.0)) {
        throw domain_error("build_path_m: normalized frequency must be positive");
    }
    if (!(z_ref > 0.0)) {
        throw domain_error("build_path_m: reference impedance must be positive");
    }
    const DImag d1 = d_imag_from_cr(p.cr1, z_ref / p.z_cl1);
    const DImag d2 = d_imag_from_cr(p.cr2, z_ref / p.z_cl2);
    const FourPortM cpl1{m_total(d1, p.theta1 * f_norm), z_ref};
    const FourPortM cpl2{m_total(d2, p.theta2 * f_norm), z_ref};
    const FourPortM cpl3 = rotate_m({m_total(d1, p.theta3 * f_norm), z_ref});
    const FourPortM delay1 = m_delay_line(p.theta_d1 * f_norm, p.theta_d2 * f_norm, p.z_delay, z_ref);
    const FourPortM delay2 = rotate_m(delay1);
    return cascade({cpl1, delay1, cpl2, delay2, cpl3});
}

// Single path reduced to a two-port (ports 2 and 3 open) at z_ref.
inline TwoPortS path_two_port(const DcBlockerParams& p, double f_norm, double z_ref) {
    return to_s(reduce_open_2_3(build_path_m(p, f_norm, z_ref)));
}

// Differential mode: two paths in series plus the phase inverter. The series
// pair at z_diff equals one path at z_diff / 2.
inline TwoPortS diff_mode_s(const DcBlockerParams& p, double f_norm) {
    if (!(f_norm > 0.0)) {
        throw domain_error("diff_mode_s: normalized frequency must be positive");
    }
    TwoPortS path = path_two_port(p, f_norm, 0.5 * p.z_diff);
    path.z0 = p.z_diff;
    TwoPortS out = cascade_s(path, ideal_inverter(p.z_diff));
    out.freq = f_norm * p.f0;
    return out;
}

// Common mode: two paths in parallel. The parallel pair at z_comm equals one
// path at 2 z_comm.
inline TwoPortS common_mode_s(const DcBlockerParams& p, double f_norm) {
    if (!(f_norm > 0.0)) {
        throw domain_error("common_mode_s: normalized frequency must be positive");
    }
    TwoPortS out = path_two_port(p, f_norm, 2.0 * p.z_comm);
    out.z0 = p.z_comm;
    out.freq = f_norm * p.f0;
    return out;
}

inline constexpr double db_floor = -200.0;

// 20 log10 |x| floored at -200 dB.
inline double magnitude_db(cplx x) {
    const double m = std::abs(x);
    if (!(m > 0.0)) {
        return db_floor;
    }
    return std::max(db_floor, 20.0 * std::log10(m));
}

struct SweepRow {
    double f_norm = 0.0;
    cplx s11_diff;
    cplx s21_diff;
    cplx s11_comm;
    cplx s21_comm;
    double cmrr_db = 0.0;
    bool degenerate = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

inline SweepRow evaluate_point(const DcBlockerParams& p, double f_norm) {
    const TwoPortS d = diff_mode_s(p, f_norm);
    const TwoPortS c = common_mode_s(p, f_norm);
    SweepRow row;
    row.f_norm = f_norm;
    row.s11_diff = d.s(0, 0);
    row.s21_diff = d.s(1, 0);
    row.s11_comm = c.s(0, 0);
    row.s21_comm = c.s(1, 0);
    row.cmrr_db = magnitude_db(row.s21_diff) - magnitude_db(row.s21_comm);
    row.degenerate = d.degenerate || c.degenerate;
    return row;
}

inline SweepResult sweep(const DcBlockerParams& p, std::span<const double> f_norm) {
    p.validate();
    SweepResult out;
    out.rows.reserve(f_norm.size());
    for (std::size_t i = 0; i < f_norm.size(); ++i) {
        if (!(f_norm[i] > 0.0)) {
            throw domain_error("sweep: normalized frequencies must be positive");
        }
        if (i > 0 && !(f_norm[i] > f_norm[i - 1])) {
            throw domain_error("sweep: normalized frequency grid must be strictly increasing");
        }
        out.rows.push_back(evaluate_point(p, f_norm[i]));
    }
    return out;
}

// Evenly spaced grid including both end points.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    if (points == 0) {
        return {};
    }
    if (points == 1) {
        return {lo};
    }
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    g.back() = hi;
    return g;
}

struct Band {
    double f1 = 0.0;
    double f2 = 0.0;
    double rel_bw = 0.0;
    bool empty() const { return !(f2 > f1); }
};

namespace detail {

// Abscissa where the dB curve crosses `level` between samples i and j.
inline double crossing(std::span<const double> x, std::span<const double> y, std::size_t i,
                       std::size_t j, double level) {
    const double dy = y[j] - y[i];
    if (dy == 0.0) {
        return 0.5 * (x[i] + x[j]);
    }
    return x[i] + (level - y[i]) * (x[j] - x[i]) / dy;
}

inline Band make_band(double f1, double f2) {
    Band b{f1, f2, 0.0};
    if (f2 > f1) {
        b.rel_bw = (f2 - f1) / (0.5 * (f1 + f2));
    }
    return b;
}

} // namespace detail

// Largest contiguous interval containing `center` where y_db <= -threshold_db,
// with edges linearly interpolated between samples. Empty when the center
// point does not meet the threshold.
inline Band relative_bandwidth(std::span<const double> x, std::span<const double> y_db,
                               double threshold_db, double center = 1.0) {
    if (x.size() != y_db.size()) {
        throw domain_error("relative_bandwidth: abscissa and data lengths differ");
    }
    const double level = -threshold_db;
    const std::size_t n = x.size();
    std::size_t i = 0;
    while (i < n) {
        if (!(y_db[i] <= level)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && y_db[j + 1] <= level) {
            ++j;
        }
        const double f1 = i == 0 ? x[0] : detail::crossing(x, y_db, i - 1, i, level);
        const double f2 = j + 1 == n ? x[n - 1] : detail::crossing(x, y_db, j, j + 1, level);
        if (f1 <= center && center <= f2) {
            return detail::make_band(f1, f2);
        }
        i = j + 1;
    }
    return {};
}

namespace detail {

inline std::vector<double> s11_diff_db(const SweepResult& s) {
    std::vector<double> y;
    y.reserve(s.rows.size());
    for (const auto& r : s.rows) {
        y.push_back(magnitude_db(r.s11_diff));
    }
    return y;
}

inline std::vector<double> f_norms(const SweepResult& s) {
    std::vector<double> x;
    x.reserve(s.rows.size());
    for (const auto& r : s.rows) {
        x.push_back(r.f_norm);
    }
    return x;
}

} // namespace detail

// Differential return-loss band around f/f0 = 1.
inline Band bandwidth_metric(const SweepResult& s, double threshold_db) {
    if (s.rows.empty()) {
        throw domain_error("bandwidth_metric: empty sweep");
    }
    if (!(threshold_db > 0.0)) {
        throw domain_error("bandwidth_metric: threshold must be positive");
    }
    const auto x = detail::f_norms(s);
    const auto y = detail::s11_diff_db(s);
    return relative_bandwidth(x, y, threshold_db, 1.0);
}

// Span between the outermost threshold crossings of the whole sweep, i.e. the
// passband edges when in-band ripple is allowed to exceed the threshold.
// Reported alongside bandwidth_metric as a diagnostic.
inline Band passband_span(const SweepResult& s, double threshold_db) {
    const auto x = detail::f_norms(s);
    const auto y = detail::s11_diff_db(s);
    const double level = -threshold_db;
    std::optional<std::size_t> first, last;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] <= level) {
            if (!first) {
                first = i;
            }
            last = i;
        }
    }
    if (!first) {
        return {};
    }
    const double f1 = *first == 0 ? x.front() : detail::crossing(x, y, *first - 1, *first, level);
    const double f2 = *last + 1 == x.size() ? x.back() : detail::crossing(x, y, *last, *last + 1, level);
    return detail::make_band(f1, f2);
}

// Minimum CMRR over sweep points inside [band.f1, band.f2]; +inf for an empty band.
inline double min_cmrr_in_band(const SweepResult& s, const Band& band) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : s.rows) {
        if (r.f_norm >= band.f1 && r.f_norm <= band.f2) {
            m = std::min(m, r.cmrr_db);
        }
    }
    return m;
}

struct ContourCurve {
    double cr = 0.0;
    double z_ratio = 0.0;
    std::vector<double> theta;  // rad
    std::vector<double> s11_mag;
};

// |S11| of a single open-ended coupled section (ports 2 and 3 open) versus
// electrical length, for every (cr, z_ratio) pair.
inline std::vector<ContourCurve> single_stage_contour(std::span<const double> crs,
                                                      std::span<const double> z_ratios,
                                                      std::span<const double> thetas) {
    for (double t : thetas) {
        if (!(t > 0.0 && t < pi)) {
            throw domain_error("single_stage_contour: theta grid must lie in (0, pi)");
        }
    }
    std::vector<ContourCurve> out;
    for (double cr : crs) {
        for (double zr : z_ratios) {
            const DImag d = d_imag_from_cr(cr, zr);
            ContourCurve c{cr, zr, {}, {}};
            c.theta.assign(thetas.begin(), thetas.end());
            c.s11_mag.reserve(thetas.size());
            for (double t : thetas) {
                const TwoPortS s = to_s(reduce_open_2_3({m_total(d, t), zr}));
                c.s11_mag.push_back(std::abs(s.s(0, 0)));
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

// Relative 10-dB (or other) bandwidth of one contour curve about theta = pi/2.
inline Band contour_bandwidth(const ContourCurve& c, double threshold_db) {
    std::vector<double> x(c.theta.size());
    std::vector<double> y(c.theta.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = c.theta[i] / (0.5 * pi);
        y[i] = magnitude_db(c.s11_mag[i]);
    }
    return relative_bandwidth(x, y, threshold_db, 1.0);
}

} // namespace dcb
