#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "dcb/dcblocker.hpp"

namespace dcb {

inline constexpr const char* sweep_csv_header =
    "f_norm,s11_diff_db,s21_diff_db,s11_comm_db,s21_comm_db,cmrr_db,s21_diff_deg";

namespace detail {

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

// One header line plus one line per sweep point; dB values floored at -200.
inline std::string write_sweep_csv(const SweepResult& sweep) {
    std::ostringstream os;
    os << sweep_csv_header << "\n";
    for (const auto& r : sweep.rows) {
        const double s21d = magnitude_db(r.s21_diff);
        const double s21c = magnitude_db(r.s21_comm);
        os << detail::csv_num(r.f_norm) << ',' << detail::csv_num(magnitude_db(r.s11_diff)) << ','
           << detail::csv_num(s21d) << ',' << detail::csv_num(magnitude_db(r.s11_comm)) << ','
           << detail::csv_num(s21c) << ',' << detail::csv_num(s21d - s21c) << ','
           << detail::csv_num(rad_to_deg(std::arg(r.s21_diff))) << "\n";
    }
    return os.str();
}

// Contour table: one row per (cr, z_ratio, theta) sample.
inline std::string write_contour_csv(const std::vector<ContourCurve>& curves) {
    std::ostringstream os;
    os << "cr,z_ratio,theta_over_pi,s11_mag,s11_db\n";
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.theta.size(); ++i) {
            os << detail::csv_num(c.cr) << ',' << detail::csv_num(c.z_ratio) << ','
               << detail::csv_num(c.theta[i] / pi) << ',' << detail::csv_num(c.s11_mag[i]) << ','
               << detail::csv_num(magnitude_db(c.s11_mag[i])) << "\n";
        }
    }
    return os.str();
}

} // namespace dcb
