#pragma once

// Flat "key = value" design files for DcBlockerParams. Angles are in degrees.
//
//   zcl1_ohm, zcl2_ohm, cr1, cr2, theta1_deg, theta2_deg,
//   theta_d1_deg, theta_d2_deg                    required
//   theta3_deg    (default theta1_deg)
//   f0_hz         (default 7.2e9)
//   zdiff_ohm     (default 50)
//   zcomm_ohm     (default zdiff_ohm)
//   zdelay_ohm    (default zdiff_ohm)

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "dcb/dcblocker.hpp"
#include "dcb/error.hpp"

namespace dcb {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace detail

inline DcBlockerParams parse_design_config(std::string_view text) {
    static const char* const known[] = {"zcl1_ohm",     "zcl2_ohm",     "cr1",        "cr2",
                                        "theta1_deg",   "theta2_deg",   "theta3_deg", "theta_d1_deg",
                                        "theta_d2_deg", "f0_hz",        "zdiff_ohm",  "zcomm_ohm",
                                        "zdelay_ohm"};
    std::map<std::string, double, std::less<>> values;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw parse_error("expected 'key = value'", line_no);
        }
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view raw = detail::trim(line.substr(eq + 1));
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw config_error(key, "unknown key (line " + std::to_string(line_no) + ")");
        }
        if (values.count(key)) {
            throw config_error(key, "duplicate key (line " + std::to_string(line_no) + ")");
        }
        double v = 0.0;
        const char* first = raw.data();
        const char* last = raw.data() + raw.size();
        if (first != last && *first == '+') {
            ++first;
        }
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (raw.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
            throw config_error(key, "value '" + std::string(raw) + "' is not a finite number");
        }
        values.emplace(key, v);
    }

    auto required = [&](const char* key) {
        const auto it = values.find(key);
        if (it == values.end()) {
            throw config_error(key, "missing required key");
        }
        return it->second;
    };
    auto optional = [&](const char* key) -> std::optional<double> {
        const auto it = values.find(key);
        if (it == values.end()) {
            return std::nullopt;
        }
        return it->second;
    };
    auto positive = [](const char* key, double v) {
        if (!(v > 0.0)) {
            throw config_error(key, "must be positive");
        }
        return v;
    };
    auto coupling = [](const char* key, double v) {
        if (!(v >= 0.0 && v < 1.0)) {
            throw config_error(key, "coupling ratio must lie in [0, 1)");
        }
        return v;
    };
    auto angle = [](const char* key, double v) {
        if (!(v >= 0.0)) {
            throw config_error(key, "electrical length must be non-negative");
        }
        return deg_to_rad(v);
    };

    DcBlockerParams p;
    p.z_cl1 = positive("zcl1_ohm", required("zcl1_ohm"));
    p.z_cl2 = positive("zcl2_ohm", required("zcl2_ohm"));
    p.cr1 = coupling("cr1", required("cr1"));
    p.cr2 = coupling("cr2", required("cr2"));
    p.theta1 = angle("theta1_deg", required("theta1_deg"));
    p.theta2 = angle("theta2_deg", required("theta2_deg"));
    p.theta3 = angle("theta3_deg", optional("theta3_deg").value_or(rad_to_deg(p.theta1)));
    p.theta_d1 = angle("theta_d1_deg", required("theta_d1_deg"));
    p.theta_d2 = angle("theta_d2_deg", required("theta_d2_deg"));
    p.f0 = positive("f0_hz", optional("f0_hz").value_or(7.2e9));
    p.z_diff = positive("zdiff_ohm", optional("zdiff_ohm").value_or(50.0));
    p.z_comm = positive("zcomm_ohm", optional("zcomm_ohm").value_or(p.z_diff));
    p.z_delay = positive("zdelay_ohm", optional("zdelay_ohm").value_or(p.z_diff));
    return p;
}

} // namespace dcb
