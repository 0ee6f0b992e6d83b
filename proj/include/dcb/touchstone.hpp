#pragma once

// Touchstone v1 (.s1p / .s2p / .s4p) reader and writer.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dcb/error.hpp"
#include "dcb/matrix.hpp"
#include "dcb/network.hpp"

namespace dcb::touchstone {

enum class FreqUnit { hz, khz, mhz, ghz };
enum class DataFormat { ri, ma, db };

inline double unit_scale(FreqUnit u) {
    switch (u) {
    case FreqUnit::hz: return 1.0;
    case FreqUnit::khz: return 1e3;
    case FreqUnit::mhz: return 1e6;
    case FreqUnit::ghz: return 1e9;
    }
    return 1.0;
}

inline const char* unit_name(FreqUnit u) {
    switch (u) {
    case FreqUnit::hz: return "HZ";
    case FreqUnit::khz: return "KHZ";
    case FreqUnit::mhz: return "MHZ";
    case FreqUnit::ghz: return "GHZ";
    }
    return "GHZ";
}

inline const char* format_name(DataFormat f) {
    switch (f) {
    case DataFormat::ri: return "RI";
    case DataFormat::ma: return "MA";
    case DataFormat::db: return "DB";
    }
    return "MA";
}

struct Row {
    double freq_hz = 0.0;
    std::vector<cplx> s; // row-major S matrix, n_ports * n_ports entries
};

struct Network {
    int n_ports = 2;
    FreqUnit freq_unit = FreqUnit::ghz;
    DataFormat data_format = DataFormat::ma;
    double z_ref = 50.0;
    std::vector<Row> rows;

    cplx s(std::size_t row, int i, int j) const {
        return rows.at(row).s.at(static_cast<std::size_t>(i * n_ports + j));
    }
};

namespace detail {

inline std::string upper(std::string_view s) {
    std::string r(s);
    std::transform(r.begin(), r.end(), r.begin(), [](unsigned char c) { return std::toupper(c); });
    return r;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

inline double to_number(std::string_view tok, std::size_t line_no) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw parse_error("invalid number '" + std::string(tok) + "'", line_no);
    }
    return v;
}

inline cplx to_complex(double x, double y, DataFormat f) {
    switch (f) {
    case DataFormat::ri: return {x, y};
    case DataFormat::ma: return std::polar(x, y * pi / 180.0);
    case DataFormat::db: return std::polar(std::pow(10.0, x / 20.0), y * pi / 180.0);
    }
    return {};
}

struct DataLine {
    std::size_t line_no;
    std::vector<std::string_view> tokens;
};

inline void parse_option_line(std::string_view body, std::size_t line_no, Network& net) {
    const auto toks = split_ws(body);
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string t = upper(toks[i]);
        if (t == "HZ") {
            net.freq_unit = FreqUnit::hz;
        } else if (t == "KHZ") {
            net.freq_unit = FreqUnit::khz;
        } else if (t == "MHZ") {
            net.freq_unit = FreqUnit::mhz;
        } else if (t == "GHZ") {
            net.freq_unit = FreqUnit::ghz;
        } else if (t == "RI") {
            net.data_format = DataFormat::ri;
        } else if (t == "MA") {
            net.data_format = DataFormat::ma;
        } else if (t == "DB") {
            net.data_format = DataFormat::db;
        } else if (t == "S") {
            // only scattering parameters are supported
        } else if (t == "Y" || t == "Z" || t == "G" || t == "H") {
            throw parse_error("unsupported parameter type '" + std::string(toks[i]) + "'", line_no);
        } else if (t == "R") {
            if (i + 1 >= toks.size()) {
                throw parse_error("malformed option line: 'R' without impedance", line_no);
            }
            net.z_ref = to_number(toks[++i], line_no);
            if (!(net.z_ref > 0.0)) {
                throw parse_error("malformed option line: reference impedance must be positive", line_no);
            }
        } else {
            throw parse_error("malformed option line: unknown token '" + std::string(toks[i]) + "'",
                              line_no);
        }
    }
}

} // namespace detail

// Parse Touchstone v1 text. The port count is taken from `n_ports` when given
// (e.g. from the file extension) and inferred from the data layout otherwise.
inline Network parse(std::string_view text, std::optional<int> n_ports = std::nullopt) {
    if (n_ports && *n_ports != 1 && *n_ports != 2 && *n_ports != 4) {
        throw parse_error("unsupported port count " + std::to_string(*n_ports), 0);
    }
    Network net;
    bool have_option = false;
    std::vector<detail::DataLine> data;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto bang = line.find('!'); bang != std::string_view::npos) {
            line = line.substr(0, bang);
        }
        const auto toks = detail::split_ws(line);
        if (toks.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        if (toks.front().front() == '#') {
            if (!have_option) {
                std::string_view body = line.substr(line.find('#') + 1);
                detail::parse_option_line(body, line_no, net);
                have_option = true;
            }
        } else if (toks.front().front() == '[') {
            throw parse_error("Touchstone v2 keyword lines are not supported", line_no);
        } else {
            if (!have_option) {
                throw parse_error("data before option line (missing '# ...' line)", line_no);
            }
            data.push_back({line_no, toks});
        }
        if (end == text.size()) {
            break;
        }
    }
    if (!have_option) {
        throw parse_error("missing option line", 0);
    }

    int ports = 2;
    if (n_ports) {
        ports = *n_ports;
    } else if (!data.empty()) {
        const std::size_t first = data.front().tokens.size();
        if (first == 3) {
            ports = 1;
        } else if (first == 9 && data.size() > 1 && data[1].tokens.size() == 8) {
            ports = 4;
        } else if (first == 9) {
            ports = 2;
        } else {
            throw parse_error("cannot infer port count from " + std::to_string(first) + " values",
                              data.front().line_no);
        }
    }
    net.n_ports = ports;

    const std::size_t entries = static_cast<std::size_t>(ports * ports);
    const std::size_t per_record = 1 + 2 * entries;
    const double scale = unit_scale(net.freq_unit);

    std::vector<double> values;
    std::size_t record_line = 0;
    auto flush = [&]() {
        Row row;
        row.freq_hz = values[0] * scale;
        row.s.resize(entries);
        for (std::size_t k = 0; k < entries; ++k) {
            row.s[k] = detail::to_complex(values[1 + 2 * k], values[2 + 2 * k], net.data_format);
        }
        if (ports == 2) {
            std::swap(row.s[1], row.s[2]); // file order S11 S21 S12 S22
        }
        if (row.freq_hz < 0.0) {
            throw parse_error("negative frequency", record_line);
        }
        if (!net.rows.empty() && !(row.freq_hz > net.rows.back().freq_hz)) {
            throw parse_error("frequencies must be strictly increasing", record_line);
        }
        net.rows.push_back(std::move(row));
        values.clear();
    };

    for (const auto& dl : data) {
        if (values.empty()) {
            record_line = dl.line_no;
            if (ports < 4 && dl.tokens.size() != per_record) {
                throw parse_error("expected " + std::to_string(per_record) + " values per row, got " +
                                      std::to_string(dl.tokens.size()),
                                  dl.line_no);
            }
        }
        if (values.size() + dl.tokens.size() > per_record) {
            throw parse_error("too many values in record (expected " + std::to_string(per_record) + ")",
                              dl.line_no);
        }
        for (auto tok : dl.tokens) {
            values.push_back(detail::to_number(tok, dl.line_no));
        }
        if (values.size() == per_record) {
            flush();
        }
    }
    if (!values.empty()) {
        throw parse_error("incomplete record: expected " + std::to_string(per_record) + " values, got " +
                              std::to_string(values.size()),
                          record_line);
    }
    return net;
}

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::pair<double, double> from_complex(cplx v, DataFormat f) {
    switch (f) {
    case DataFormat::ri: return {v.real(), v.imag()};
    case DataFormat::ma: return {std::abs(v), std::arg(v) * 180.0 / pi};
    case DataFormat::db: {
        const double m = std::abs(v);
        return {m > 0.0 ? 20.0 * std::log10(m) : -400.0, std::arg(v) * 180.0 / pi};
    }
    }
    return {};
}

} // namespace detail

inline std::string write(const Network& net) {
    std::ostringstream os;
    os << "! generated by dcb\n";
    os << "# " << unit_name(net.freq_unit) << " S " << format_name(net.data_format) << " R "
       << detail::num(net.z_ref) << "\n";
    const double scale = unit_scale(net.freq_unit);
    const int n = net.n_ports;
    for (const Row& row : net.rows) {
        std::vector<cplx> order = row.s;
        if (n == 2) {
            std::swap(order[1], order[2]);
        }
        os << detail::num(row.freq_hz / scale);
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (n == 4 && k > 0 && k % 4 == 0) {
                os << "\n ";
            }
            const auto [x, y] = detail::from_complex(order[k], net.data_format);
            os << ' ' << detail::num(x) << ' ' << detail::num(y);
        }
        os << "\n";
    }
    return os.str();
}

// Port count implied by a file name's .sNp extension, if recognizable.
inline std::optional<int> ports_from_extension(std::string_view path) {
    const auto dot = path.rfind('.');
    if (dot == std::string_view::npos) {
        return std::nullopt;
    }
    const std::string ext = detail::upper(path.substr(dot + 1));
    if (ext == "S1P") return 1;
    if (ext == "S2P") return 2;
    if (ext == "S4P") return 4;
    return std::nullopt;
}

// Two-port rows as tagged scattering matrices.
inline std::vector<TwoPortS> to_two_ports(const Network& net) {
    if (net.n_ports != 2) {
        throw parse_error("expected a 2-port network, got " + std::to_string(net.n_ports) + " ports", 0);
    }
    std::vector<TwoPortS> out;
    out.reserve(net.rows.size());
    for (const Row& r : net.rows) {
        TwoPortS s{CMat2{r.s[0], r.s[1], r.s[2], r.s[3]}, net.z_ref};
        s.freq = r.freq_hz;
        out.push_back(s);
    }
    return out;
}

inline Network from_two_ports(const std::vector<TwoPortS>& pts, FreqUnit unit = FreqUnit::ghz,
                              DataFormat fmt = DataFormat::ri) {
    Network net;
    net.n_ports = 2;
    net.freq_unit = unit;
    net.data_format = fmt;
    net.z_ref = pts.empty() ? 50.0 : pts.front().z0;
    for (const auto& p : pts) {
        net.rows.push_back({p.freq.value_or(0.0), {p.s(0, 0), p.s(0, 1), p.s(1, 0), p.s(1, 1)}});
    }
    return net;
}

} // namespace dcb::touchstone
