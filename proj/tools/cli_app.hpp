#pragma once

// Batch front end: sweep, contour, metrics, deembed, synth-cal.
//
// Exit codes: 0 success, 1 usage, 2 input/parse, 3 numerical.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dcb/dcb.hpp"

namespace dcb::cli {

enum exit_code : int { ok = 0, usage = 1, input = 2, numerical = 3 };

// Bad flag combination or value detected after CLI11 parsing.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable input or unwritable output.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write every file to a sibling temp path first, then rename them all.
inline void commit_files(const std::vector<std::pair<std::string, std::string>>& files) {
    namespace fs = std::filesystem;
    std::vector<std::pair<fs::path, fs::path>> staged;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& s : staged) {
            fs::remove(s.first, ec);
        }
    };
    for (const auto& [path, text] : files) {
        const fs::path target(path);
        fs::path tmp = target;
        tmp += ".tmp";
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            cleanup();
            throw io_error("cannot write '" + path + "'");
        }
        staged.emplace_back(tmp, target);
        out << text;
        out.close();
        if (!out) {
            cleanup();
            throw io_error("write failed for '" + path + "'");
        }
    }
    for (const auto& [tmp, target] : staged) {
        std::error_code ec;
        fs::rename(tmp, target, ec);
        if (ec) {
            cleanup();
            throw io_error("cannot rename into '" + target.string() + "': " + ec.message());
        }
    }
}

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline DcBlockerParams load_design(const std::string& config, const std::string& preset) {
    if (config.empty() == preset.empty()) {
        throw usage_error("exactly one of --config or --preset is required");
    }
    if (!preset.empty()) {
        if (preset == "table1") return table1_params();
        if (preset == "table2") return table2_params();
        throw usage_error("unknown preset '" + preset + "' (expected table1 or table2)");
    }
    return parse_design_config(read_file(config));
}

inline void check_grid(double fmin, double fmax, std::size_t points) {
    if (!(fmin > 0.0)) {
        throw usage_error("--fmin must be positive");
    }
    if (!(fmax > fmin)) {
        throw usage_error("--fmax must exceed --fmin");
    }
    if (points < 2) {
        throw usage_error("--points must be at least 2");
    }
}

inline touchstone::Network read_s2p(const std::string& path) {
    try {
        const auto net = touchstone::parse(read_file(path), touchstone::ports_from_extension(path).value_or(2));
        if (net.n_ports != 2) {
            throw parse_error("expected a 2-port file", 0);
        }
        return net;
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what(), 0);
    }
}

// Fixture made of a few mismatched line sections; lengths scale with frequency.
struct Fixture {
    std::vector<double> z_line;
    std::vector<double> theta_ref; // rad at fref
    std::vector<double> loss_ref;  // nepers at fref
};

inline Fixture random_fixture(Rng& rng, int sections) {
    Fixture fx;
    for (int i = 0; i < sections; ++i) {
        fx.z_line.push_back(rng.uniform(30.0, 80.0));
        fx.theta_ref.push_back(deg_to_rad(rng.uniform(20.0, 80.0)));
        fx.loss_ref.push_back(rng.uniform(0.0, 0.05));
    }
    return fx;
}

inline TwoPortS fixture_s(const Fixture& fx, double f_ratio, double z0) {
    TwoPortS acc = line_section_s(fx.z_line[0], fx.theta_ref[0] * f_ratio,
                                  fx.loss_ref[0] * std::sqrt(f_ratio), z0);
    for (std::size_t i = 1; i < fx.z_line.size(); ++i) {
        acc = cascade_s(acc, line_section_s(fx.z_line[i], fx.theta_ref[i] * f_ratio,
                                            fx.loss_ref[i] * std::sqrt(f_ratio), z0));
    }
    return acc;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coupled-line DC-blocker analysis and Through-Line de-embedding", "dcb"};
    app.require_subcommand(1, 1);

    // sweep
    std::string sw_config, sw_preset, sw_out;
    double sw_fmin = 0.0, sw_fmax = 0.0;
    std::size_t sw_points = 1001;
    auto* sweep_cmd = app.add_subcommand("sweep", "Differential/common-mode sweep to CSV");
    auto* sw_cfg_opt = sweep_cmd->add_option("--config", sw_config, "design file");
    sweep_cmd->add_option("--preset", sw_preset, "table1 or table2")->excludes(sw_cfg_opt);
    sweep_cmd->add_option("--fmin", sw_fmin, "lowest f/f0")->required();
    sweep_cmd->add_option("--fmax", sw_fmax, "highest f/f0")->required();
    sweep_cmd->add_option("--points", sw_points, "grid size")->capture_default_str();
    sweep_cmd->add_option("--out", sw_out, "output CSV")->required();

    // contour
    std::vector<double> ct_cr, ct_zr;
    std::size_t ct_points = 401;
    std::string ct_out;
    auto* contour_cmd = app.add_subcommand("contour", "Single-stage |S11| versus theta/pi to CSV");
    contour_cmd->add_option("--cr", ct_cr, "coupling ratios")->required()->delimiter(',');
    contour_cmd->add_option("--zratio", ct_zr, "Z0/Z_CL ratios")->required()->delimiter(',');
    contour_cmd->add_option("--points", ct_points, "theta samples in (0, pi)")->capture_default_str();
    contour_cmd->add_option("--out", ct_out, "output CSV")->required();

    // metrics
    std::string mt_config, mt_preset;
    double mt_threshold = 10.0, mt_fmin = 0.05, mt_fmax = 1.95;
    std::size_t mt_points = 1901;
    auto* metrics_cmd = app.add_subcommand("metrics", "Return-loss band edges and relative bandwidth");
    auto* mt_cfg_opt = metrics_cmd->add_option("--config", mt_config, "design file");
    metrics_cmd->add_option("--preset", mt_preset, "table1 or table2")->excludes(mt_cfg_opt);
    metrics_cmd->add_option("--threshold-db", mt_threshold, "return-loss threshold")->capture_default_str();
    metrics_cmd->add_option("--fmin", mt_fmin, "lowest f/f0")->capture_default_str();
    metrics_cmd->add_option("--fmax", mt_fmax, "highest f/f0")->capture_default_str();
    metrics_cmd->add_option("--points", mt_points, "grid size")->capture_default_str();

    // deembed
    std::string de_through, de_line, de_test, de_out;
    double de_line_deg = 0.0, de_fref = 0.0;
    auto* deembed_cmd = app.add_subcommand("deembed", "Through-Line calibration and de-embedding");
    deembed_cmd->add_option("--through", de_through, "through standard (.s2p)")->required();
    deembed_cmd->add_option("--line", de_line, "line standard (.s2p)")->required();
    deembed_cmd->add_option("--test", de_test, "fixture + DUT measurement (.s2p)")->required();
    deembed_cmd->add_option("--line-deg", de_line_deg, "line length in degrees at fref")->required();
    deembed_cmd->add_option("--fref", de_fref, "reference frequency in Hz")->required();
    deembed_cmd->add_option("--out", de_out, "de-embedded DUT (.s2p)")->required();

    // synth-cal
    std::uint64_t sc_seed = 1;
    std::string sc_dir;
    auto* synth_cmd = app.add_subcommand("synth-cal", "Synthetic Through/Line/Test set with ground truth");
    synth_cmd->add_option("--seed", sc_seed, "generator seed")->required();
    synth_cmd->add_option("--out-dir", sc_dir, "output directory")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    }

    try {
        if (*sweep_cmd) {
            const DcBlockerParams p = detail::load_design(sw_config, sw_preset);
            detail::check_grid(sw_fmin, sw_fmax, sw_points);
            const auto grid = linear_grid(sw_fmin, sw_fmax, sw_points);
            detail::commit_files({{sw_out, write_sweep_csv(sweep(p, grid))}});
        } else if (*contour_cmd) {
            if (ct_points < 1) {
                throw usage_error("--points must be at least 1");
            }
            std::vector<double> thetas;
            for (std::size_t i = 1; i <= ct_points; ++i) {
                thetas.push_back(pi * static_cast<double>(i) / static_cast<double>(ct_points + 1));
            }
            const auto curves = single_stage_contour(ct_cr, ct_zr, thetas);
            detail::commit_files({{ct_out, write_contour_csv(curves)}});
        } else if (*metrics_cmd) {
            const DcBlockerParams p = detail::load_design(mt_config, mt_preset);
            detail::check_grid(mt_fmin, mt_fmax, mt_points);
            if (!(mt_threshold > 0.0)) {
                throw usage_error("--threshold-db must be positive");
            }
            const SweepResult s = sweep(p, linear_grid(mt_fmin, mt_fmax, mt_points));
            const Band band = bandwidth_metric(s, mt_threshold);
            const Band span = passband_span(s, mt_threshold);
            out << "threshold_db " << detail::num(mt_threshold) << "\n";
            if (band.empty()) {
                out << "f1 none\nf2 none\nrel_bw 0\nmin_cmrr_db none\n";
            } else {
                out << "f1 " << detail::num(band.f1) << "\n"
                    << "f2 " << detail::num(band.f2) << "\n"
                    << "rel_bw " << detail::num(band.rel_bw) << "\n"
                    << "min_cmrr_db " << detail::num(min_cmrr_in_band(s, band)) << "\n";
            }
            if (span.empty()) {
                out << "span_f1 none\nspan_f2 none\nspan_rel_bw 0\n";
            } else {
                out << "span_f1 " << detail::num(span.f1) << "\n"
                    << "span_f2 " << detail::num(span.f2) << "\n"
                    << "span_rel_bw " << detail::num(span.rel_bw) << "\n";
            }
        } else if (*deembed_cmd) {
            if (!(de_fref > 0.0)) {
                throw usage_error("--fref must be positive");
            }
            const auto through_net = detail::read_s2p(de_through);
            const auto line_net = detail::read_s2p(de_line);
            const auto test_net = detail::read_s2p(de_test);
            const auto through = touchstone::to_two_ports(through_net);
            const auto line = touchstone::to_two_ports(line_net);
            const auto test = touchstone::to_two_ports(test_net);
            std::vector<double> thetas;
            for (const auto& s : through) {
                thetas.push_back(deg_to_rad(de_line_deg) * (*s.freq / de_fref));
            }
            const ErrorBox eb = extract_error_box(make_cal_set(through, line, thetas));
            for (const auto& w : eb.warnings) {
                err << "warning: " << w << "\n";
            }
            const auto dut = deembed(test, eb);
            detail::commit_files(
                {{de_out, touchstone::write(touchstone::from_two_ports(dut, test_net.freq_unit,
                                                                       touchstone::DataFormat::ri))}});
        } else if (*synth_cmd) {
            constexpr double fref = 5e9;
            constexpr double line_deg = 90.0;
            constexpr double z0 = 50.0;
            constexpr std::size_t n = 121;
            Rng rng(sc_seed);
            const detail::Fixture fx = detail::random_fixture(rng, 3);

            DcBlockerParams dut_p = table1_params();
            dut_p.f0 = fref;
            const auto ratios = linear_grid(0.4, 1.6, n);
            std::vector<double> freqs, thetas;
            std::vector<TwoPortT> t_x;
            std::vector<TwoPortS> s_dut;
            for (double r : ratios) {
                freqs.push_back(r * fref);
                thetas.push_back(deg_to_rad(line_deg) * r);
                t_x.push_back(t_from_s(detail::fixture_s(fx, r, z0)));
                TwoPortS d = diff_mode_s(dut_p, r);
                d.freq = r * fref;
                s_dut.push_back(d);
            }
            const SyntheticCal syn = synth_cal_data(freqs, t_x, thetas, s_dut);
            std::vector<TwoPortS> through, line;
            for (const auto& p : syn.cal.points) {
                through.push_back(p.through);
                line.push_back(p.line);
            }
            auto s2p = [](const std::vector<TwoPortS>& v) {
                return touchstone::write(
                    touchstone::from_two_ports(v, touchstone::FreqUnit::ghz, touchstone::DataFormat::ri));
            };
            std::ostringstream cal;
            cal << "# synthetic Through-Line set; pass these to deembed\n"
                << "seed = " << sc_seed << "\n"
                << "line_deg = " << detail::num(line_deg) << "\n"
                << "fref_hz = " << detail::num(fref) << "\n";

            std::error_code ec;
            std::filesystem::create_directories(sc_dir, ec);
            if (ec) {
                throw io_error("cannot create '" + sc_dir + "': " + ec.message());
            }
            const std::filesystem::path dir(sc_dir);
            detail::commit_files({{(dir / "through.s2p").string(), s2p(through)},
                                  {(dir / "line.s2p").string(), s2p(line)},
                                  {(dir / "test.s2p").string(), s2p(syn.test)},
                                  {(dir / "dut.s2p").string(), s2p(s_dut)},
                                  {(dir / "cal.txt").string(), cal.str()}});
        }
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const numerical_error& e) {
        err << "numerical error: " << e.what() << "\n";
        return numerical;
    } catch (const io_error& e) {
        err << "input error: " << e.what() << "\n";
        return input;
    } catch (const dcb::error& e) {
        err << "input error: " << e.what() << "\n";
        return input;
    }
    return ok;
}

} // namespace dcb::cli
