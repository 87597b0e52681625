#include "mipd/cli.hpp"

#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mipd/csv.hpp"
#include "mipd/error.hpp"
#include "mipd/io.hpp"
#include "mipd/replica.hpp"
#include "mipd/trajectories.hpp"
#include "mipd/verify.hpp"

namespace mipd::cli {

using nlohmann::json;

double parse_angle(std::string_view text) {
    if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
        const std::string_view factor = text.substr(0, text.size() - 2);
        double f = 1.0;
        if (factor == "-") {
            f = -1.0;
        } else if (!factor.empty() && factor != "+") {
            f = parse_real(factor.front() == '+' ? factor.substr(1) : factor);
        }
        return f * std::numbers::pi;
    }
    return parse_real(text.front() == '+' ? text.substr(1) : text);
}

AxisSpec parse_axis(std::string_view text) {
    const std::vector<std::string> parts = [&] {
        std::vector<std::string> p;
        std::size_t start = 0;
        while (true) {
            const std::size_t colon = text.find(':', start);
            p.emplace_back(text.substr(start, colon - start));
            if (colon == std::string_view::npos) {
                break;
            }
            start = colon + 1;
        }
        return p;
    }();
    if (parts.size() != 3) {
        throw UsageError("range must be start:end:count, got '" + std::string(text) + "'");
    }
    AxisSpec axis;
    axis.start = parse_real(parts[0]);
    axis.end = parse_real(parts[1]);
    try {
        std::size_t used = 0;
        axis.count = std::stoi(parts[2], &used);
        if (used != parts[2].size()) {
            throw std::invalid_argument("trailing");
        }
    } catch (const std::exception &) {
        throw UsageError("range count must be an integer, got '" + parts[2] + "'");
    }
    axis.validate();
    return axis;
}

Direction parse_direction(std::string_view text) {
    if (text == "+1" || text == "1") {
        return Direction::Forward;
    }
    if (text == "-1") {
        return Direction::Backward;
    }
    throw UsageError("--d must be +1 or -1, got '" + std::string(text) + "'");
}

namespace {

// Wraps a parse failure so the message names the offending flag.
template <typename F>
auto with_flag(const char *flag, F &&f) {
    try {
        return f();
    } catch (const UsageError &e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

json real_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json signal_json(const SignalPoint &s) {
    return json{
        {"re_z", s.z.real()},           {"im_z", s.z.imag()}, {"abs_z", std::abs(s.z)},
        {"alpha", real_or_null(s.alpha)}, {"chi_principal", s.chi_principal}, {"defined", s.defined},
    };
}

struct MeasurementFlags {
    std::string strength = "0";
    std::string asymmetry = "0";
    std::string theta = "0";
    std::string direction = "+1";

    void attach(CLI::App *app, bool with_theta = true) {
        app->add_option("--C", strength, "measurement strength C >= 0")->required();
        app->add_option("--A", asymmetry, "asymmetry parameter A")->required();
        if (with_theta) {
            app->add_option("--theta", theta, "polar angle in [0, pi]; accepts '0.75pi'")->required();
        }
        app->add_option("--d", direction, "directionality +1 or -1")->required();
    }

    Measurement parse() const {
        Measurement m;
        m.strength = with_flag("--C", [&] { return parse_real(strength); });
        m.asymmetry = with_flag("--A", [&] { return parse_real(asymmetry); });
        m.theta = with_flag("--theta", [&] { return parse_angle(theta); });
        m.direction = with_flag("--d", [&] { return parse_direction(direction); });
        if (m.strength < 0) {
            throw UsageError("--C: measurement strength must be >= 0");
        }
        if (!(m.theta >= 0.0 && m.theta <= std::numbers::pi)) {
            throw UsageError("--theta: must lie in [0, pi]");
        }
        with_flag("--C/--A", [&] {
            m.validate();
            return 0;
        });
        return m;
    }
};

json measurement_json(const Measurement &m) {
    return json{{"C", m.strength}, {"A", m.asymmetry}, {"theta", m.theta}, {"d", sign(m.direction)}};
}

json axis_json(const AxisSpec &a) { return json{{"start", a.start}, {"end", a.end}, {"count", a.count}}; }

std::string command_line(int argc, const char *const *argv) {
    std::string s;
    for (int i = 1; i < argc; i++) {
        if (i > 1) {
            s += ' ';
        }
        s += argv[i];
    }
    return s;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Measurement-induced phase and dephasing simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    // signal
    MeasurementFlags signal_flags;
    std::optional<int> signal_steps;
    bool signal_asymptotic = false;
    std::string signal_method = "transfer";
    CLI::App *signal_cmd = app.add_subcommand("signal", "evaluate z = exp(2i chi - alpha) at one parameter point");
    signal_flags.attach(signal_cmd);
    auto *n_opt = signal_cmd->add_option("--N", signal_steps, "number of generalized measurements (finite-N mode)");
    auto *asym_opt = signal_cmd->add_flag("--asymptotic", signal_asymptotic, "N -> infinity via exp(Lambda)");
    n_opt->excludes(asym_opt);
    signal_cmd->add_option("--method", signal_method, "finite-N method: transfer | brute")
        ->check(CLI::IsMember({"transfer", "brute"}));

    // scan
    MeasurementFlags scan_flags;
    std::string scan_c_axis, scan_a_axis, scan_out;
    CLI::App *scan_cmd = app.add_subcommand("scan", "asymptotic signal over a (C, A) grid");
    scan_cmd->add_option("--C", scan_c_axis, "strength axis start:end:count")->required();
    scan_cmd->add_option("--A", scan_a_axis, "asymmetry axis start:end:count")->required();
    scan_cmd->add_option("--theta", scan_flags.theta, "polar angle")->required();
    scan_cmd->add_option("--d", scan_flags.direction, "directionality +1 or -1")->required();
    scan_cmd->add_option("--out", scan_out, "output CSV path")->required();

    // winding / curve
    MeasurementFlags wind_flags;
    int wind_resolution = 256;
    CLI::App *wind_cmd = app.add_subcommand("winding", "winding number of the unwrapped phase over theta");
    wind_flags.attach(wind_cmd, false);
    wind_cmd->add_option("--resolution", wind_resolution, "initial theta samples (>= 64)");

    MeasurementFlags curve_flags;
    int curve_resolution = 256;
    std::string curve_out;
    CLI::App *curve_cmd = app.add_subcommand("curve", "unwrapped phase curve chi(theta)");
    curve_flags.attach(curve_cmd, false);
    curve_cmd->add_option("--resolution", curve_resolution, "initial theta samples (>= 64)");
    curve_cmd->add_option("--out", curve_out, "output CSV path")->required();

    // critical
    std::string crit_a, crit_d = "+1", crit_seed_c, crit_seed_theta, crit_theta, crit_seed_a, crit_out;
    CLI::App *crit_cmd = app.add_subcommand("critical", "locate or trace zeros of z (critical line)");
    crit_cmd->add_option("--A", crit_a, "fixed A, or start:end to trace the line in A");
    crit_cmd->add_option("--d", crit_d, "directionality +1 or -1");
    crit_cmd->add_option("--seed-C", crit_seed_c, "initial guess for C")->required();
    crit_cmd->add_option("--seed-theta", crit_seed_theta, "initial guess for theta (fixed-A mode)");
    crit_cmd->add_option("--theta", crit_theta, "fixed theta (dual mode, solves for C and A)");
    crit_cmd->add_option("--seed-A", crit_seed_a, "initial guess for A (dual mode)");
    crit_cmd->add_option("--out", crit_out, "output CSV path (stdout when omitted)");

    // sample
    MeasurementFlags sample_flags;
    int sample_steps = 0;
    std::uint64_t sample_shots = 10000;
    std::uint64_t sample_seed = 1;
    std::string sample_log;
    CLI::App *sample_cmd = app.add_subcommand("sample", "Monte Carlo estimate of z from simulated trajectories");
    sample_flags.attach(sample_cmd);
    sample_cmd->add_option("--N", sample_steps, "number of generalized measurements")->required();
    sample_cmd->add_option("--shots", sample_shots, "number of trajectories");
    sample_cmd->add_option("--seed", sample_seed, "master seed");
    sample_cmd->add_option("--log", sample_log, "per-trajectory CSV log path");

    // verify
    VerifyOptions verify_opts;
    CLI::App *verify_cmd = app.add_subcommand("verify", "run the bundled invariant suite");
    verify_cmd->add_option("--seed", verify_opts.seed, "seed for random parameter draws");
    verify_cmd->add_option("--samples", verify_opts.samples, "random points per check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::string cmdline = command_line(argc, argv);
    try {
        if (signal_cmd->parsed()) {
            const Measurement m = signal_flags.parse();
            json j = measurement_json(m);
            SignalPoint s;
            if (signal_steps) {
                if (*signal_steps < 1) {
                    throw UsageError("--N: must be >= 1");
                }
                j["mode"] = "finite";
                j["N"] = *signal_steps;
                j["method"] = signal_method;
                s = signal_method == "brute" ? brute_force_signal(m, *signal_steps) : transfer_signal(m, *signal_steps);
            } else {
                j["mode"] = "asymptotic";
                s = asymptotic_signal(m);
            }
            j.update(signal_json(s));
            out << j.dump() << '\n';
        } else if (scan_cmd->parsed()) {
            const AxisSpec c_axis = with_flag("--C", [&] { return parse_axis(scan_c_axis); });
            const AxisSpec a_axis = with_flag("--A", [&] { return parse_axis(scan_a_axis); });
            if (c_axis.start < 0) {
                throw UsageError("--C: strength axis must start at >= 0");
            }
            scan_flags.strength = "0";
            const Measurement m = scan_flags.parse();
            const ScanGrid grid = scan_grid(c_axis, a_axis, m.theta, m.direction);
            RunManifest man;
            man.command = cmdline;
            man.params = json{{"theta", m.theta}, {"d", sign(m.direction)}, {"mode", "asymptotic"}};
            man.axes = json{{"C", axis_json(c_axis)}, {"A", axis_json(a_axis)}};
            man = write_data_file(scan_out, scan_csv(grid), man);
            out << json{{"rows", grid.cells.size()}, {"out", scan_out}, {"sha256", man.output_sha256}}.dump() << '\n';
        } else if (wind_cmd->parsed()) {
            const Measurement m = wind_flags.parse();
            const PhaseCurve curve = unwrap_phase(m.strength, m.asymmetry, m.direction, wind_resolution);
            if (!curve.winding) {
                throw IllDefinedPathError("winding not integral");
            }
            json j = measurement_json(m);
            j.erase("theta");
            j["winding"] = *curve.winding;
            j["chi_end"] = curve.chi_unwrapped.back();
            j["samples"] = curve.theta.size();
            out << j.dump() << '\n';
        } else if (curve_cmd->parsed()) {
            const Measurement m = curve_flags.parse();
            const PhaseCurve curve = unwrap_phase(m.strength, m.asymmetry, m.direction, curve_resolution);
            RunManifest man;
            man.command = cmdline;
            man.params = measurement_json(m);
            man.params.erase("theta");
            man.params["resolution"] = curve_resolution;
            man.axes = json{{"theta", {{"start", 0.0}, {"end", std::numbers::pi}, {"count", curve.theta.size()}}}};
            man = write_data_file(curve_out, curve_csv(curve), man);
            json j{{"rows", curve.theta.size()}, {"out", curve_out}, {"sha256", man.output_sha256}};
            j["winding"] = curve.winding ? json(*curve.winding) : json(nullptr);
            out << j.dump() << '\n';
        } else if (crit_cmd->parsed()) {
            const Direction d = with_flag("--d", [&] { return parse_direction(crit_d); });
            const double seed_c = with_flag("--seed-C", [&] { return parse_real(crit_seed_c); });
            std::vector<CriticalPoint> points;
            std::optional<CriticalLine::Stop> stop;
            json params{{"d", sign(d)}, {"seed_C", seed_c}};
            if (!crit_theta.empty()) {
                if (crit_seed_a.empty()) {
                    throw UsageError("--seed-A: required with --theta (dual mode)");
                }
                const double th = with_flag("--theta", [&] { return parse_angle(crit_theta); });
                const double seed_a = with_flag("--seed-A", [&] { return parse_real(crit_seed_a); });
                if (!(th >= 0 && th <= std::numbers::pi)) {
                    throw UsageError("--theta: must lie in [0, pi]");
                }
                params["theta"] = th;
                params["seed_A"] = seed_a;
                points.push_back(find_critical_point_at_theta(seed_c, seed_a, th, d));
            } else {
                if (crit_a.empty() || crit_seed_theta.empty()) {
                    throw UsageError("--A and --seed-theta: required in fixed-A mode");
                }
                const double seed_t = with_flag("--seed-theta", [&] { return parse_angle(crit_seed_theta); });
                params["seed_theta"] = seed_t;
                const std::size_t colon = crit_a.find(':');
                if (colon == std::string::npos) {
                    const double a = with_flag("--A", [&] { return parse_real(crit_a); });
                    params["A"] = a;
                    points.push_back(find_critical_point(seed_c, seed_t, a, d));
                } else {
                    const double a0 = with_flag("--A", [&] { return parse_real(crit_a.substr(0, colon)); });
                    const double a1 = with_flag("--A", [&] { return parse_real(crit_a.substr(colon + 1)); });
                    params["A_start"] = a0;
                    params["A_end"] = a1;
                    CriticalLine line = trace_critical_line(a0, a1, d, seed_c, seed_t);
                    points = std::move(line.points);
                    stop = line.stop;
                }
            }
            const std::string csv = critical_csv(points);
            if (crit_out.empty()) {
                out << csv;
            } else {
                RunManifest man;
                man.command = cmdline;
                man.params = params;
                write_data_file(crit_out, csv, man);
                out << json{{"rows", points.size()}, {"out", crit_out}}.dump() << '\n';
            }
            if (stop && *stop != CriticalLine::Stop::RangeEnd) {
                const CriticalPoint &last = points.back();
                err << "continuation stopped (" << stop_name(*stop) << ") at A=" << last.asymmetry
                    << " C=" << last.strength << " theta=" << last.theta << '\n';
                return kExitNumeric;
            }
        } else if (sample_cmd->parsed()) {
            const Measurement m = sample_flags.parse();
            if (sample_steps < 1) {
                throw UsageError("--N: must be >= 1");
            }
            if (sample_shots < 1) {
                throw UsageError("--shots: must be >= 1");
            }
            std::vector<TrajectoryRecord> records;
            const McEstimate est = estimate_signal(m, sample_steps, sample_shots, sample_seed, default_thread_count(),
                                                   sample_log.empty() ? nullptr : &records);
            if (!sample_log.empty()) {
                std::ostringstream log;
                write_trajectory_log(log, records);
                RunManifest man;
                man.command = cmdline;
                man.params = measurement_json(m);
                man.params["N"] = sample_steps;
                man.params["shots"] = sample_shots;
                man.seed = sample_seed;
                write_data_file(sample_log, log.str(), man);
            }
            json j = measurement_json(m);
            j["N"] = sample_steps;
            j.update(json{{"re_z_hat", est.z_hat.real()},
                          {"im_z_hat", est.z_hat.imag()},
                          {"stderr_re", est.stderr_re},
                          {"stderr_im", est.stderr_im},
                          {"shots", est.shots},
                          {"accept_rate", est.accept_rate},
                          {"seed", est.seed}});
            out << j.dump() << '\n';
        } else if (verify_cmd->parsed()) {
            if (verify_opts.samples < 1) {
                throw UsageError("--samples: must be >= 1");
            }
            const auto results = run_invariant_suite(verify_opts);
            const bool ok = print_report(out, results);
            if (!ok) {
                for (const auto &r : results) {
                    if (!r.passed) {
                        err << "verify failed: " << r.name << '\n';
                        break;
                    }
                }
                return kExitNumeric;
            }
        }
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError &e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const NumericError &e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}

}  // namespace mipd::cli
