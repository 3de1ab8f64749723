// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
// AC1..AC8 drive the library against the shipped pallet fixture; AC9 runs
// the CLI binary end to end and compares its output against the committed
// golden reports.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "locreq/commands.hpp"
#include "locreq/config.hpp"
#include "locreq/engine.hpp"
#include "locreq/simulate.hpp"

using namespace locreq;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& message) {
    if (!cond) throw CheckFailure(message);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ProjectConfig load_fixture(const std::string& name) {
    return parse_config(read_file(std::string(LOCREQ_FIXTURE_DIR) + "/" + name));
}

struct CliRun {
    int exit_code = -1;
    std::string output;
};

CliRun run_cli(const std::string& args) {
    const std::string cmd = std::string(LOCREQ_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    require(pipe != nullptr, "popen failed for: " + cmd);
    CliRun run;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) run.output.append(buf, n);
    const int status = pclose(pipe);
    run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return run;
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

// ---------------------------------------------------------------------------

std::string ac1_table_rows() {
    const auto start = std::chrono::steady_clock::now();
    const Report report = cmd_tabulate(load_fixture("pallet_booking.json"));
    const double elapsed = ms_since(start);

    require(report.tradeoff.has_value(), "tabulate produced no table");
    const TradeoffTable& t = *report.tradeoff;
    require(t.columns.size() == 6, "expected six grid columns");
    const double x_row[] = {0.29, 0.28, 0.27, 0.26, 0.25, 0.24};
    const double y_row[] = {0.43, 0.36, 0.29, 0.22, 0.15, 0.08};
    for (std::size_t i = 0; i < 6; ++i) {
        const auto& x = t.columns[i].budget[axis_index(Axis::x)];
        const auto& y = t.columns[i].budget[axis_index(Axis::y)];
        require(x && std::fabs(*x - x_row[i]) <= 0.005, "x-row mismatch at column " + std::to_string(i));
        require(y && std::fabs(*y - y_row[i]) <= 0.005, "y-row mismatch at column " + std::to_string(i));
    }
    require(elapsed < 1000.0, "tabulate took too long");
    char note[64];
    std::snprintf(note, sizeof note, "x/y rows reproduced in %.0f ms", elapsed);
    return note;
}

std::string ac2_z_row_annotation() {
    const Report report = cmd_tabulate(load_fixture("pallet_booking.json"));
    require(report.tradeoff.has_value(), "tabulate produced no table");
    const double z_row[] = {0.14, 0.13, 0.12, 0.11, 0.10, 0.09};
    for (std::size_t i = 0; i < 6; ++i) {
        const auto& z = report.tradeoff->columns[i].budget[axis_index(Axis::z)];
        require(z && std::fabs(*z - z_row[i]) <= 0.005, "z-row mismatch at column " + std::to_string(i));
    }
    bool annotated = false;
    for (const std::string& w : report.warnings) {
        annotated = annotated || (w.find("v_z = 0.05") != std::string::npos &&
                                  w.find("0.15, 0.14, 0.13, 0.13, 0.12, 0.12") != std::string::npos);
    }
    require(annotated, "missing z-row discrepancy warning");
    return "computed z-row reported with the v_z = 0.05 annotation";
}

std::string ac3_headline_budgets() {
    const Report report = cmd_derive(load_fixture("pallet_booking.json"));
    require(report.derive.has_value(), "derive produced no requirements");
    const MarginVector& b = report.derive->req.accuracy_budget_at_interest_frame;
    require(std::fabs(b[Axis::x] - 0.25) <= 0.005, "x budget is not 0.25");
    require(std::fabs(b[Axis::y] - 0.15) <= 0.005, "y budget is not 0.15");
    require(report.derive->req.time_gap_s == 0.5, "time gap is not 0.5 s");
    return "budgets at 2 Hz: x = 0.25 m, y = 0.15 m";
}

std::string ac4_conservativeness() {
    const ProjectConfig cfg = load_fixture("pallet_booking.json");
    const auto start = std::chrono::steady_clock::now();

    const DataRequirements req =
        derive_requirements(cfg.function, UpdateModel::periodic(2.0), 0.0);
    const MarginVector& budgets = req.accuracy_budget_at_interest_frame;
    const SimConfig sim_cfg = make_worst_case_config(cfg.function, UpdateModel::periodic(2.0),
                                                     0.0, budgets, 1100, 20240817);
    const SimReport report = run_simulation(sim_cfg);
    const double elapsed = ms_since(start);

    require(report.updates_classified >= 100000,
            "need at least 100000 classified updates, got " +
                std::to_string(report.updates_classified));
    const double n = static_cast<double>(report.updates_classified);
    const double bound = 0.0062 + 3.0 * std::sqrt(0.0062 * 0.9938 / n);
    for (Axis a : cfg.function.dof.axes()) {
        require(report.rate_at(a) <= bound,
                std::string("rate on axis ") + std::string(axis_name(a)) + " exceeds the bound");
    }
    require(elapsed < 10000.0, "experiment took too long");

    // Negative control: doubling the y-axis noise must break the bound.
    SimConfig doubled = sim_cfg;
    doubled.noise.y *= 2.0;
    const SimReport control = run_simulation(doubled);
    require(control.rate_at(Axis::y) > bound, "negative control failed to exceed the bound");

    char note[128];
    std::snprintf(note, sizeof note,
                  "N=%llu, max rate %.5f <= bound %.5f, control rate %.4f, %.0f ms",
                  static_cast<unsigned long long>(report.updates_classified),
                  std::max({report.rate_at(Axis::x), report.rate_at(Axis::y),
                            report.rate_at(Axis::z)}),
                  bound, control.rate_at(Axis::y), elapsed);
    return note;
}

std::string ac5_perfect_system() {
    const ProjectConfig cfg = load_fixture("pallet_booking.json");
    const LocalizationFunctionSpec& spec = cfg.function;
    std::mt19937_64 gen(20240805);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    std::uint64_t total_false = 0;
    std::uint64_t total_updates = 0;
    for (int traj = 0; traj < 1000; ++traj) {
        std::vector<Waypoint> wps;
        double t = 0.0;
        auto sample = [&](Axis a) {
            const AxisInterval& iv = spec.motion_space.interval(a);
            return iv.lo + u01(gen) * iv.width();
        };
        Pose prev{sample(Axis::x), sample(Axis::y), sample(Axis::z), 0.0};
        wps.push_back({t, prev});
        for (int seg = 0; seg < 4; ++seg) {
            const Pose next{sample(Axis::x), sample(Axis::y), sample(Axis::z), 0.0};
            double min_dt = 0.05;
            for (Axis a : spec.dof.axes()) {
                const double v = spec.max_velocity.at(a);
                if (v > 0.0)
                    min_dt = std::max(min_dt, std::fabs(next.coord(a) - prev.coord(a)) / v);
            }
            t += min_dt * 1.25;
            wps.push_back({t, next});
            prev = next;
        }
        const SimConfig sim_cfg{spec,          NoiseModel{}, UpdateModel::periodic(10.0), 0.0,
                                Trajectory(std::move(wps)),  1, 7};
        const SimReport report = run_simulation(sim_cfg);
        total_updates += report.updates_classified;
        total_false += report.false_outside_joint_count;
    }
    require(total_updates > 0, "no updates simulated");
    require(total_false == 0,
            "saw " + std::to_string(total_false) + " false events from a perfect system");
    return std::to_string(total_updates) + " classified updates, zero false events";
}

std::string ac6_calibration() {
    const double z95 = two_sided_z(0.95);
    require(std::fabs(z95 - 1.959964) <= 1e-6, "two_sided_z(0.95) off");

    const double p = 0.25, c = 0.9938;
    const double sigma = calibrate_sigma(p, c);
    Xoshiro256pp rng = Xoshiro256pp::for_stream(271828, 0);
    const int n = 1000000;
    int within = 0;
    for (int i = 0; i < n; ++i)
        if (std::fabs(rng.gaussian(sigma)) <= p) ++within;
    const double freq = static_cast<double>(within) / n;
    const double se = std::sqrt(c * (1.0 - c) / n);
    require(std::fabs(freq - c) <= 4.0 * se, "empirical quantile outside 4 standard errors");
    char note[96];
    std::snprintf(note, sizeof note, "empirical retention %.5f vs %.4f (4 SE = %.5f)", freq, c,
                  4.0 * se);
    return note;
}

std::string ac7_six_sigma_anchor() {
    require(std::fabs(confidence_from_sigma(4.0) - 0.9938) <= 1e-4,
            "4-sigma retention is not 0.9938");
    double prev = 0.0;
    for (double s : {2.0, 3.0, 4.0, 5.0, 6.0}) {
        const double r = confidence_from_sigma(s);
        require(r > prev, "retention not strictly increasing at sigma " + std::to_string(s));
        prev = r;
    }
    return "confidence_from_sigma(4) = 0.9938, strictly monotone on {2..6}";
}

std::string ac8_property_suites() {
    std::mt19937_64 gen(97);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const DofMask xyz = DofMask::of({Axis::x, Axis::y, Axis::z});

    // (a) budget solving is antitone in time gap, delay, and velocity.
    for (int i = 0; i < 10000; ++i) {
        const MarginVector r(xyz, {0.5 + u(gen), 0.5 + u(gen), 0.5 + u(gen), 0});
        const VelocityBound v{u(gen), u(gen), u(gen), 0};
        const double tg = 0.2 * u(gen), td = 0.2 * u(gen);
        const MarginVector base = solve_accuracy_budget(r, v, tg, td);
        const MarginVector more_gap = solve_accuracy_budget(r, v, tg + 0.05 * u(gen), td);
        const MarginVector more_delay = solve_accuracy_budget(r, v, tg, td + 0.05 * u(gen));
        const VelocityBound faster{v.x + 0.05 * u(gen), v.y + 0.05 * u(gen),
                                   v.z + 0.05 * u(gen), 0};
        const MarginVector more_speed = solve_accuracy_budget(r, faster, tg, td);
        for (Axis a : xyz.axes()) {
            require(more_gap[a] <= base[a] + 1e-12, "(a) not antitone in time gap");
            require(more_delay[a] <= base[a] + 1e-12, "(a) not antitone in delay");
            require(more_speed[a] <= base[a] + 1e-12, "(a) not antitone in velocity");
        }
    }

    // (b) requirement margin is antitone in safety margin and motion size.
    const DofMask x_only = DofMask::of({Axis::x});
    for (int i = 0; i < 10000; ++i) {
        AxisSpace interest;
        interest.set(Axis::x, 0.0, 10.0);
        const double lo = 2.0 + u(gen), hi = 7.0 - u(gen);
        AxisSpace motion;
        motion.set(Axis::x, lo, hi);
        const double s = u(gen);
        const MarginVector base =
            requirement_margin(interest, motion, MarginVector(x_only, {s, 0, 0, 0}), x_only);
        const MarginVector more_safety = requirement_margin(
            interest, motion, MarginVector(x_only, {s + 0.5 * u(gen), 0, 0, 0}), x_only);
        AxisSpace larger;
        larger.set(Axis::x, lo - u(gen), hi + u(gen));
        const MarginVector grown =
            requirement_margin(interest, larger, MarginVector(x_only, {s, 0, 0, 0}), x_only);
        require(more_safety[Axis::x] <= base[Axis::x] + 1e-12, "(b) not antitone in safety");
        require(grown[Axis::x] <= base[Axis::x] + 1e-12, "(b) not antitone in motion size");
    }

    // (c) chord below arc length and monotone on [0, pi].
    for (int i = 0; i < 10000; ++i) {
        const double r1 = 5.0 * u(gen), r2 = 5.0 * u(gen);
        const double a1 = kPi * u(gen), a2 = kPi * u(gen);
        require(lever_arm_chord(r1, a1) <= r1 * a1 + 1e-12, "(c) chord above arc");
        require(lever_arm_chord(std::min(r1, r2), a1) <=
                    lever_arm_chord(std::max(r1, r2), a1) + 1e-12,
                "(c) not monotone in radius");
        require(lever_arm_chord(r1, std::min(a1, a2)) <=
                    lever_arm_chord(r1, std::max(a1, a2)) + 1e-12,
                "(c) not monotone in angle");
    }

    // (d) identity transform leaves the percentiles untouched.
    for (int i = 0; i < 10000; ++i) {
        const ErrorPercentiles p(u(gen), u(gen), u(gen), u(gen),
                                 ConfidenceLevel::percentile(0.5 + 0.49 * u(gen)));
        const MarginVector u_s = static_uncertainty(p, RigidTransform{});
        require(u_s[Axis::x] == p.x && u_s[Axis::y] == p.y && u_s[Axis::z] == p.z &&
                    u_s[Axis::yaw] == p.yaw,
                "(d) identity transform changed the percentiles");
    }

    // (e) simulation determinism: identical configs, identical bytes.
    const ProjectConfig cfg = load_fixture("pallet_booking.json");
    const CommandResult first = cmd_simulate(cfg);
    const CommandResult second = cmd_simulate(cfg);
    const std::string bytes1 = render_report(first.report, ReportFormat::json);
    const std::string bytes2 = render_report(second.report, ReportFormat::json);
    require(bytes1 == bytes2, "(e) repeated simulation reports differ");
    require(first.report.simulation->sim == second.report.simulation->sim,
            "(e) repeated simulation statistics differ");

    return "suites (a)-(e) hold on 10000-instance randomizations";
}

std::string ac9_golden_files() {
    const std::string fixture = std::string(LOCREQ_FIXTURE_DIR) + "/pallet_booking.json";
    const std::string weak = std::string(LOCREQ_FIXTURE_DIR) + "/pallet_booking_weak_ils.json";
    const std::string golden_dir = LOCREQ_GOLDEN_DIR;

    const struct {
        const char* name;
        std::string args;
        std::string golden;
        int expected_exit;
    } cases[] = {
        {"derive", "derive --config " + fixture + " --format json", "derive.json", 0},
        {"check", "check --config " + fixture + " --format json", "check.json", 0},
        {"tabulate", "tabulate --config " + fixture + " --format json", "tabulate.json", 0},
        {"tabulate-csv", "tabulate --config " + fixture + " --format csv", "tabulate.csv", 0},
        {"simulate",
         "simulate --config " + fixture + " --trials 100 --seed 42 --format json",
         "simulate.json", 0},
    };
    for (const auto& c : cases) {
        const CliRun run = run_cli(c.args);
        require(run.exit_code == c.expected_exit,
                std::string(c.name) + ": exit code " + std::to_string(run.exit_code));
        const std::string expected = read_file(golden_dir + "/" + c.golden);
        require(run.output == expected, std::string(c.name) + ": output differs from golden " +
                                            c.golden);
    }

    const CliRun weak_run = run_cli("check --config " + weak + " --format json");
    require(weak_run.exit_code == 2,
            "weak-ils check exited " + std::to_string(weak_run.exit_code) + ", expected 2");
    return "five golden outputs byte-stable; weak-ils check exits 2";
}

}  // namespace

int main() {
    const struct {
        const char* id;
        const char* title;
        std::function<std::string()> run;
    } criteria[] = {
        {"AC1", "trade-off table x/y rows", ac1_table_rows},
        {"AC2", "z-row discrepancy annotation", ac2_z_row_annotation},
        {"AC3", "headline budgets at 2 Hz", ac3_headline_budgets},
        {"AC4", "boundary-experiment conservativeness", ac4_conservativeness},
        {"AC5", "perfect-system zero false events", ac5_perfect_system},
        {"AC6", "noise calibration", ac6_calibration},
        {"AC7", "sigma-level anchor", ac7_six_sigma_anchor},
        {"AC8", "property suites", ac8_property_suites},
        {"AC9", "golden end-to-end outputs", ac9_golden_files},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        try {
            const std::string note = c.run();
            std::printf("%s PASS — %s (%s)\n", c.id, c.title, note.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::printf("%s FAIL — %s: %s\n", c.id, c.title, e.what());
        }
        std::fflush(stdout);
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
