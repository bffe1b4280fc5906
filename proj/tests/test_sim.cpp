#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "lls/config.hpp"
#include "lls/errors.hpp"
#include "lls/sim.hpp"

using namespace lls;

namespace {

ScenarioConfig circle_scenario() {
    ScenarioConfig cfg;
    cfg.curve = CurveModel::circle({0, 0}, 0.02);
    cfg.legs.mass = 2.5e-3;
    cfg.legs.inertia = 2.0e-7;
    cfg.legs.eta0 = 0.017;
    cfg.legs.alpha_min = kPi / 6;
    cfg.legs.alpha_max = kPi / 3;
    cfg.start = {0.1, 0.0};
    cfg.speed = 0.2;
    cfg.heading = kPi / 3;
    cfg.first_side = Side::Right;
    cfg.body0 = {kPi / 3, 0.0};
    cfg.tracking.K = 0.5;
    cfg.tracking.rho_c = 0.03;
    cfg.posture.K4 = 0.5;
    cfg.posture.K5 = 0.5;
    cfg.strategy = Strategy::ConstantQ;
    cfg.q_target = 0.0153;
    cfg.stance_budget = 30;
    cfg.stop_on_convergence = false;
    return cfg;
}

}  // namespace

TEST_CASE("identical configs produce identical traces") {
    const ScenarioConfig cfg = circle_scenario();
    const RunResult a = run_scenario(cfg);
    const RunResult b = run_scenario(cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].rho == b.trace[i].rho);
        CHECK(a.trace[i].alpha == b.trace[i].alpha);
        CHECK(a.trace[i].b == b.trace[i].b);
        CHECK(a.trace[i].com.x == b.trace[i].com.x);
        CHECK(a.trace[i].sigma == b.trace[i].sigma);
    }
}

TEST_CASE("circle tracking converges and satisfies the stance relations") {
    const ScenarioConfig cfg = circle_scenario();
    const RunResult run = run_scenario(cfg);
    const Metrics m = metrics(run, cfg);

    CHECK(run.trace.size() == 30);
    CHECK(m.final_error < 5e-4);
    CHECK(m.max_energy_drift < 1e-9);
    CHECK(m.max_theta_residual < 1e-8);
    CHECK(m.bound_check);
    CHECK(run.final_state.v == cfg.speed);

    // Steady state: right stances sit in the lower sub-cone (CCW tracking).
    const double gamma_ss = 2 * std::asin(cfg.q_target / (2 * (0.02 + cfg.tracking.rho_c)));
    for (std::size_t i = run.trace.size() - 6; i < run.trace.size(); ++i) {
        const TraceRecord& r = run.trace[i];
        if (r.side == Side::Right) CHECK(r.alpha <= cfg.legs.alpha_max - gamma_ss + 1e-6);
        else CHECK(r.alpha >= cfg.legs.alpha_min + gamma_ss - 1e-6);
    }
    // Alternating placements differ by gamma once converged.
    const TraceRecord& r1 = run.trace[run.trace.size() - 2];
    const TraceRecord& r2 = run.trace[run.trace.size() - 1];
    CHECK(std::abs(std::abs(r2.alpha - r1.alpha) - gamma_ss) < 2e-3);
}

TEST_CASE("straight-line steady gait is a fixed point") {
    ScenarioConfig cfg;
    cfg.curve = CurveModel::line({0, 0}, {-1, 0});
    cfg.legs.mass = 2.5e-3;
    cfg.legs.eta0 = 0.017;
    cfg.legs.alpha_min = kPi / 6;
    cfg.legs.alpha_max = kPi / 3;
    cfg.q_target = 0.0153;
    cfg.speed = 0.2;
    cfg.tracking.K = 0.5;
    cfg.tracking.rho_c = 0.02;
    cfg.strategy = Strategy::ConstantQ;
    cfg.stance_budget = 20;
    cfg.stop_on_convergence = false;

    // Start exactly on the desired offset, heading set for a zero-bearing
    // chord on the first right stance.
    const double alpha0 = 0.8;
    const double sweep = 2 * std::asin(cfg.q_target / (2 * cfg.legs.eta0));
    cfg.start = {0.0, 0.02};
    cfg.heading = kPi - (kPi / 2 - alpha0 - sweep / 2);
    cfg.first_side = Side::Right;
    cfg.body0.sigma = cfg.heading;

    const RunResult run = run_scenario(cfg);
    for (const auto& r : run.trace) {
        CHECK(std::abs(r.rho - 0.02) < 1e-10);
        CHECK(std::abs(r.alpha - alpha0) < 1e-9);
        CHECK(std::abs(r.theta) < 1e-9);
        CHECK_FALSE(r.fallback);
    }
}

TEST_CASE("distance error decays geometrically under the exact strategy") {
    ScenarioConfig cfg;
    cfg.curve = CurveModel::circle({0, 0}, 0.1);
    cfg.legs.mass = 2.5e-3;
    cfg.legs.eta0 = 0.017;
    cfg.legs.alpha_min = 0.05;
    cfg.legs.alpha_max = 1.52;
    cfg.q_target = 0.008;
    cfg.speed = 0.2;
    cfg.tracking.K = 0.5;
    cfg.tracking.rho_c = 0.05;
    cfg.strategy = Strategy::Inverse;
    cfg.stance_budget = 20;
    cfg.stop_on_convergence = false;
    cfg.start = {0.1 + 0.05 + 0.003, 0.0};  // 3 mm outside the desired offset
    cfg.heading = kPi / 2 + 0.05;
    cfg.first_side = Side::Right;

    const RunResult run = run_scenario(cfg);
    const double err0 = run.trace.front().rho - cfg.tracking.rho_c;
    for (std::size_t i = 0; i < run.trace.size(); ++i) {
        const double predicted = std::pow(1.0 - cfg.tracking.K, double(i)) * err0;
        CHECK(std::abs((run.trace[i].rho - cfg.tracking.rho_c) - predicted) <
              1e-8 * std::abs(err0));
        CHECK_FALSE(run.trace[i].fallback);
    }
}

TEST_CASE("inverse strategy fails loudly when the placement saturates") {
    ScenarioConfig cfg = circle_scenario();
    cfg.strategy = Strategy::Inverse;
    CHECK_THROWS_AS((void)run_scenario(cfg), PlanFailure);
}

TEST_CASE("approx strategy reproduces the constant-q trace") {
    ScenarioConfig a = circle_scenario();
    a.stance_budget = 12;
    ScenarioConfig b = a;
    b.strategy = Strategy::Approx;
    const RunResult ra = run_scenario(a);
    const RunResult rb = run_scenario(b);
    REQUIRE(ra.trace.size() == rb.trace.size());
    for (std::size_t i = 0; i < ra.trace.size(); ++i) {
        CHECK(std::abs(ra.trace[i].alpha - rb.trace[i].alpha) < 1e-9);
        CHECK(ra.trace[i].rho == doctest::Approx(rb.trace[i].rho).epsilon(1e-12));
    }
}

TEST_CASE("body channel follows the posture recursions along the run") {
    ScenarioConfig cfg = circle_scenario();
    cfg.posture.C1 = 0.1;
    cfg.posture.C2 = 1e-6;
    cfg.stance_budget = 10;
    const RunResult run = run_scenario(cfg);
    BodyState body = cfg.body0;
    for (const auto& r : run.trace) {
        CHECK(r.sigma == doctest::Approx(body.sigma).epsilon(1e-12));
        CHECK(r.p_sigma == doctest::Approx(body.p_sigma).epsilon(1e-10));
        const BodyState target =
            posture_targets(body, r.heading, cfg.posture, r.alpha, r.sweep, r.side);
        const TorqueCoeffs tc = torque_coeffs(body, target, r.duration, cfg.legs.inertia);
        const BodyState landed = integrate_body(body, tc, r.duration, cfg.legs.inertia);
        CHECK(std::abs(landed.sigma - target.sigma) < 1e-12);
        CHECK(std::abs(landed.p_sigma - target.p_sigma) < 1e-12);
        body = landed;
    }
    CHECK(run.final_body.sigma == doctest::Approx(body.sigma).epsilon(1e-12));
}

TEST_CASE("sweep tables") {
    LegParams legs;
    legs.mass = 2.5e-3;
    legs.eta0 = 0.017;
    legs.alpha_min = kPi / 6;
    legs.alpha_max = kPi / 3;
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(kPi / 6 + (kPi / 3 - kPi / 6) * i / 10.0);
    const auto rows = sweep_tables(legs, grid, 1.05, 0.0144, 0.2);
    REQUIRE(rows.size() == grid.size());
    CHECK(rows.front().alpha == doctest::Approx(kPi / 6));
    CHECK(rows.back().alpha == doctest::Approx(kPi / 3));
    for (const auto& r : rows) {
        CHECK(r.q > 0.012);
        CHECK(r.b > 0.0);
        CHECK(std::hypot(r.chord_x, r.chord_y) == doctest::Approx(r.q).epsilon(1e-12));
    }
    // An unreachable hold chord yields NaN rather than a row drop.
    const auto hard = sweep_tables(legs, {1.45}, 1.05, 0.0144, 0.2);
    REQUIRE(hard.size() == 1);
    CHECK(std::isnan(hard.front().b));
}

TEST_CASE("config parsing") {
    const std::string text = R"(
# comment
[curve]
kind = circle
center = 0 0
radius = 0.02

[legs]
mass = 0.0025
eta0 = 0.017
alpha_min = 0.5235987755982988
alpha_max = 1.0471975511965976

[start]
position = 0.1 0
speed = 0.2
heading = 1.0471975511965976

[tracking]
K = 0.5
rho_c = 0.03

[control]
q_target = 0.0153
)";
    ConfigFile cfg = ConfigFile::parse_text(text);
    const ScenarioConfig sc = scenario_from_config(cfg);
    CHECK(sc.q_target == doctest::Approx(0.0153));
    CHECK(sc.tracking.rho_c == doctest::Approx(0.03));
    CHECK(sc.strategy == Strategy::ConstantQ);

    SUBCASE("overrides") {
        cfg.set_override("tracking.K=0.9");
        CHECK(scenario_from_config(cfg).tracking.K == doctest::Approx(0.9));
    }
    SUBCASE("alpha bounds must be ordered") {
        cfg.set_override("legs.alpha_min=1.2");
        cfg.set_override("legs.alpha_max=0.6");
        CHECK_THROWS_AS((void)scenario_from_config(cfg), ConfigError);
    }
    SUBCASE("gain range is validated") {
        cfg.set_override("tracking.K=2.5");
        CHECK_THROWS_AS((void)scenario_from_config(cfg), ConfigError);
    }
    SUBCASE("chord must fit the leg") {
        cfg.set_override("control.q_target=0.04");
        CHECK_THROWS_AS((void)scenario_from_config(cfg), ConfigError);
    }
    SUBCASE("unknown strategy") {
        cfg.set_override("control.strategy=magic");
        CHECK_THROWS_AS((void)scenario_from_config(cfg), ConfigError);
    }
    SUBCASE("malformed numbers") {
        cfg.set_override("start.speed=fast");
        CHECK_THROWS_AS((void)scenario_from_config(cfg), ConfigError);
    }
}

TEST_CASE("config parse errors carry location") {
    CHECK_THROWS_AS((void)ConfigFile::parse_text("[unterminated\n"), ConfigError);
    CHECK_THROWS_AS((void)ConfigFile::parse_text("novalue\n"), ConfigError);
    try {
        (void)ConfigFile::parse_text("[a]\nx 3\n", "f.cfg");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("f.cfg:2") != std::string::npos);
    }
}

TEST_CASE("trajectory sampling records the continuous motion") {
    ScenarioConfig cfg = circle_scenario();
    cfg.stance_budget = 3;
    cfg.integrate.record_trajectory = true;
    const RunResult run = run_scenario(cfg);
    REQUIRE(run.trajectory.size() > 30);
    double t_prev = -1.0;
    for (const auto& row : run.trajectory) {
        // Monotone within and across stances; stance boundaries may differ by
        // the quadrature-vs-integrator duration residual.
        CHECK(row.t >= t_prev - 1e-9);
        t_prev = row.t;
        CHECK(row.eta > 0.0);
        CHECK(row.eta <= cfg.legs.eta0 * (1.0 + 1e-6));
        CHECK(std::isfinite(row.tau));
    }
    // Each stance starts and ends at the touchdown length.
    CHECK(run.trajectory.front().eta == doctest::Approx(cfg.legs.eta0));
    CHECK(run.trajectory.back().eta == doctest::Approx(cfg.legs.eta0).epsilon(1e-9));
    write_trajectory_csv("/tmp/lls_test_traj.csv", run.trajectory);
    std::ifstream tf("/tmp/lls_test_traj.csv");
    std::string header;
    std::getline(tf, header);
    CHECK(header.find("eta_m") != std::string::npos);
    std::remove("/tmp/lls_test_traj.csv");
}

TEST_CASE("trace and summary files are written with headers") {
    const ScenarioConfig cfg = circle_scenario();
    RunResult run = run_scenario(cfg);
    const Metrics m = metrics(run, cfg);
    write_trace_csv("/tmp/lls_test_trace.csv", run.trace);
    write_summary_json("/tmp/lls_test_summary.json", run, m, cfg);
    std::ifstream f("/tmp/lls_test_trace.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header.find("stance,time_s") == 0);
    CHECK(header.find("theta_residual_rad") != std::string::npos);
    int lines = 0;
    std::string line;
    while (std::getline(f, line)) ++lines;
    CHECK(lines == int(run.trace.size()));
    std::remove("/tmp/lls_test_trace.csv");
    std::remove("/tmp/lls_test_summary.json");
}
