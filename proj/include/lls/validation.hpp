#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lls::validation {

struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;  // worst observed value
    double limit = 0.0;     // bound it is held against
};

struct SuiteResult {
    std::string suite;
    std::vector<Check> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Energy and angular-momentum conservation across a randomized parameter
/// sweep, measured on the production integrator and on an independent
/// Cartesian-coordinates route.
SuiteResult conservation_suite(int samples, double energy_tol, double p_psi_tol,
                               std::uint64_t seed);

/// Existence of the steering solution agrees with the feasibility intervals on
/// random (q, lambda, f) triples; zero disagreements allowed.
SuiteResult lemma1_suite(int samples, std::uint64_t seed);

/// Sweep angle and stance duration from quadrature versus the event-detected
/// ODE route.
SuiteResult quadrature_suite(int samples, double sweep_tol, double duration_tol,
                             std::uint64_t seed);

/// Exit velocity mirrors the entry velocity about the chord.
SuiteResult reflection_suite(int samples, double angle_tol, std::uint64_t seed);

/// Geometric decay of the distance error under exact steering.
SuiteResult tracking_suite(int cases, int stances, double rel_tol, std::uint64_t seed);

/// Constrained-feedback residual recursion and the steady-error bound on the
/// small-step model, over scenarios with tight placement bounds.
SuiteResult backstepping_suite(int scenarios, int stances, int tail, double recursion_tol,
                               std::uint64_t seed);

/// Posture channel: exact target landing, agreement with a numeric propagation
/// oracle, effort optimality against endpoint-preserving perturbations, and
/// the deadbeat / geometric-convergence behavior.
SuiteResult body_suite(int samples, std::uint64_t seed);

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name);  // default sample counts; throws UsageError

}  // namespace lls::validation
