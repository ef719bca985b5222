#pragma once

#include "delcon/delay_model.hpp"
#include "delcon/dynamics.hpp"
#include "delcon/lyapunov.hpp"
#include "delcon/rendezvous.hpp"
#include "delcon/spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace delcon {

// Invalid scenario file or CLI input; message carries the file/line when known.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Scenario {
    DelayModel dm;
    double c = 0.1;
    std::optional<Eigen::MatrixXd> W0;  // defaults to seeded row-stochastic
    long max_steps = 100000;
    double tol = 1e-4;
    double blowup = 10.0;
    std::uint64_t seed = 0;
    std::optional<double> dt;  // seconds per step, display only
    std::optional<std::vector<Pose>> poses;  // rendezvous start poses
};

// JSON schema:
//   {"graph": {"n": int, "edges": [[i, j], ...]},   (1-based endpoints)
//    "tau": [[...], ...],                           (full n x n matrix)
//    "c": real,
//    "W0": [[...], ...],            optional
//    "max_steps": int,              optional (default 100000)
//    "tol": real,                   optional (default 1e-4)
//    "blowup": real,                optional (default 10)
//    "seed": int,                   optional (default 0)
//    "dt": real,                    optional
//    "poses": [[x, y, theta], ...]} optional
// Throws ScenarioError with a line-anchored message on malformed JSON and
// with the offending field path on schema violations.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin);

// Row-stochastic n x n matrix: mt19937_64 draws mapped to [0,1) via
// (x >> 11) * 2^-53 (fixed mapping, identical across platforms), rows
// normalized to sum 1.
Eigen::MatrixXd seeded_w0(int n, std::uint64_t seed);

// W0 from the scenario if present, else seeded_w0(n, seed).
Eigen::MatrixXd scenario_w0(const Scenario& s);

// %.17g — 17 significant digits, '.' decimal separator.
std::string format_real(double x);

// One row per (step, agent, component); header `step,agent,component,value`.
std::string trajectory_csv(const Trajectory& traj);

// Fields: converged, convergence_step, diverged, consensus, spread_final.
std::string report_json(const ConvergenceReport& report);

// {c_max, tol, probes: [{c, feasible, method, witness}]}.
std::string certificate_json(const StepSizeCertificate& cert);

std::string verdict_json(const FeasibilityVerdict& verdict);

std::string prediction_json(const ConsensusPrediction& prediction);

std::string mode_report_json(const ModeStabilityReport& report);

// Header `t,agent,x,y,theta,ref_x,ref_y,v,omega`.
std::string rendezvous_csv(const RendezvousTrace& trace);

std::string rendezvous_summary_json(const RendezvousTrace& trace);

// Throws std::runtime_error on I/O failure. LF endings, UTF-8.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace delcon
