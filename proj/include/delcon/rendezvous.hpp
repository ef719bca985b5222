#pragma once

#include "delcon/delay_model.hpp"
#include "delcon/dynamics.hpp"

#include <Eigen/Dense>

#include <vector>

namespace delcon {

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // radians, kept in (-pi, pi]
};

struct ControllerGains {
    double v_max = 0.3;   // m/s, speed saturation
    double k_dist = 2.0;  // 1/m, sigmoid slope over distance
    double kp = 2.0;      // heading proportional gain
    double kd = 0.1;      // heading derivative gain
};

struct RendezvousScenario {
    DelayModel dm;
    double c = 0.1;                 // consensus step size
    std::vector<Pose> initial;      // one per agent
    ControllerGains gains;
    double dt = 0.02;               // seconds per control step
    int consensus_stride = 1;       // control steps per consensus update
    double blowup = 10.0;           // reference-spread divergence factor
};

struct ControlCommand {
    double v = 0.0;
    double omega = 0.0;
    double heading_error = 0.0;  // feeds the next derivative term
};

// Consensus runs open-loop on the initial positions; each agent chases its
// own current consensus estimate of (x, y).
struct SwarmState {
    std::vector<Pose> poses;
    StateHistory refs;               // n x 2 history, columns (x, y)
    std::vector<double> prev_error;  // previous heading error per agent
    long tick = 0;                   // control steps taken
};

struct RendezvousTrace {
    struct Row {
        double t = 0.0;
        int agent = 0;  // 1-based
        Pose pose;
        double ref_x = 0.0;
        double ref_y = 0.0;
        double v = 0.0;
        double omega = 0.0;
    };
    std::vector<Row> rows;
    Eigen::Vector2d predicted;        // closed-form rendezvous point
    Eigen::Vector2d achieved;         // mean final position
    Eigen::VectorXd terminal_error;   // per-agent distance to predicted
    double final_reference_spread = 0.0;
    bool success = false;
};

double wrap_angle(double a);  // into (-pi, pi]

// Throws std::invalid_argument on n < 2, a pose-count mismatch, or
// non-positive gains/dt/stride.
SwarmState init_swarm(const RendezvousScenario& scenario);

// v = v_max * tanh(k_dist * distance); heading error e = bearing - theta
// (zero when already at the reference); omega = kp*e + kd*(e - prev_e)/dt.
ControlCommand controller(const Pose& pose, double ref_x, double ref_y,
                          const ControllerGains& gains, double prev_error,
                          double dt);

// One control tick: advance the consensus reference every consensus_stride
// ticks, then integrate each unicycle with explicit Euler.
SwarmState step_swarm(const SwarmState& state, const RendezvousScenario& scenario);

// Run for `duration` seconds; success iff every agent ends within
// capture_tol of the closed-form rendezvous point. Throws std::runtime_error
// if the consensus layer diverges (non-finite reference state).
RendezvousTrace run_rendezvous(const RendezvousScenario& scenario, double duration,
                               double capture_tol);

}  // namespace delcon
