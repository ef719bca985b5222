#include "delcon/rendezvous.hpp"

#include "delcon/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace delcon {

double wrap_angle(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(a + std::numbers::pi, two_pi);
    if (r <= 0.0) r += two_pi;
    return r - std::numbers::pi;
}

SwarmState init_swarm(const RendezvousScenario& scenario) {
    const int n = scenario.dm.graph.n;
    if (static_cast<int>(scenario.initial.size()) != n)
        throw std::invalid_argument("expected " + std::to_string(n) + " initial poses, got " +
                                    std::to_string(scenario.initial.size()));
    if (n < 2) throw std::invalid_argument("rendezvous needs at least 2 agents");
    const ControllerGains& g = scenario.gains;
    if (!(g.v_max > 0.0) || !(g.k_dist > 0.0) || !(g.kp > 0.0) || !(g.kd > 0.0))
        throw std::invalid_argument("controller gains must be strictly positive");
    if (!(scenario.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (scenario.consensus_stride < 1)
        throw std::invalid_argument("consensus_stride must be >= 1");

    Eigen::MatrixXd W0(n, 2);
    for (int i = 0; i < n; ++i) {
        W0(i, 0) = scenario.initial[i].x;
        W0(i, 1) = scenario.initial[i].y;
    }

    SwarmState state;
    state.poses = scenario.initial;
    for (auto& p : state.poses) p.theta = wrap_angle(p.theta);
    state.refs = init_history(W0, scenario.dm);
    state.prev_error.assign(n, 0.0);
    state.tick = 0;
    return state;
}

ControlCommand controller(const Pose& pose, double ref_x, double ref_y,
                          const ControllerGains& gains, double prev_error, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const double dx = ref_x - pose.x;
    const double dy = ref_y - pose.y;
    const double dist = std::hypot(dx, dy);

    ControlCommand cmd;
    cmd.v = gains.v_max * std::tanh(gains.k_dist * dist);
    // At the reference point there is no bearing; hold heading instead.
    cmd.heading_error = dist == 0.0 ? 0.0 : wrap_angle(std::atan2(dy, dx) - pose.theta);
    cmd.omega = gains.kp * cmd.heading_error +
                gains.kd * (cmd.heading_error - prev_error) / dt;
    return cmd;
}

SwarmState step_swarm(const SwarmState& state, const RendezvousScenario& scenario) {
    SwarmState next = state;
    if (state.tick % scenario.consensus_stride == 0)
        next.refs = step(state.refs, scenario.dm, scenario.c);

    const int n = scenario.dm.graph.n;
    const Eigen::MatrixXd& refs = next.refs.frames[0];
    for (int i = 0; i < n; ++i) {
        const ControlCommand cmd = controller(next.poses[i], refs(i, 0), refs(i, 1),
                                              scenario.gains, next.prev_error[i], scenario.dt);
        Pose& p = next.poses[i];
        p.x += cmd.v * std::cos(p.theta) * scenario.dt;
        p.y += cmd.v * std::sin(p.theta) * scenario.dt;
        p.theta = wrap_angle(p.theta + cmd.omega * scenario.dt);
        next.prev_error[i] = cmd.heading_error;
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.theta))
            throw std::runtime_error("non-finite pose for agent " + std::to_string(i + 1));
    }
    next.tick = state.tick + 1;
    return next;
}

RendezvousTrace run_rendezvous(const RendezvousScenario& scenario, double duration,
                               double capture_tol) {
    if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
    if (!(capture_tol > 0.0)) throw std::invalid_argument("capture_tol must be positive");

    SwarmState state = init_swarm(scenario);
    const int n = scenario.dm.graph.n;
    const long steps = std::lround(duration / scenario.dt);

    const Eigen::MatrixXd W0 = state.refs.frames[0];
    const ConsensusPrediction pred = predict_nonuniform(scenario.dm, scenario.c, W0);

    const double spread0 = column_spread(W0).maxCoeff();
    const double divergence_at =
        spread0 > 0.0 ? scenario.blowup * spread0 : std::numeric_limits<double>::infinity();

    RendezvousTrace trace;
    trace.predicted = pred.alpha;
    trace.rows.reserve(static_cast<std::size_t>(n) * (steps + 1));

    auto log_rows = [&](double t, const std::vector<ControlCommand>& cmds) {
        const Eigen::MatrixXd& refs = state.refs.frames[0];
        for (int i = 0; i < n; ++i) {
            RendezvousTrace::Row row;
            row.t = t;
            row.agent = i + 1;
            row.pose = state.poses[i];
            row.ref_x = refs(i, 0);
            row.ref_y = refs(i, 1);
            row.v = cmds.empty() ? 0.0 : cmds[i].v;
            row.omega = cmds.empty() ? 0.0 : cmds[i].omega;
            trace.rows.push_back(row);
        }
    };
    log_rows(0.0, {});

    for (long k = 1; k <= steps; ++k) {
        // Recompute the commands that step_swarm applies so the trace can
        // carry them without duplicating the control law.
        SwarmState before = state;
        state = step_swarm(state, scenario);

        std::vector<ControlCommand> cmds(n);
        const Eigen::MatrixXd& refs = state.refs.frames[0];
        for (int i = 0; i < n; ++i)
            cmds[i] = controller(before.poses[i], refs(i, 0), refs(i, 1), scenario.gains,
                                 before.prev_error[i], scenario.dt);

        const double spread = column_spread(refs).maxCoeff();
        if (!std::isfinite(spread) || spread > divergence_at)
            throw std::runtime_error("consensus layer diverged at t = " +
                                     std::to_string(k * scenario.dt) + " s");
        log_rows(k * scenario.dt, cmds);
    }

    trace.terminal_error.resize(n);
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    bool captured = true;
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d pos(state.poses[i].x, state.poses[i].y);
        mean += pos;
        trace.terminal_error(i) = (pos - trace.predicted).norm();
        if (trace.terminal_error(i) > capture_tol) captured = false;
    }
    trace.achieved = mean / n;
    trace.final_reference_spread = column_spread(state.refs.frames[0]).maxCoeff();
    trace.success = captured;
    return trace;
}

}  // namespace delcon
