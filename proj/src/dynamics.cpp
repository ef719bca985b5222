#include "delcon/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace delcon {

namespace {

// Precomputed update operator: W(k+1) = P0*W(k) + sum_m cHm[m-1]*W(k-m).
// step() and simulate() share this so their arithmetic is identical.
struct Kernel {
    Eigen::MatrixXd P0;                // I - c*D
    std::vector<Eigen::MatrixXd> cHm;  // c * H_m for m = 1..tau_max
};

Kernel make_kernel(const DelayModel& dm, double c) {
    const int n = dm.graph.n;
    Kernel k;
    k.P0 = Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd deg = dm.graph.degrees();
    for (int i = 0; i < n; ++i) k.P0(i, i) = 1.0 - c * deg(i);
    k.cHm.reserve(dm.tau_max);
    for (int m = 1; m <= dm.tau_max; ++m) k.cHm.push_back(c * lag_adjacency(dm, m));
    return k;
}

// frames becomes [W(k+1), W(k), ..., W(k-tau_max+1)]; scratch is reused storage.
void advance(std::vector<Eigen::MatrixXd>& frames, const Kernel& kernel,
             Eigen::MatrixXd& scratch) {
    scratch.noalias() = kernel.P0 * frames[0];
    for (std::size_t m = 1; m < frames.size(); ++m)
        scratch.noalias() += kernel.cHm[m - 1] * frames[m];
    std::rotate(frames.rbegin(), frames.rbegin() + 1, frames.rend());
    frames[0].swap(scratch);
}

void check_step_args(const StateHistory& h, const DelayModel& dm, double c) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw std::invalid_argument("step size must be finite and >= 0");
    if (static_cast<int>(h.frames.size()) != dm.tau_max + 1)
        throw std::invalid_argument("history depth " + std::to_string(h.frames.size()) +
                                    " does not match tau_max+1 = " +
                                    std::to_string(dm.tau_max + 1));
    if (h.frames.empty() || h.frames[0].rows() != dm.graph.n)
        throw std::invalid_argument("history row count does not match agent count");
}

}  // namespace

StateHistory init_history(const Eigen::MatrixXd& W0, const DelayModel& dm) {
    if (W0.rows() != dm.graph.n)
        throw std::invalid_argument("W0 must have " + std::to_string(dm.graph.n) + " rows, got " +
                                    std::to_string(W0.rows()));
    if (W0.cols() < 1) throw std::invalid_argument("W0 needs at least one column");
    if (!W0.allFinite()) throw std::invalid_argument("W0 has non-finite entries");
    StateHistory h;
    h.frames.assign(dm.tau_max + 1, W0);
    h.k = 0;
    return h;
}

StateHistory step(const StateHistory& h, const DelayModel& dm, double c) {
    check_step_args(h, dm, c);
    StateHistory out = h;
    Eigen::MatrixXd scratch(out.frames[0].rows(), out.frames[0].cols());
    const Kernel kernel = make_kernel(dm, c);
    advance(out.frames, kernel, scratch);
    out.k = h.k + 1;
    return out;
}

Eigen::VectorXd column_spread(const Eigen::MatrixXd& W) {
    return W.colwise().maxCoeff() - W.colwise().minCoeff();
}

std::pair<Trajectory, ConvergenceReport> simulate(const Eigen::MatrixXd& W0,
                                                  const DelayModel& dm, double c,
                                                  long max_steps, double tol,
                                                  double blowup, int stride) {
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (blowup <= 1.0) throw std::invalid_argument("blowup factor must exceed 1");
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");

    StateHistory h = init_history(W0, dm);
    check_step_args(h, dm, c);
    const Kernel kernel = make_kernel(dm, c);
    Eigen::MatrixXd scratch(W0.rows(), W0.cols());

    Trajectory traj;
    traj.stride = stride;
    ConvergenceReport report;

    const Eigen::VectorXd spread0 = column_spread(W0);
    const double spread0_max = spread0.maxCoeff();
    // From an exact consensus start nothing can blow up; disable the check
    // rather than comparing against blowup * 0.
    const double divergence_at =
        spread0_max > 0.0 ? blowup * spread0_max : std::numeric_limits<double>::infinity();
    const long window = dm.tau_max + 1;

    traj.snapshots.emplace_back(0, W0);
    traj.spread_series.push_back(spread0);
    long run = spread0_max < tol ? 1 : 0;
    long final_step = 0;

    for (long k = 1; k <= max_steps; ++k) {
        advance(h.frames, kernel, scratch);
        h.k = k;
        final_step = k;
        const Eigen::MatrixXd& W = h.frames[0];
        const Eigen::VectorXd sp = column_spread(W);
        const double sp_max = sp.maxCoeff();

        if (!std::isfinite(sp_max) || !W.allFinite()) {
            report.diverged = true;
            report.non_finite = true;
            break;
        }
        traj.spread_series.push_back(sp);
        if (k % stride == 0) traj.snapshots.emplace_back(k, W);

        if (sp_max > divergence_at) {
            report.diverged = true;
            break;
        }
        run = sp_max < tol ? run + 1 : 0;
        if (run >= window) {
            report.converged = true;
            report.convergence_step = k - window + 1;
            break;
        }
    }

    if (traj.snapshots.back().first != final_step)
        traj.snapshots.emplace_back(final_step, h.frames[0]);

    report.final_W = h.frames[0];
    if (report.converged) {
        report.consensus_vector =
            Eigen::VectorXd(report.final_W.colwise().mean().transpose());
    }
    return {std::move(traj), std::move(report)};
}

}  // namespace delcon
