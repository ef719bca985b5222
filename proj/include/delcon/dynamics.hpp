#pragma once

#include "delcon/delay_model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

namespace delcon {

// Ring of the current state and the tau_max most recent past states:
// frames[m] = W(k - m). Past frames are prefilled with W(0), i.e. agents
// start out remembering their initial state.
struct StateHistory {
    std::vector<Eigen::MatrixXd> frames;  // size tau_max + 1, newest first
    long k = 0;
};

struct Trajectory {
    std::vector<std::pair<long, Eigen::MatrixXd>> snapshots;  // (step, W)
    std::vector<Eigen::VectorXd> spread_series;  // per step, per column max-min
    int stride = 1;
};

struct ConvergenceReport {
    bool converged = false;
    std::optional<long> convergence_step;
    Eigen::MatrixXd final_W;
    std::optional<Eigen::VectorXd> consensus_vector;  // column means when converged
    bool diverged = false;
    bool non_finite = false;  // blow-up reached non-finite values
};

// W0 must have graph.n rows (any number of columns >= 1) and finite entries.
StateHistory init_history(const Eigen::MatrixXd& W0, const DelayModel& dm);

// One update of the delayed consensus recursion:
//   W(k+1) = (I - c*D) W(k) + c * sum_m H_m W(k-m).
// Returns the advanced history; the input is not modified.
StateHistory step(const StateHistory& h, const DelayModel& dm, double c);

// Per column j: max_i W(i,j) - min_i W(i,j).
Eigen::VectorXd column_spread(const Eigen::MatrixXd& W);

// Run the recursion until every column spread stays below tol for a trailing
// window of tau_max+1 consecutive steps (convergence_step = first step of
// that window), or some spread exceeds blowup * the initial max spread
// (diverged), or max_steps elapse. Snapshots are recorded every `stride`
// steps plus the final step.
std::pair<Trajectory, ConvergenceReport> simulate(const Eigen::MatrixXd& W0,
                                                  const DelayModel& dm, double c,
                                                  long max_steps, double tol,
                                                  double blowup, int stride = 1);

}  // namespace delcon
