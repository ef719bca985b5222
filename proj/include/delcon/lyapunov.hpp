#pragma once

#include "delcon/delay_model.hpp"
#include "delcon/spectral.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace delcon {

// Feasibility probe hit the iteration cap without deciding either way.
// Deliberately never mapped to a boolean; callers surface it (CLI exit 3).
struct InconclusiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LyapunovCandidate {
    Eigen::MatrixXd P;  // block-diagonal, tau_max+1 copies of L + delta*I
    double delta = 0.0;
};

struct FeasibilityVerdict {
    bool feasible = false;
    std::string method;  // "candidate-P" or "series"
    double witness = 0.0;  // max eigenvalue (candidate-P) or final series norm
    long iterations = 0;   // series doublings (0 for candidate-P)
};

struct StepSizeCertificate {
    struct Probe {
        double c = 0.0;
        bool feasible = false;
        std::string method;
        double witness = 0.0;
    };
    double c_max = 0.0;
    double tol = 0.0;
    std::vector<Probe> probes;
};

// Q = I - (1/N) * ones * ones^T: orthogonal projector that annihilates the
// consensus direction. N >= 2.
Eigen::MatrixXd consensus_projector(int N);

// Throws std::invalid_argument on delta <= 0.
LyapunovCandidate lyapunov_candidate(const Graph& g, int tau_max, double delta);

// M = A^T Q P Q A - Q P Q. Symmetric; the consensus direction lies in its
// kernel. Stability requires M negative definite on the complement.
Eigen::MatrixXd lyapunov_difference(const AugmentedSystem& sys,
                                    const LyapunovCandidate& P,
                                    const Eigen::MatrixXd& Q);

// A_r = B^T A B with B a deterministic (Householder) orthonormal basis of
// the complement of the consensus direction; spectrum(A) minus one unit
// eigenvalue. Throws if A * ones = ones fails validation.
Eigen::MatrixXd disagreement_reduction(const AugmentedSystem& sys);

// Two-stage test. Stage (a): max eigenvalue of B^T M B < -eps*||M||_F
// certifies feasibility with the explicit candidate P. Stage (b), decisive:
// Smith series sum_m (A_r^m)^T A_r^m accumulated by matrix squaring;
// convergence (increment < eps * max(1, ||S||)) certifies feasibility,
// growth of ||S|| past 1e12 certifies infeasibility. Throws
// InconclusiveError if 120 doublings decide neither.
FeasibilityVerdict lmi_feasible(const DelayModel& dm, double c,
                                double delta = 1e-6, double eps = 1e-10);

// Bisect for the largest feasible step size. Requires c_lo feasible and
// c_hi infeasible (std::invalid_argument otherwise); stops when the bracket
// is narrower than tol; c_max is the last feasible probe. Spot-checks three
// interior points of the final bracket and throws std::runtime_error if
// feasibility is not monotone across them.
StepSizeCertificate max_step_size(const DelayModel& dm, double c_lo, double c_hi,
                                  double tol);

}  // namespace delcon
