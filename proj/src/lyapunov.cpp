#include "delcon/lyapunov.hpp"

#include "delcon/graph.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace delcon {

namespace {

// Orthonormal basis of the complement of the all-ones direction: columns
// 2..N of the Householder reflector that maps e_1 to ones/sqrt(N).
Eigen::MatrixXd disagreement_basis(int N) {
    Eigen::VectorXd u = Eigen::VectorXd::Constant(N, 1.0 / std::sqrt(static_cast<double>(N)));
    Eigen::VectorXd w = -u;
    w(0) += 1.0;  // e_1 - u
    w.normalize();
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(N, N) - 2.0 * (w * w.transpose());
    return H.rightCols(N - 1);
}

}  // namespace

Eigen::MatrixXd consensus_projector(int N) {
    if (N < 2) throw std::invalid_argument("projector dimension must be >= 2");
    return Eigen::MatrixXd::Identity(N, N) -
           Eigen::MatrixXd::Constant(N, N, 1.0 / static_cast<double>(N));
}

LyapunovCandidate lyapunov_candidate(const Graph& g, int tau_max, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
    if (tau_max < 0) throw std::invalid_argument("tau_max must be >= 0");
    const int n = g.n;
    const int N = n * (tau_max + 1);
    Eigen::MatrixXd block = laplacian(g);
    block.diagonal().array() += delta;
    LyapunovCandidate cand;
    cand.delta = delta;
    cand.P = Eigen::MatrixXd::Zero(N, N);
    for (int b = 0; b <= tau_max; ++b) cand.P.block(b * n, b * n, n, n) = block;
    return cand;
}

Eigen::MatrixXd lyapunov_difference(const AugmentedSystem& sys, const LyapunovCandidate& P,
                                    const Eigen::MatrixXd& Q) {
    const auto N = sys.A.rows();
    if (P.P.rows() != N || Q.rows() != N || Q.cols() != N)
        throw std::invalid_argument("dimension mismatch in Lyapunov difference");
    const Eigen::MatrixXd QPQ = Q * P.P * Q;
    Eigen::MatrixXd M = sys.A.transpose() * QPQ * sys.A - QPQ;
    // Exactly symmetric up to rounding; symmetrize so downstream eigensolves
    // never trip on the last few ulps.
    return 0.5 * (M + M.transpose());
}

Eigen::MatrixXd disagreement_reduction(const AugmentedSystem& sys) {
    const auto N = sys.A.rows();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(N);
    if (((sys.A * ones) - ones).cwiseAbs().maxCoeff() > 1e-12)
        throw std::runtime_error("transition matrix does not fix the consensus direction");
    const Eigen::MatrixXd B = disagreement_basis(static_cast<int>(N));
    return B.transpose() * sys.A * B;
}

FeasibilityVerdict lmi_feasible(const DelayModel& dm, double c, double delta, double eps) {
    if (!(c > 0.0)) throw std::invalid_argument("step size must be positive");
    if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
    if (eps <= 0.0) throw std::invalid_argument("eps must be positive");

    const AugmentedSystem sys = augmented_matrix(dm, c);
    const int N = static_cast<int>(sys.A.rows());

    // Stage (a): explicit candidate P. Sufficient when it certifies strict
    // negativity of the Lyapunov difference on the disagreement subspace.
    const Eigen::MatrixXd Q = consensus_projector(N);
    const LyapunovCandidate cand = lyapunov_candidate(dm.graph, dm.tau_max, delta);
    const Eigen::MatrixXd M = lyapunov_difference(sys, cand, Q);
    const Eigen::MatrixXd B = disagreement_basis(N);
    const Eigen::MatrixXd Mr_raw = B.transpose() * M * B;
    const Eigen::MatrixXd Mr = 0.5 * (Mr_raw + Mr_raw.transpose());
    const SpectralDecomposition eig = symmetric_eigen(Mr, 1e-12);
    const double max_eig = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (max_eig < -eps * M.norm()) {
        FeasibilityVerdict v;
        v.feasible = true;
        v.method = "candidate-P";
        v.witness = max_eig;
        v.iterations = 0;
        return v;
    }

    // Stage (b), decisive: Smith series S = sum_m (A_r^m)^T A_r^m, accumulated
    // by squaring (S_{j+1} = S_j + T_j^T S_j T_j, T_{j+1} = T_j^2). The series
    // converges iff the reduced spectral radius is < 1; unchecked growth of
    // ||S|| certifies the opposite.
    const Eigen::MatrixXd Ar = disagreement_reduction(sys);
    const double growth_cap = 1e12;
    const int doubling_cap = 120;

    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(Ar.rows(), Ar.cols());
    Eigen::MatrixXd T = Ar;
    FeasibilityVerdict v;
    v.method = "series";
    for (int j = 1; j <= doubling_cap; ++j) {
        const Eigen::MatrixXd inc = T.transpose() * S * T;
        S += inc;
        const double s_norm = S.norm();
        v.iterations = j;
        v.witness = s_norm;
        if (!std::isfinite(s_norm) || s_norm > growth_cap) {
            v.feasible = false;
            return v;
        }
        if (inc.norm() < eps * std::max(1.0, s_norm)) {
            v.feasible = true;
            return v;
        }
        T = (T * T).eval();
        if (!T.allFinite()) {
            v.feasible = false;
            v.witness = std::numeric_limits<double>::infinity();
            return v;
        }
    }
    throw InconclusiveError("feasibility series undecided after " +
                            std::to_string(doubling_cap) + " doublings at c = " +
                            std::to_string(c));
}

StepSizeCertificate max_step_size(const DelayModel& dm, double c_lo, double c_hi, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (!(c_lo > 0.0) || !(c_hi > c_lo))
        throw std::invalid_argument("bracket must satisfy 0 < c_lo < c_hi");

    StepSizeCertificate cert;
    cert.tol = tol;
    auto probe = [&](double c) {
        const FeasibilityVerdict v = lmi_feasible(dm, c);
        cert.probes.push_back({c, v.feasible, v.method, v.witness});
        return v.feasible;
    };

    if (!probe(c_lo))
        throw std::invalid_argument("invalid bracket: lower endpoint is not feasible");
    if (probe(c_hi))
        throw std::invalid_argument("invalid bracket: upper endpoint is feasible");

    double lo = c_lo, hi = c_hi;
    while (hi - lo >= tol) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid))
            lo = mid;
        else
            hi = mid;
    }
    cert.c_max = lo;

    // The bisection assumes feasibility flips once in (lo, hi); probe three
    // interior points of the final bracket and fail loudly if they disagree.
    bool seen_infeasible = false;
    for (double f : {0.25, 0.5, 0.75}) {
        const bool feas = probe(lo + f * (hi - lo));
        if (!feas) seen_infeasible = true;
        else if (seen_infeasible)
            throw std::runtime_error("feasibility is not monotone across the final bracket");
    }
    return cert;
}

}  // namespace delcon
