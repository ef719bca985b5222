#pragma once

#include "delcon/delay_model.hpp"
#include "delcon/dynamics.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace delcon {

// Delay-augmented linear system: the stacked state
// z(k) = [W(k); W(k-1); ...; W(k-tau_max)] evolves as z(k+1) = A z(k).
// Block row 0 is [(I - c*D), c*H_1, ..., c*H_tau_max]; below it sit shifted
// identity blocks. Rows sum to 1, so A * ones = ones.
struct AugmentedSystem {
    Eigen::MatrixXd A;
    int n = 0;
    int tau_max = 0;
    double c = 0.0;
};

// Left fixed vector v (v^T A = v^T): block 0 is all ones, block m >= 1 is
// c * ones^T * sum_{l>=m} H_l. Induces the conserved quantity v^T z(k) that
// pins down the consensus value.
struct LeftEigenvector {
    Eigen::VectorXd v;
    double beta = 1.0;
};

// Closed-form consensus value: alpha_j = sum_i weights(i) * W0(i, j) with
// positive weights summing to 1.
struct ConsensusPrediction {
    Eigen::VectorXd alpha;
    Eigen::VectorXd weights;
};

struct RoucheBound {
    double bound = 0.0;
    // The closed form is proven for regular graphs; for non-regular input the
    // value is still returned but flagged as a heuristic.
    bool heuristic = false;
};

struct ModeReport {
    double lambda_L = 0.0;   // Laplacian eigenvalue of the mode
    double delta_i = 0.0;    // v_i^T D v_i
    std::vector<double> coeffs;  // monic, descending powers
    std::vector<std::complex<double>> roots;
};

struct ModeStabilityReport {
    std::vector<ModeReport> modes;  // ascending by lambda_L
    bool stable = false;
    bool regular = true;  // verdict is exact only for regular graphs
};

AugmentedSystem augmented_matrix(const DelayModel& dm, double c);

// Throws std::runtime_error if the constructed vector fails v^T A = v^T to
// 1e-12 (would signal a construction bug).
LeftEigenvector left_eigenvector(const DelayModel& dm, double c);

// v^T applied to column j of the stacked history (newest frame first).
double conserved_quantity(const LeftEigenvector& v, const StateHistory& h, int j);

// Uniform-delay consensus value: weights (1 + c*d*deg(i)) / (n + 2*c*d*|E|).
ConsensusPrediction predict_uniform(const Graph& g, int d, double c,
                                    const Eigen::MatrixXd& W0);

// Per-edge delays: weights (1 + c*psi(i)) / (n + 2*c*total_edge_delay).
ConsensusPrediction predict_nonuniform(const DelayModel& dm, double c,
                                       const Eigen::MatrixXd& W0);

// Step-size bound min(1/(d*avg_degree), 2/max_degree) guaranteeing
// convergence for 0 < c < bound on regular graphs with uniform delay d.
RoucheBound rouche_bound(const Graph& g, int d);

// Characteristic polynomial of one Laplacian mode under uniform delay d:
//   p(x) = x^{d+1} - (1 - c*delta_i) x^d - c*(delta_i - lambda_L).
// Coefficients returned monic in descending powers.
std::vector<double> mode_polynomial(double delta_i, double lambda_L, double c, int d);

// Durand-Kerner simultaneous iteration. Input is monic, descending powers,
// degree >= 1. Each root satisfies |p(r)| <= 1e-10 * (1 + |r|)^degree, and
// sweeps continue until the updates stall, so simple roots reach machine
// precision; throws std::runtime_error with residuals after 500 sweeps
// without meeting the residual bound.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs);

// Per-mode root analysis under uniform delay d. Stable iff mode 1 has
// exactly one root at 1 (within 1e-8) and every other root of every mode
// has magnitude < 1. Throws std::invalid_argument on a disconnected graph.
ModeStabilityReport uniform_mode_stability(const Graph& g, int d, double c);

}  // namespace delcon
