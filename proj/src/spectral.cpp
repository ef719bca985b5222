#include "delcon/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace delcon {

namespace {

// Shared closed form: weights_i = (1 + c*psi_i) / (n + 2*c*total). The
// uniform case feeds psi_i = d*deg(i), total = d*|E| through the same code
// path so the two predictors agree bit-for-bit when delays are equal.
ConsensusPrediction predict_from_delay_load(const Eigen::VectorXi& psi, long long total,
                                            double c, int n, const Eigen::MatrixXd& W0) {
    if (!(c > 0.0)) throw std::invalid_argument("step size must be positive");
    if (W0.rows() != n) throw std::invalid_argument("W0 row count does not match agent count");
    ConsensusPrediction out;
    out.weights.resize(n);
    const double denom = n + 2.0 * c * static_cast<double>(total);
    for (int i = 0; i < n; ++i) out.weights(i) = (1.0 + c * psi(i)) / denom;
    out.alpha = W0.transpose() * out.weights;
    return out;
}

}  // namespace

AugmentedSystem augmented_matrix(const DelayModel& dm, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("step size must be positive");
    const int n = dm.graph.n;
    const int T = dm.tau_max;
    const int N = n * (T + 1);

    AugmentedSystem sys;
    sys.n = n;
    sys.tau_max = T;
    sys.c = c;
    sys.A = Eigen::MatrixXd::Zero(N, N);

    Eigen::MatrixXd P0 = Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd deg = dm.graph.degrees();
    for (int i = 0; i < n; ++i) P0(i, i) = 1.0 - c * deg(i);
    sys.A.topLeftCorner(n, n) = P0;
    for (int m = 1; m <= T; ++m) {
        sys.A.block(0, m * n, n, n) = c * lag_adjacency(dm, m);
        sys.A.block(m * n, (m - 1) * n, n, n) = Eigen::MatrixXd::Identity(n, n);
    }
    return sys;
}

LeftEigenvector left_eigenvector(const DelayModel& dm, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("step size must be positive");
    const int n = dm.graph.n;
    const int T = dm.tau_max;

    LeftEigenvector lv;
    lv.beta = 1.0;
    lv.v.resize(n * (T + 1));
    lv.v.head(n).setOnes();

    // Block m holds c * column sums of sum_{l >= m} H_l (tail of the lag split).
    Eigen::MatrixXd tail = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::VectorXd> tail_sums(T + 1);
    for (int m = T; m >= 1; --m) {
        tail += lag_adjacency(dm, m);
        tail_sums[m] = tail.colwise().sum().transpose();
    }
    for (int m = 1; m <= T; ++m) lv.v.segment(m * n, n) = c * tail_sums[m];

    const AugmentedSystem sys = augmented_matrix(dm, c);
    const double defect = (lv.v.transpose() * sys.A - lv.v.transpose()).cwiseAbs().maxCoeff();
    if (defect > 1e-12)
        throw std::runtime_error("left eigenvector identity violated (defect " +
                                 std::to_string(defect) + ")");
    return lv;
}

double conserved_quantity(const LeftEigenvector& lv, const StateHistory& h, int j) {
    const auto n = h.frames[0].rows();
    if (lv.v.size() != static_cast<Eigen::Index>(h.frames.size()) * n)
        throw std::invalid_argument("eigenvector length does not match stacked history");
    if (j < 0 || j >= h.frames[0].cols())
        throw std::invalid_argument("column index out of range");
    double acc = 0.0;
    for (std::size_t m = 0; m < h.frames.size(); ++m)
        acc += lv.v.segment(static_cast<Eigen::Index>(m) * n, n).dot(h.frames[m].col(j));
    return acc;
}

ConsensusPrediction predict_uniform(const Graph& g, int d, double c,
                                    const Eigen::MatrixXd& W0) {
    if (d < 1) throw std::invalid_argument("uniform delay must be >= 1");
    Eigen::VectorXi psi(g.n);
    std::vector<int> deg(g.n, 0);
    for (const auto& [i, j] : g.edges) {
        ++deg[i];
        ++deg[j];
    }
    for (int i = 0; i < g.n; ++i) psi(i) = d * deg[i];
    const long long total = static_cast<long long>(d) * static_cast<long long>(g.edges.size());
    return predict_from_delay_load(psi, total, c, g.n, W0);
}

ConsensusPrediction predict_nonuniform(const DelayModel& dm, double c,
                                       const Eigen::MatrixXd& W0) {
    const DelayAggregates agg = delay_aggregates(dm);
    return predict_from_delay_load(agg.psi, agg.total_edge_delay, c, dm.graph.n, W0);
}

RoucheBound rouche_bound(const Graph& g, int d) {
    if (d < 1) throw std::invalid_argument("uniform delay must be >= 1");
    const GraphStats stats = graph_stats(g);
    RoucheBound rb;
    rb.bound = std::min(1.0 / (d * stats.avg_degree), 2.0 / stats.max_degree);
    rb.heuristic = !stats.regular_degree.has_value();
    return rb;
}

std::vector<double> mode_polynomial(double delta_i, double lambda_L, double c, int d) {
    if (d < 1) throw std::invalid_argument("uniform delay must be >= 1");
    std::vector<double> coeffs(d + 2, 0.0);
    coeffs[0] = 1.0;                        // x^{d+1}
    coeffs[1] = -(1.0 - c * delta_i);       // x^d
    coeffs[d + 1] = -c * (delta_i - lambda_L);  // constant term
    return coeffs;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs) {
    if (coeffs.size() < 2) throw std::invalid_argument("polynomial degree must be >= 1");
    if (coeffs[0] != 1.0) throw std::invalid_argument("polynomial must be monic");
    const int deg = static_cast<int>(coeffs.size()) - 1;

    const auto eval = [&](std::complex<double> x) {
        std::complex<double> acc = coeffs[0];
        for (int i = 1; i <= deg; ++i) acc = acc * x + coeffs[i];
        return acc;
    };

    double max_coeff = 0.0;
    for (int i = 1; i <= deg; ++i) max_coeff = std::max(max_coeff, std::abs(coeffs[i]));
    const double radius = std::max(1.0, 1.0 + max_coeff);
    // Irrational angle offset so no starting point sits on a root-symmetry axis.
    const double offset = 0.5 * (std::sqrt(5.0) - 1.0);

    std::vector<std::complex<double>> x(deg);
    for (int k = 0; k < deg; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / deg + offset;
        x[k] = std::polar(radius, ang);
    }

    const int cap = 500;
    const double res_tol = 1e-10;
    auto residual_ok = [&]() {
        for (int k = 0; k < deg; ++k)
            if (std::abs(eval(x[k])) > res_tol * std::pow(1.0 + std::abs(x[k]), deg))
                return false;
        return true;
    };

    // Sweeps continue past the residual threshold until the updates stall:
    // a residual of 1e-10 alone only bounds the root error by 1e-10/|p'(r)|,
    // while the extra sweeps land simple roots at machine precision. Multiple
    // roots converge linearly and trip the stagnation exit instead.
    double prev_move = std::numeric_limits<double>::infinity();
    int stagnant = 0;
    for (int it = 0; it < cap; ++it) {
        double move = 0.0;
        for (int k = 0; k < deg; ++k) {
            std::complex<double> den = 1.0;
            for (int j = 0; j < deg; ++j)
                if (j != k) den *= x[k] - x[j];
            if (den == 0.0) den = std::complex<double>(1e-12, 1e-12);
            const std::complex<double> delta = eval(x[k]) / den;
            x[k] -= delta;
            move = std::max(move, std::abs(delta) / (1.0 + std::abs(x[k])));
        }
        if (move < 1e-15) break;
        stagnant = move >= 0.5 * prev_move ? stagnant + 1 : 0;
        prev_move = move;
        if (stagnant >= 3 && residual_ok()) break;
    }
    if (!residual_ok()) {
        std::ostringstream msg;
        msg << "root iteration did not converge after " << cap << " sweeps; residuals:";
        for (int k = 0; k < deg; ++k) msg << " " << std::abs(eval(x[k]));
        throw std::runtime_error(msg.str());
    }

    std::sort(x.begin(), x.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return x;
}

ModeStabilityReport uniform_mode_stability(const Graph& g, int d, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("step size must be positive");
    const GraphStats stats = graph_stats(g);
    if (!stats.connected) throw std::invalid_argument("graph must be connected");

    const SpectralDecomposition eig = symmetric_eigen(laplacian(g));
    const Eigen::VectorXd deg = g.degrees();

    ModeStabilityReport report;
    report.regular = stats.regular_degree.has_value();
    report.modes.reserve(g.n);

    const double unit_tol = 1e-8;
    bool mode1_ok = false;
    bool rest_ok = true;

    for (int i = 0; i < g.n; ++i) {
        ModeReport mode;
        mode.lambda_L = eig.eigenvalues(i);
        const Eigen::VectorXd vi = eig.eigenvectors.col(i);
        mode.delta_i = vi.dot(deg.asDiagonal() * vi);
        mode.coeffs = mode_polynomial(mode.delta_i, mode.lambda_L, c, d);
        mode.roots = polynomial_roots(mode.coeffs);

        if (i == 0) {
            int unit_roots = 0;
            bool others_inside = true;
            for (const auto& r : mode.roots) {
                if (std::abs(r - std::complex<double>(1.0, 0.0)) <= unit_tol)
                    ++unit_roots;
                else if (std::abs(r) >= 1.0)
                    others_inside = false;
            }
            mode1_ok = (unit_roots == 1) && others_inside;
        } else {
            for (const auto& r : mode.roots)
                if (std::abs(r) >= 1.0) rest_ok = false;
        }
        report.modes.push_back(std::move(mode));
    }
    report.stable = mode1_ok && rest_ok;
    return report;
}

}  // namespace delcon
