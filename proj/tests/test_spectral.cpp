#include "delcon/spectral.hpp"

#include "delcon/scenario_io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>

using namespace delcon;
using namespace testsupport;

TEST_CASE("augmented matrix of the unit-delay pair") {
    const AugmentedSystem sys = augmented_matrix(p2_unit(), 0.1);
    Eigen::MatrixXd expected(4, 4);
    expected << 0.9, 0.0, 0.0, 0.1,
                0.0, 0.9, 0.1, 0.0,
                1.0, 0.0, 0.0, 0.0,
                0.0, 1.0, 0.0, 0.0;
    CHECK_EQ((sys.A - expected).cwiseAbs().maxCoeff(), 0.0);
    CHECK_EQ(sys.n, 2);
    CHECK_EQ(sys.tau_max, 1);
}

TEST_CASE("augmented matrix is row-stochastic in the generalized sense") {
    const AugmentedSystem sys = augmented_matrix(k4_nonuniform(), 0.3);
    CHECK_EQ(sys.A.rows(), 32);  // 4 agents x (tau_max + 1)
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(32);
    CHECK((sys.A * ones - ones).cwiseAbs().maxCoeff() <= 1e-14);

    std::mt19937_64 eng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const DelayModel dm = random_model(eng);
        const AugmentedSystem s = augmented_matrix(dm, 0.17);
        const int N = dm.graph.n * (dm.tau_max + 1);
        const Eigen::VectorXd e = Eigen::VectorXd::Ones(N);
        CHECK((s.A * e - e).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("left eigenvector blocks follow the delay tails") {
    const LeftEigenvector p2 = left_eigenvector(p2_unit(), 0.1);
    Eigen::Vector4d expected(1.0, 1.0, 0.1, 0.1);
    CHECK((p2.v - expected).cwiseAbs().maxCoeff() <= 1e-15);

    // uniform delay 2 on C4: both delayed blocks carry c * degree = 0.2
    const LeftEigenvector c4 = left_eigenvector(uniform_delays(cycle(4), 2), 0.1);
    REQUIRE_EQ(c4.v.size(), 12);
    CHECK(c4.v.head(4).isApproxToConstant(1.0));
    CHECK(c4.v.segment(4, 4).isApproxToConstant(0.2));
    CHECK(c4.v.tail(4).isApproxToConstant(0.2));

    std::mt19937_64 eng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const DelayModel dm = random_model(eng);
        const LeftEigenvector lv = left_eigenvector(dm, 0.23);
        const AugmentedSystem sys = augmented_matrix(dm, 0.23);
        CHECK((lv.v.transpose() * sys.A - lv.v.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        // normalization constant equals n + 2*c*total delay
        const DelayAggregates agg = delay_aggregates(dm);
        const double expected_sum =
            dm.graph.n + 2.0 * 0.23 * static_cast<double>(agg.total_edge_delay);
        CHECK_EQ(lv.v.sum(), doctest::Approx(expected_sum).epsilon(1e-12));
    }
}

TEST_CASE("the weighted column sum is conserved along trajectories") {
    const DelayModel dm = p2_unit();
    const LeftEigenvector lv = left_eigenvector(dm, 0.1);
    Eigen::MatrixXd W0(2, 1);
    W0 << 0.0, 1.0;

    StateHistory h = init_history(W0, dm);
    CHECK_EQ(conserved_quantity(lv, h, 0), doctest::Approx(1.1).epsilon(1e-15));
    h = step(h, dm, 0.1);
    CHECK_EQ(conserved_quantity(lv, h, 0), doctest::Approx(1.1).epsilon(1e-15));
    h = step(h, dm, 0.1);
    CHECK_EQ(conserved_quantity(lv, h, 0), doctest::Approx(1.1).epsilon(1e-15));

    const StateHistory zeros = init_history(Eigen::MatrixXd::Zero(2, 1), dm);
    CHECK_EQ(conserved_quantity(lv, zeros, 0), 0.0);

    CHECK_THROWS_AS(conserved_quantity(lv, h, 1), std::invalid_argument);
}

TEST_CASE("uniform-delay consensus weights on the star graph") {
    // hub degree 3, spokes 1; d = 2, c = 0.1 -> hub weight 1.6/5.2 = 4/13
    const Graph g = star(4);
    Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(4, 1);
    W0(0, 0) = 1.0;
    const ConsensusPrediction pred = predict_uniform(g, 2, 0.1, W0);
    CHECK_EQ(pred.alpha(0), doctest::Approx(4.0 / 13.0).epsilon(1e-15));
    CHECK_EQ(pred.weights.sum(), doctest::Approx(1.0).epsilon(1e-15));

    const auto [traj, report] = simulate(W0, uniform_delays(g, 2), 0.1, 100000, 1e-10, 10.0);
    REQUIRE(report.converged);
    CHECK_EQ((*report.consensus_vector)(0), doctest::Approx(pred.alpha(0)).epsilon(1e-8));
}

TEST_CASE("heterogeneous-delay consensus weights on the path") {
    // psi = (1, 4, 3), total delay 4 -> leading weight 1.1/3.8
    Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(3, 1);
    W0(0, 0) = 1.0;
    const DelayModel dm = p3_mixed();
    const ConsensusPrediction pred = predict_nonuniform(dm, 0.1, W0);
    CHECK_EQ(pred.alpha(0), doctest::Approx(1.1 / 3.8).epsilon(1e-15));

    const auto [traj, report] = simulate(W0, dm, 0.1, 100000, 1e-10, 10.0);
    REQUIRE(report.converged);
    CHECK_EQ((*report.consensus_vector)(0), doctest::Approx(pred.alpha(0)).epsilon(1e-8));

    Eigen::MatrixXd half(2, 1);
    half << 0.0, 1.0;
    CHECK_EQ(predict_nonuniform(p2_unit(), 0.1, half).alpha(0),
             doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("regular graphs average uniformly; predictors agree when delays match") {
    std::mt19937_64 eng(23);
    const Eigen::MatrixXd W0 = seeded_w0(5, 9);
    const ConsensusPrediction pred = predict_uniform(complete(5), 3, 0.07, W0);
    CHECK((pred.weights - Eigen::VectorXd::Constant(5, 0.2)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((pred.alpha - Eigen::VectorXd(W0.colwise().mean().transpose()))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);

    for (int trial = 0; trial < 10; ++trial) {
        const DelayModel dm = random_model(eng);
        const Eigen::MatrixXd R = seeded_w0(dm.graph.n, 100 + trial);
        const ConsensusPrediction nu = predict_nonuniform(dm, 0.11, R);
        CHECK_EQ(nu.weights.sum(), doctest::Approx(1.0).epsilon(1e-12));
        CHECK((nu.weights.array() > 0.0).all());
    }

    // same delay everywhere: both predictors run the identical code path
    const DelayModel uni = uniform_delays(cycle(5), 4);
    const Eigen::MatrixXd R = seeded_w0(5, 17);
    const ConsensusPrediction a = predict_uniform(cycle(5), 4, 0.05, R);
    const ConsensusPrediction b = predict_nonuniform(uni, 0.05, R);
    CHECK_EQ((a.alpha - b.alpha).cwiseAbs().maxCoeff(), 0.0);
    CHECK_EQ((a.weights - b.weights).cwiseAbs().maxCoeff(), 0.0);
}

TEST_CASE("step-size bound closed form") {
    const RoucheBound c4 = rouche_bound(cycle(4), 3);
    CHECK_EQ(c4.bound, doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK_FALSE(c4.heuristic);

    const RoucheBound p2 = rouche_bound(path2(), 1);
    CHECK_EQ(p2.bound, doctest::Approx(1.0).epsilon(1e-15));

    const RoucheBound k4 = rouche_bound(complete(4), 7);
    CHECK_EQ(k4.bound, doctest::Approx(1.0 / 21.0).epsilon(1e-15));

    CHECK(rouche_bound(star(4), 1).heuristic);
    CHECK_THROWS_AS(rouche_bound(cycle(4), 0), std::invalid_argument);
}

TEST_CASE("mode polynomial coefficients") {
    const std::vector<double> a = mode_polynomial(2.0, 0.0, 0.1, 1);
    REQUIRE_EQ(a.size(), 3);
    CHECK_EQ(a[0], 1.0);
    CHECK_EQ(a[1], doctest::Approx(-0.8).epsilon(1e-15));
    CHECK_EQ(a[2], doctest::Approx(-0.2).epsilon(1e-15));

    const std::vector<double> b = mode_polynomial(1.0, 2.0, 0.1, 1);
    CHECK_EQ(b[1], doctest::Approx(-0.9).epsilon(1e-15));
    CHECK_EQ(b[2], doctest::Approx(0.1).epsilon(1e-15));

    // c = 0 degenerates to x^{d+1} - x^d
    const std::vector<double> z = mode_polynomial(5.0, 1.0, 0.0, 3);
    REQUIRE_EQ(z.size(), 5);
    CHECK_EQ(z[0], 1.0);
    CHECK_EQ(z[1], -1.0);
    CHECK_EQ(z[2], 0.0);
    CHECK_EQ(z[3], 0.0);
    CHECK_EQ(z[4], 0.0);
}

TEST_CASE("polynomial_roots on known factorizations") {
    const auto r1 = polynomial_roots({1.0, -0.8, -0.2});  // (x - 1)(x + 0.2)
    REQUIRE_EQ(r1.size(), 2);
    CHECK_EQ(std::abs(r1[0] - std::complex<double>(-0.2, 0.0)), doctest::Approx(0.0).epsilon(1e-10));
    CHECK_EQ(std::abs(r1[1] - std::complex<double>(1.0, 0.0)), doctest::Approx(0.0).epsilon(1e-10));

    const auto r2 = polynomial_roots({1.0, 0.0, -1.0});  // x^2 - 1
    CHECK_EQ(std::abs(r2[0] - std::complex<double>(-1.0, 0.0)), doctest::Approx(0.0).epsilon(1e-10));
    CHECK_EQ(std::abs(r2[1] - std::complex<double>(1.0, 0.0)), doctest::Approx(0.0).epsilon(1e-10));

    // A triple root only carries a third of the residual's digits:
    // |p(r)| <= 1e-10 allows |r| up to about (1e-10)^(1/3).
    const auto r3 = polynomial_roots({1.0, 0.0, 0.0, 0.0});
    for (const auto& r : r3) CHECK(std::abs(r) <= 1e-3);

    CHECK_THROWS_AS(polynomial_roots({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(polynomial_roots({2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("polynomial_roots satisfies the residual contract on random inputs") {
    std::mt19937_64 eng(31);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int deg = 1 + static_cast<int>(eng() % 6);
        std::vector<double> coeffs(deg + 1);
        coeffs[0] = 1.0;
        for (int i = 1; i <= deg; ++i) coeffs[i] = coeff(eng);
        const auto roots = polynomial_roots(coeffs);
        REQUIRE_EQ(roots.size(), static_cast<std::size_t>(deg));
        for (const auto& r : roots) {
            std::complex<double> acc = coeffs[0];
            for (int i = 1; i <= deg; ++i) acc = acc * r + coeffs[i];
            CHECK(std::abs(acc) <= 1e-10 * std::pow(1.0 + std::abs(r), deg));
        }
        // sorted by real part, imaginary breaks ties
        for (std::size_t i = 1; i < roots.size(); ++i) {
            const bool ordered = roots[i - 1].real() < roots[i].real() ||
                                 (roots[i - 1].real() == roots[i].real() &&
                                  roots[i - 1].imag() <= roots[i].imag());
            CHECK(ordered);
        }
    }
}

TEST_CASE("mode analysis of the unit-delay pair") {
    const ModeStabilityReport rep = uniform_mode_stability(path2(), 1, 0.1);
    REQUIRE_EQ(rep.modes.size(), 2);
    CHECK(rep.regular);
    CHECK(rep.stable);

    // lambda_L = 0 mode: roots {-0.1, 1}
    CHECK_EQ(rep.modes[0].lambda_L, doctest::Approx(0.0).epsilon(1e-12));
    CHECK_EQ(std::abs(rep.modes[0].roots[0] - std::complex<double>(-0.1, 0.0)),
             doctest::Approx(0.0).epsilon(1e-10));
    CHECK_EQ(std::abs(rep.modes[0].roots[1] - std::complex<double>(1.0, 0.0)),
             doctest::Approx(0.0).epsilon(1e-10));

    // lambda_L = 2 mode: x^2 - 0.9x + 0.1, roots (0.9 +- sqrt(0.41))/2
    CHECK_EQ(rep.modes[1].lambda_L, doctest::Approx(2.0).epsilon(1e-12));
    const double lo = (0.9 - std::sqrt(0.41)) / 2.0;
    const double hi = (0.9 + std::sqrt(0.41)) / 2.0;
    CHECK_EQ(rep.modes[1].roots[0].real(), doctest::Approx(lo).epsilon(1e-10));
    CHECK_EQ(rep.modes[1].roots[1].real(), doctest::Approx(hi).epsilon(1e-10));
}

TEST_CASE("mode analysis flags stability regimes") {
    CHECK(uniform_mode_stability(cycle(4), 3, 0.15).stable);   // below the 1/6 bound
    CHECK_FALSE(uniform_mode_stability(cycle(4), 3, 1.01).stable);
    CHECK_FALSE(uniform_mode_stability(star(4), 1, 0.1).regular);
    CHECK_THROWS_AS(uniform_mode_stability(from_edges(4, {{1, 2}}), 1, 0.1),
                    std::invalid_argument);
}
