#pragma once

// Shared fixtures and independent numeric helpers for the test suites.

#include "delcon/delay_model.hpp"
#include "delcon/graph.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace testsupport {

inline delcon::Graph path2() { return delcon::from_edges(2, {{1, 2}}); }

inline delcon::Graph path3() { return delcon::from_edges(3, {{1, 2}, {2, 3}}); }

inline delcon::Graph cycle(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= n; ++i) edges.emplace_back(i, i % n + 1);
    return delcon::from_edges(n, edges);
}

inline delcon::Graph complete(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) edges.emplace_back(i, j);
    return delcon::from_edges(n, edges);
}

// Hub is agent 1, spokes 2..n.
inline delcon::Graph star(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 2; i <= n; ++i) edges.emplace_back(1, i);
    return delcon::from_edges(n, edges);
}

// 4-agent complete graph with heterogeneous integer delays; the largest
// delay (7) sits on edge (1,2), delay 1 on (1,3).
inline delcon::DelayModel k4_nonuniform() {
    Eigen::MatrixXi tau(4, 4);
    tau << 0, 7, 1, 5,
           7, 0, 5, 5,
           1, 5, 0, 6,
           5, 5, 6, 0;
    return delcon::make_delay_model(complete(4), tau);
}

// Two agents, one edge, unit delay.
inline delcon::DelayModel p2_unit() {
    Eigen::MatrixXi tau(2, 2);
    tau << 0, 1, 1, 0;
    return delcon::make_delay_model(path2(), tau);
}

// Path 1-2-3 with delays tau_12 = 1, tau_23 = 3.
inline delcon::DelayModel p3_mixed() {
    Eigen::MatrixXi tau(3, 3);
    tau << 0, 1, 0,
           1, 0, 3,
           0, 3, 0;
    return delcon::make_delay_model(path3(), tau);
}

// Row-stochastic 4x4 initial state used across the dynamics tests.
inline Eigen::MatrixXd demo_w0() {
    Eigen::MatrixXd W(4, 4);
    W << 0.1000, 0.4189, 0.0587, 0.4224,
         0.3513, 0.2000, 0.0548, 0.3939,
         0.2165, 0.2407, 0.3000, 0.2427,
         0.2205, 0.2451, 0.0344, 0.5000;
    return W;
}

// Spectral-radius estimate by Frobenius-normalized repeated squaring:
// log rho = lim 2^-t log ||A^(2^t)||. Independent of the library's
// eigen/series machinery, so it can arbitrate between them.
inline double rho_estimate(const Eigen::MatrixXd& A, int doublings = 40) {
    Eigen::MatrixXd M = A;
    double acc = 0.0;
    double scale = 1.0;
    for (int t = 0; t < doublings; ++t) {
        const double s = M.norm();
        if (s == 0.0) return 0.0;
        acc += std::log(s) * scale;
        M = ((M / s) * (M / s)).eval();
        scale *= 0.5;
    }
    acc += std::log(M.norm()) * scale;
    return std::exp(acc);
}

// Connected graph with random extra edges and delays in 1..max_delay.
inline delcon::DelayModel random_model(std::mt19937_64& eng, int max_n = 6,
                                       int max_delay = 6) {
    std::uniform_int_distribution<int> nd(2, max_n);
    const int n = nd(eng);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), eng);
    std::set<std::pair<int, int>> edges;
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        const int a = order[i], b = order[pick(eng)];
        edges.emplace(std::min(a, b), std::max(a, b));
    }
    std::uniform_int_distribution<int> extra(0, n);
    const int extras = extra(eng);
    std::uniform_int_distribution<int> node(1, n);
    for (int e = 0; e < extras; ++e) {
        const int a = node(eng);
        int b = node(eng);
        if (a == b) continue;
        edges.emplace(std::min(a, b), std::max(a, b));
    }
    std::vector<std::pair<int, int>> edge_list(edges.begin(), edges.end());
    delcon::Graph g = delcon::from_edges(n, edge_list);
    Eigen::MatrixXi tau = Eigen::MatrixXi::Zero(n, n);
    std::uniform_int_distribution<int> delay(1, max_delay);
    for (const auto& [a, b] : edge_list) {
        const int d = delay(eng);
        tau(a - 1, b - 1) = d;
        tau(b - 1, a - 1) = d;
    }
    return delcon::make_delay_model(g, tau);
}

}  // namespace testsupport
