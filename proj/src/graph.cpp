#include "delcon/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace delcon {

Eigen::MatrixXd Graph::adjacency() const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [i, j] : edges) {
        H(i, j) = 1.0;
        H(j, i) = 1.0;
    }
    return H;
}

Eigen::VectorXd Graph::degrees() const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    for (const auto& [i, j] : edges) {
        d(i) += 1.0;
        d(j) += 1.0;
    }
    return d;
}

Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 2) throw std::invalid_argument("graph needs at least 2 agents, got " + std::to_string(n));
    std::set<std::pair<int, int>> canon;
    for (const auto& [a, b] : edges) {
        if (a < 1 || a > n || b < 1 || b > n)
            throw std::invalid_argument("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                        ") out of range 1.." + std::to_string(n));
        if (a == b)
            throw std::invalid_argument("self-loop (" + std::to_string(a) + "," + std::to_string(a) + ")");
        canon.insert({std::min(a, b) - 1, std::max(a, b) - 1});
    }
    Graph g;
    g.n = n;
    g.edges.assign(canon.begin(), canon.end());
    return g;
}

GraphStats graph_stats(const Graph& g) {
    GraphStats s;
    s.edge_count = static_cast<int>(g.edges.size());
    std::vector<int> deg(g.n, 0);
    std::vector<std::vector<int>> adj(g.n);
    for (const auto& [i, j] : g.edges) {
        ++deg[i];
        ++deg[j];
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    s.max_degree = *std::max_element(deg.begin(), deg.end());
    s.avg_degree = 2.0 * s.edge_count / g.n;
    if (*std::min_element(deg.begin(), deg.end()) == s.max_degree) s.regular_degree = s.max_degree;

    std::vector<char> seen(g.n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : adj[u])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                q.push(w);
            }
    }
    s.connected = (reached == g.n);
    return s;
}

Eigen::MatrixXd laplacian(const Graph& g) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(g.n, g.n);
    for (const auto& [i, j] : g.edges) {
        L(i, j) = -1.0;
        L(j, i) = -1.0;
        L(i, i) += 1.0;
        L(j, j) += 1.0;
    }
    return L;
}

SpectralDecomposition symmetric_eigen(const Eigen::MatrixXd& M, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("eigensolver tol must be positive");
    if (M.rows() != M.cols()) throw std::invalid_argument("eigensolver input must be square");
    const int n = static_cast<int>(M.rows());
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > tol * scale)
        throw std::invalid_argument("eigensolver input is not symmetric within tolerance");

    Eigen::MatrixXd A = 0.5 * (M + M.transpose());
    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
    const double norm_all = A.norm();

    auto off_norm = [&]() {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) s += 2.0 * A(p, q) * A(p, q);
        return std::sqrt(s);
    };

    const int max_sweeps = 100;
    bool done = (norm_all == 0.0) || (n == 1) || (off_norm() <= tol * norm_all);
    for (int sweep = 0; !done && sweep < max_sweeps; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // A <- G^T A G with the rotation G acting in the (p, q) plane.
                for (int i = 0; i < n; ++i) {
                    const double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const double apj = A(p, j), aqj = A(q, j);
                    A(p, j) = c * apj - s * aqj;
                    A(q, j) = s * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
        done = off_norm() <= tol * norm_all;
    }
    if (!done) throw std::runtime_error("Jacobi eigensolver did not converge within 100 sweeps");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return A(a, a) < A(b, b); });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues(k) = A(order[k], order[k]);
        out.eigenvectors.col(k) = V.col(order[k]);
    }
    return out;
}

}  // namespace delcon
