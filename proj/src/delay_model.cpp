#include "delcon/delay_model.hpp"

#include <stdexcept>
#include <string>

namespace delcon {

DelayModel make_delay_model(Graph g, const Eigen::MatrixXi& tau) {
    const int n = g.n;
    if (tau.rows() != n || tau.cols() != n)
        throw std::invalid_argument("delay matrix must be " + std::to_string(n) + "x" +
                                    std::to_string(n));
    for (int i = 0; i < n; ++i) {
        if (tau(i, i) != 0)
            throw std::invalid_argument("nonzero self-delay at agent " + std::to_string(i + 1));
        for (int j = i + 1; j < n; ++j)
            if (tau(i, j) != tau(j, i))
                throw std::invalid_argument("asymmetric delay between agents " +
                                            std::to_string(i + 1) + " and " + std::to_string(j + 1));
    }

    Eigen::MatrixXi on_edge = Eigen::MatrixXi::Zero(n, n);
    for (const auto& [i, j] : g.edges) {
        on_edge(i, j) = 1;
        on_edge(j, i) = 1;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (on_edge(i, j) && tau(i, j) < 1)
                throw std::invalid_argument("zero delay on edge (" + std::to_string(i + 1) + "," +
                                            std::to_string(j + 1) + "); delays start at 1");
            if (!on_edge(i, j) && tau(i, j) != 0)
                throw std::invalid_argument("positive delay on non-edge (" + std::to_string(i + 1) +
                                            "," + std::to_string(j + 1) + ")");
        }

    DelayModel dm;
    dm.graph = std::move(g);
    dm.tau = tau;
    dm.tau_max = tau.maxCoeff();
    return dm;
}

Eigen::MatrixXd lag_adjacency(const DelayModel& dm, int m) {
    if (m < 1 || m > dm.tau_max)
        throw std::invalid_argument("lag " + std::to_string(m) + " outside 1.." +
                                    std::to_string(dm.tau_max));
    const int n = dm.graph.n;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [i, j] : dm.graph.edges)
        if (dm.tau(i, j) == m) {
            H(i, j) = 1.0;
            H(j, i) = 1.0;
        }
    return H;
}

DelayAggregates delay_aggregates(const DelayModel& dm) {
    DelayAggregates agg;
    agg.psi = Eigen::VectorXi::Zero(dm.graph.n);
    agg.total_edge_delay = 0;
    for (const auto& [i, j] : dm.graph.edges) {
        const int t = dm.tau(i, j);
        agg.psi(i) += t;
        agg.psi(j) += t;
        agg.total_edge_delay += t;
    }
    return agg;
}

DelayModel uniform_delays(const Graph& g, int d) {
    if (d < 1) throw std::invalid_argument("uniform delay must be >= 1, got " + std::to_string(d));
    Eigen::MatrixXi tau = Eigen::MatrixXi::Zero(g.n, g.n);
    for (const auto& [i, j] : g.edges) {
        tau(i, j) = d;
        tau(j, i) = d;
    }
    return make_delay_model(g, tau);
}

}  // namespace delcon
