#pragma once

#include "delcon/graph.hpp"

#include <Eigen/Dense>

namespace delcon {

// A graph whose every edge carries a constant integer delay >= 1 (an agent
// always sees its own state undelayed, so the diagonal is zero).
struct DelayModel {
    Graph graph;
    Eigen::MatrixXi tau;  // symmetric, zero diagonal, >=1 exactly on edges
    int tau_max = 0;
};

struct DelayAggregates {
    Eigen::VectorXi psi;        // psi(i) = sum of delays of edges at i
    long long total_edge_delay = 0;  // each edge counted once
};

// Validate and attach a delay matrix. Throws std::invalid_argument on a
// dimension mismatch, asymmetry, nonzero diagonal, a zero delay on an edge,
// or a positive delay on a non-edge.
DelayModel make_delay_model(Graph g, const Eigen::MatrixXi& tau);

// Adjacency restricted to edges with delay exactly m (1 <= m <= tau_max).
Eigen::MatrixXd lag_adjacency(const DelayModel& dm, int m);

DelayAggregates delay_aggregates(const DelayModel& dm);

// Every edge gets the same delay d >= 1.
DelayModel uniform_delays(const Graph& g, int d);

}  // namespace delcon
