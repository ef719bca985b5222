#pragma once

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

namespace delcon {

// Undirected simple graph. Agents are 1-based at the API boundary and
// 0-based internally; `edges` holds each unordered pair once as (i, j)
// with i < j, 0-based.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    Eigen::MatrixXd adjacency() const;
    Eigen::VectorXd degrees() const;
};

struct GraphStats {
    int max_degree = 0;
    double avg_degree = 0.0;  // 2|E|/n
    int edge_count = 0;
    bool connected = false;
    std::optional<int> regular_degree;  // present iff all degrees equal
};

// Orthonormal eigendecomposition of a symmetric matrix, eigenvalues ascending.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // columns, same order as eigenvalues
};

// Build a graph from 1-based endpoint pairs; duplicates are merged.
// Throws std::invalid_argument on n < 2, out-of-range index, or self-loop.
Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

GraphStats graph_stats(const Graph& g);

// L = D - H. Integer-valued entries, so L*ones is exactly zero.
Eigen::MatrixXd laplacian(const Graph& g);

// Cyclic Jacobi diagonalization. tol is relative: sweeps stop once the
// off-diagonal Frobenius mass drops below tol*||M||_F. Throws
// std::invalid_argument on non-symmetric input and std::runtime_error if
// 100 sweeps do not reach the threshold.
SpectralDecomposition symmetric_eigen(const Eigen::MatrixXd& M, double tol = 1e-12);

}  // namespace delcon
