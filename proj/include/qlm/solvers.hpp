#ifndef QLM_SOLVERS_HPP
#define QLM_SOLVERS_HPP

#include <vector>

#include "qlm/core.hpp"

namespace qlm {

struct WeightMatrix {
    int n = 0;
    std::vector<double> w;  // row-major

    WeightMatrix() = default;
    explicit WeightMatrix(int n_) : n(n_), w(static_cast<std::size_t>(n_) * n_, 0.0) {}

    double at(int i, int j) const { return w[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return w[static_cast<std::size_t>(i) * n + j]; }

    static WeightMatrix from(const ValuationProfile& p) { return {p.n, p.values}; }
    static WeightMatrix from(const SimulatedProfile& p) { return {p.n, p.simvalues}; }

private:
    WeightMatrix(int n_, std::vector<double> w_) : n(n_), w(std::move(w_)) {}
};

struct Edge {
    int u = 0;
    int v = 0;
    double w = 0.0;
};

struct EdgeWeightedGraph {
    int num_vertices = 0;
    std::vector<Edge> edges;
    bool directed = false;

    void validate() const;  // no self-loops, finite non-negative weights
};

// Maximum-weight perfect matching on a square real matrix (Jonker-Volgenant
// style shortest augmenting paths on the negated weights). Deterministic.
Matching hungarian_max_weight(const WeightMatrix& w);

// Exhaustive optimum over all n! permutations; verification oracle, n <= 10.
Matching brute_force_opt(const WeightMatrix& w);

// Bipartite graph as adjacency lists of the left side.
struct BipartiteGraph {
    int n_left = 0;
    int n_right = 0;
    std::vector<std::vector<int>> adj;  // adj[u] = right neighbours of left u

    BipartiteGraph() = default;
    BipartiteGraph(int l, int r) : n_left(l), n_right(r), adj(l) {}
    void add_edge(int u, int v) { adj[u].push_back(v); }
};

// Hopcroft-Karp. Returns match_left[u] = right partner of u, or -1.
std::vector<int> max_cardinality_bipartite(const BipartiteGraph& g);
int max_cardinality_bipartite_size(const BipartiteGraph& g);

// Maximal matching by descending-weight scan, ties broken lexicographically
// by (u, v). Weight >= 1/2 of the optimum. Undirected input only.
std::vector<Edge> greedy_general_matching(const EdgeWeightedGraph& g);

double matching_weight(const std::vector<Edge>& edges);
bool is_valid_matching(const EdgeWeightedGraph& g, const std::vector<Edge>& edges);

}  // namespace qlm

#endif
