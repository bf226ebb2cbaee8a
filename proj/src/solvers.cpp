#include "qlm/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qlm {

void EdgeWeightedGraph::validate() const {
    for (const Edge& e : edges) {
        if (e.u < 0 || e.u >= num_vertices || e.v < 0 || e.v >= num_vertices)
            throw std::invalid_argument("EdgeWeightedGraph: endpoint out of range");
        if (e.u == e.v) throw std::invalid_argument("EdgeWeightedGraph: self-loop");
        if (!(e.w >= 0.0) || !std::isfinite(e.w))
            throw std::invalid_argument("EdgeWeightedGraph: weights must be finite and >= 0");
    }
}

// Shortest-augmenting-path assignment on costs c = -w with row/column
// potentials; the classic O(n^3) scheme over reals, no integer scaling.
Matching hungarian_max_weight(const WeightMatrix& wm) {
    const int n = wm.n;
    if (n < 1 || wm.w.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("hungarian_max_weight: non-square input");
    const double INF = std::numeric_limits<double>::infinity();

    // 1-based potentials; column 0 is the virtual root.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0);    // p[j] = row matched to column j
    std::vector<int> way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, INF);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = INF;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -wm.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    Matching m;
    m.assignment.assign(n, -1);
    for (int j = 1; j <= n; ++j) m.assignment[p[j] - 1] = j - 1;
    return m;
}

Matching brute_force_opt(const WeightMatrix& wm) {
    const int n = wm.n;
    if (n < 1 || wm.w.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("brute_force_opt: non-square input");
    if (n > 10) throw std::invalid_argument("brute_force_opt: n > 10");

    std::vector<int> perm(n), best(n);
    std::iota(perm.begin(), perm.end(), 0);
    best = perm;
    double best_w = -1.0;
    do {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += wm.at(i, perm[i]);
        if (s > best_w) {
            best_w = s;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Matching{best};
}

std::vector<int> max_cardinality_bipartite(const BipartiteGraph& g) {
    const int nl = g.n_left, nr = g.n_right;
    const int INF = std::numeric_limits<int>::max();
    std::vector<int> match_l(nl, -1), match_r(nr, -1), dist(nl);
    std::vector<int> q(nl);

    auto bfs = [&]() {
        int head = 0, tail = 0;
        for (int u = 0; u < nl; ++u) {
            if (match_l[u] < 0) {
                dist[u] = 0;
                q[tail++] = u;
            } else {
                dist[u] = INF;
            }
        }
        bool found = false;
        while (head < tail) {
            const int u = q[head++];
            for (int v : g.adj[u]) {
                const int w = match_r[v];
                if (w < 0) {
                    found = true;
                } else if (dist[w] == INF) {
                    dist[w] = dist[u] + 1;
                    q[tail++] = w;
                }
            }
        }
        return found;
    };

    std::function<bool(int)> dfs = [&](int u) {
        for (int v : g.adj[u]) {
            const int w = match_r[v];
            if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
                match_l[u] = v;
                match_r[v] = u;
                return true;
            }
        }
        dist[u] = INF;
        return false;
    };

    while (bfs())
        for (int u = 0; u < nl; ++u)
            if (match_l[u] < 0) dfs(u);
    return match_l;
}

int max_cardinality_bipartite_size(const BipartiteGraph& g) {
    const auto m = max_cardinality_bipartite(g);
    return static_cast<int>(std::count_if(m.begin(), m.end(), [](int x) { return x >= 0; }));
}

std::vector<Edge> greedy_general_matching(const EdgeWeightedGraph& g) {
    if (g.directed) throw std::invalid_argument("greedy_general_matching: directed input");
    g.validate();
    std::vector<Edge> order = g.edges;
    for (Edge& e : order)
        if (e.u > e.v) std::swap(e.u, e.v);
    std::sort(order.begin(), order.end(), [](const Edge& a, const Edge& b) {
        if (a.w != b.w) return a.w > b.w;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    std::vector<char> used(g.num_vertices, 0);
    std::vector<Edge> out;
    for (const Edge& e : order) {
        if (used[e.u] || used[e.v]) continue;
        used[e.u] = used[e.v] = 1;
        out.push_back(e);
    }
    return out;
}

double matching_weight(const std::vector<Edge>& edges) {
    double s = 0.0;
    for (const Edge& e : edges) s += e.w;
    return s;
}

bool is_valid_matching(const EdgeWeightedGraph& g, const std::vector<Edge>& edges) {
    std::vector<char> used(g.num_vertices, 0);
    for (const Edge& e : edges) {
        if (e.u < 0 || e.u >= g.num_vertices || e.v < 0 || e.v >= g.num_vertices) return false;
        if (used[e.u] || used[e.v]) return false;
        used[e.u] = used[e.v] = 1;
    }
    return true;
}

}  // namespace qlm
