#include "qlm/graphmax.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qlm/algorithms.hpp"

namespace qlm {

std::string to_string(WeightMode m) {
    switch (m) {
        case WeightMode::agent_item: return "agent-item";
        case WeightMode::undirected_sum: return "undirected-sum";
        case WeightMode::directed: return "directed";
    }
    return "?";
}

WeightMode weight_mode_from_string(const std::string& s) {
    if (s == "agent-item") return WeightMode::agent_item;
    if (s == "undirected-sum") return WeightMode::undirected_sum;
    if (s == "directed") return WeightMode::directed;
    throw std::invalid_argument("unknown weight mode: " + s);
}

void GraphSkeleton::validate() const {
    if (num_vertices < 1 || num_agents < 1 || num_agents > num_vertices)
        throw std::invalid_argument("GraphSkeleton: bad vertex/agent counts");
    if (rankings.size() != static_cast<std::size_t>(num_agents))
        throw std::invalid_argument("GraphSkeleton: one ranking per agent required");
    for (auto [u, v] : edges) {
        if (u < 0 || u >= num_vertices || v < 0 || v >= num_vertices || u == v)
            throw std::invalid_argument("GraphSkeleton: bad edge");
    }
    if (mode == WeightMode::agent_item && num_agents == num_vertices)
        throw std::invalid_argument("GraphSkeleton: agent-item mode needs an item side");
    if (mode == WeightMode::directed && !directed)
        throw std::invalid_argument("GraphSkeleton: directed mode on undirected graph");
}

int find_top_feasible(int agent, const OrdinalGraphProblem& prob) {
    for (int j : prob.skeleton.rankings[agent])
        if (prob.edge_feasible(agent, j)) return j;
    throw std::runtime_error("find_top_feasible: agent " + std::to_string(agent) +
                             " has no feasible incident edge");
}

std::vector<Edge> lambda_a_tsf(const OrdinalGraphProblem& prob, QueryOracle& oracle, int lambda,
                               const ApproxSolverPlug& plug) {
    if (lambda < 0) throw std::invalid_argument("lambda_a_tsf: lambda must be >= 0");
    const GraphSkeleton& sk = prob.skeleton;
    const int r = prob.max_solution_size;
    const std::vector<double> alphas = tsf_alphas(r, lambda);

    // Per-agent simulated values over vertices; zero outside the Q sets.
    std::vector<std::map<int, double>> sim(sk.num_agents);
    for (int i = 0; i < sk.num_agents; ++i) {
        const auto& rank = sk.rankings[i];
        if (rank.empty()) continue;
        const int j_star = find_top_feasible(i, prob);
        int top_pos = 0;  // 1-based position of j_star in the agent's ranking
        while (rank[top_pos] != j_star) ++top_pos;
        ++top_pos;
        const double v_star = oracle.query(i, j_star);
        sim[i][j_star] = v_star;

        std::map<int, double> probed;  // position -> value, for reuse across levels
        auto value_at = [&](int pos) {
            auto it = probed.find(pos);
            if (it != probed.end()) return it->second;
            const double val = oracle.query(i, rank[pos - 1]);
            probed.emplace(pos, val);
            return val;
        };
        probed.emplace(top_pos, v_star);

        int prev_boundary = top_pos;
        for (int l = 1; l <= lambda; ++l) {
            const double threshold = alphas[l] * v_star;
            int lo = prev_boundary;
            int hi = static_cast<int>(rank.size());
            while (lo < hi) {
                const int mid = lo + (hi - lo + 1) / 2;
                if (value_at(mid) >= threshold)
                    lo = mid;
                else
                    hi = mid - 1;
            }
            for (int pos = prev_boundary + 1; pos <= lo; ++pos)
                sim[i][rank[pos - 1]] = alphas[l] * v_star;
            prev_boundary = lo;
        }
    }

    auto simulated = [&](int agent, int vertex) {
        const auto it = sim[agent].find(vertex);
        return it == sim[agent].end() ? 0.0 : it->second;
    };

    EdgeWeightedGraph g;
    g.num_vertices = sk.num_vertices;
    g.directed = sk.directed;
    for (auto [u, v] : sk.edges) {
        double w = 0.0;
        switch (sk.mode) {
            case WeightMode::agent_item:
                w = u < sk.num_agents ? simulated(u, v) : simulated(v, u);
                break;
            case WeightMode::undirected_sum:
                w = simulated(u, v) + simulated(v, u);
                break;
            case WeightMode::directed:
                w = simulated(u, v);
                break;
        }
        g.edges.push_back({u, v, w});
    }

    std::vector<Edge> solution = plug.solver(g);
    for (const Edge& e : solution)
        if (!prob.edge_feasible(e.u, e.v) && !prob.edge_feasible(e.v, e.u))
            throw std::runtime_error("lambda_a_tsf: plug returned an infeasible edge");
    if (prob.solution_feasible && !prob.solution_feasible(solution))
        throw std::runtime_error("lambda_a_tsf: plug returned an infeasible solution");
    return solution;
}

double lambda_a_tsf_distortion_bound(int r, int lambda, double rho) {
    return 3.0 * rho * std::pow(static_cast<double>(r), 1.0 / (lambda + 1));
}

int lambda_a_tsf_budget(int r, int lambda) { return 1 + lambda + lambda * ceil_log2(r); }

// ---------------------------------------------------------------------------
// adapters

OrdinalGraphProblem one_sided_matching_problem(const OrdinalProfile& ord) {
    const int n = ord.n;
    OrdinalGraphProblem prob;
    prob.skeleton.num_vertices = 2 * n;
    prob.skeleton.num_agents = n;
    prob.skeleton.directed = false;
    prob.skeleton.mode = WeightMode::agent_item;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) prob.skeleton.edges.emplace_back(i, n + j);
    prob.skeleton.rankings.resize(n);
    for (int i = 0; i < n; ++i)
        for (int j : ord.rankings[i]) prob.skeleton.rankings[i].push_back(n + j);
    prob.max_solution_size = n;
    // Any single agent-item edge extends to a perfect matching here.
    prob.edge_feasible = [n](int u, int v) {
        return (u < n && v >= n && v < 2 * n) || (v < n && u >= n && u < 2 * n);
    };
    prob.solution_feasible = [n](const std::vector<Edge>& sol) {
        std::vector<char> used(2 * n, 0);
        for (const Edge& e : sol) {
            if (used[e.u] || used[e.v]) return false;
            used[e.u] = used[e.v] = 1;
        }
        return true;
    };
    return prob;
}

ApproxSolverPlug hungarian_assignment_plug(int n) {
    ApproxSolverPlug plug;
    plug.rho = 1.0;
    plug.solver = [n](const EdgeWeightedGraph& g) {
        WeightMatrix w(n);
        for (const Edge& e : g.edges) {
            const int agent = e.u < n ? e.u : e.v;
            const int item = (e.u < n ? e.v : e.u) - n;
            w.at(agent, item) = e.w;
        }
        const Matching m = hungarian_max_weight(w);
        std::vector<Edge> out;
        for (int i = 0; i < n; ++i) out.push_back({i, n + m.assignment[i], w.at(i, m.assignment[i])});
        return out;
    };
    return plug;
}

namespace {

BipartiteGraph split_bipartite(const GraphSkeleton& sk, std::vector<int>& side) {
    // Two-colour the skeleton; throws if it is not bipartite.
    side.assign(sk.num_vertices, -1);
    std::vector<std::vector<int>> adj(sk.num_vertices);
    for (auto [u, v] : sk.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<int> stack;
    for (int s = 0; s < sk.num_vertices; ++s) {
        if (side[s] >= 0) continue;
        side[s] = 0;
        stack.push_back(s);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : adj[u]) {
                if (side[v] < 0) {
                    side[v] = 1 - side[u];
                    stack.push_back(v);
                } else if (side[v] == side[u]) {
                    throw std::invalid_argument("two_sided_perfect_matching: graph is not bipartite");
                }
            }
        }
    }
    std::vector<int> index(sk.num_vertices, -1);
    int nl = 0, nr = 0;
    for (int u = 0; u < sk.num_vertices; ++u) index[u] = side[u] == 0 ? nl++ : nr++;
    BipartiteGraph g(nl, nr);
    for (auto [u, v] : sk.edges) {
        const int l = side[u] == 0 ? u : v;
        const int r = side[u] == 0 ? v : u;
        g.add_edge(index[l], index[r]);
    }
    // stash the compressed indices in `side`: side[u] = 2*index + colour
    for (int u = 0; u < sk.num_vertices; ++u) side[u] = 2 * index[u] + side[u];
    return g;
}

}  // namespace

OrdinalGraphProblem two_sided_perfect_matching_problem(GraphSkeleton skeleton) {
    skeleton.validate();
    auto side = std::make_shared<std::vector<int>>();
    auto base = std::make_shared<BipartiteGraph>(split_bipartite(skeleton, *side));
    if (base->n_left != base->n_right)
        throw std::invalid_argument("two_sided_perfect_matching: sides differ in size");

    OrdinalGraphProblem prob;
    prob.max_solution_size = base->n_left;
    const int full = base->n_left;
    // Edge {u,v} is feasible iff the graph minus u and v still has a perfect
    // matching on the remaining vertices.
    auto feasible = [side, base, full](int u, int v) {
        const int cu = (*side)[u] % 2, cv = (*side)[v] % 2;
        if (cu == cv) return false;
        const int lu = cu == 0 ? (*side)[u] / 2 : (*side)[v] / 2;
        const int rv = cu == 0 ? (*side)[v] / 2 : (*side)[u] / 2;
        BipartiteGraph g(base->n_left, base->n_right);
        bool edge_present = false;
        for (int l = 0; l < base->n_left; ++l)
            for (int r : base->adj[l]) {
                if (l == lu && r == rv) edge_present = true;
                if (l != lu && r != rv) g.add_edge(l, r);
            }
        if (!edge_present) return false;
        return max_cardinality_bipartite_size(g) == full - 1;
    };
    prob.edge_feasible = feasible;
    prob.solution_feasible = [skeleton](const std::vector<Edge>& sol) {
        std::vector<char> used(skeleton.num_vertices, 0);
        for (const Edge& e : sol) {
            if (used[e.u] || used[e.v]) return false;
            used[e.u] = used[e.v] = 1;
        }
        return true;
    };
    prob.skeleton = std::move(skeleton);
    return prob;
}

OrdinalGraphProblem general_matching_problem(GraphSkeleton skeleton) {
    skeleton.validate();
    if (skeleton.directed) throw std::invalid_argument("general_matching: undirected graphs only");
    OrdinalGraphProblem prob;
    prob.max_solution_size = skeleton.num_vertices / 2;
    std::vector<std::vector<char>> present(skeleton.num_vertices,
                                           std::vector<char>(skeleton.num_vertices, 0));
    for (auto [u, v] : skeleton.edges) present[u][v] = present[v][u] = 1;
    prob.edge_feasible = [present = std::move(present)](int u, int v) { return present[u][v] != 0; };
    prob.solution_feasible = [nv = skeleton.num_vertices](const std::vector<Edge>& sol) {
        std::vector<char> used(nv, 0);
        for (const Edge& e : sol) {
            if (used[e.u] || used[e.v]) return false;
            used[e.u] = used[e.v] = 1;
        }
        return true;
    };
    prob.skeleton = std::move(skeleton);
    return prob;
}

ApproxSolverPlug greedy_matching_plug() {
    ApproxSolverPlug plug;
    plug.rho = 2.0;
    plug.solver = [](const EdgeWeightedGraph& g) { return greedy_general_matching(g); };
    return plug;
}

// ---------------------------------------------------------------------------
// file format

void write_graph_problem(std::ostream& os, const GraphSkeleton& sk) {
    os << "graph " << (sk.directed ? "directed" : "undirected") << ' ' << sk.num_vertices << '\n';
    os << "mode " << to_string(sk.mode) << '\n';
    os << "agents " << sk.num_agents << '\n';
    os << "edges " << sk.edges.size() << '\n';
    for (auto [u, v] : sk.edges) os << u << ' ' << v << '\n';
    for (int i = 0; i < sk.num_agents; ++i) {
        os << "ranking " << i;
        for (int j : sk.rankings[i]) os << ' ' << j;
        os << '\n';
    }
}

GraphSkeleton read_graph_problem(std::istream& is) {
    GraphSkeleton sk;
    std::string tag, dir, mode;
    std::size_t m = 0;
    if (!(is >> tag >> dir >> sk.num_vertices) || tag != "graph")
        throw std::invalid_argument("graph file: bad header");
    sk.directed = dir == "directed";
    if (!sk.directed && dir != "undirected") throw std::invalid_argument("graph file: bad direction");
    if (!(is >> tag >> mode) || tag != "mode") throw std::invalid_argument("graph file: bad mode line");
    sk.mode = weight_mode_from_string(mode);
    if (!(is >> tag >> sk.num_agents) || tag != "agents")
        throw std::invalid_argument("graph file: bad agents line");
    if (!(is >> tag >> m) || tag != "edges") throw std::invalid_argument("graph file: bad edges line");
    sk.edges.resize(m);
    for (auto& [u, v] : sk.edges)
        if (!(is >> u >> v)) throw std::invalid_argument("graph file: truncated edges");
    sk.rankings.resize(sk.num_agents);
    for (int t = 0; t < sk.num_agents; ++t) {
        int i = 0;
        if (!(is >> tag >> i) || tag != "ranking" || i < 0 || i >= sk.num_agents)
            throw std::invalid_argument("graph file: bad ranking line");
        std::string rest;
        std::getline(is, rest);
        std::istringstream line(rest);
        sk.rankings[i].clear();
        for (int j = 0; line >> j;) sk.rankings[i].push_back(j);
    }
    sk.validate();
    return sk;
}

}  // namespace qlm
