#ifndef QLM_GRAPHMAX_HPP
#define QLM_GRAPHMAX_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qlm/core.hpp"
#include "qlm/solvers.hpp"

namespace qlm {

enum class WeightMode { agent_item, undirected_sum, directed };

std::string to_string(WeightMode m);
WeightMode weight_mode_from_string(const std::string& s);

// Weightless problem skeleton: graph, agent set, per-agent neighbour
// rankings, weight mode. This is what the graph file format carries.
struct GraphSkeleton {
    int num_vertices = 0;
    int num_agents = 0;  // agents are vertices 0..num_agents-1
    bool directed = false;
    WeightMode mode = WeightMode::undirected_sum;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> rankings;  // per agent, neighbours best first

    void validate() const;
};

// Skeleton plus the feasibility structure of one concrete problem.
struct OrdinalGraphProblem {
    GraphSkeleton skeleton;
    int max_solution_size = 0;  // r = max_{T in F} |T|
    std::function<bool(int, int)> edge_feasible;  // edge extends to some feasible solution?
    std::function<bool(const std::vector<Edge>&)> solution_feasible;
};

struct ApproxSolverPlug {
    std::function<std::vector<Edge>(const EdgeWeightedGraph&)> solver;
    double rho = 1.0;
};

// Generic value oracle over (agent, vertex) pairs.
class FunctionOracle : public QueryOracle {
public:
    FunctionOracle(int num_vertices, std::function<double(int, int)> f)
        : QueryOracle(num_vertices), f_(std::move(f)) {}

protected:
    double answer(int agent, int vertex) override { return f_(agent, vertex); }

private:
    std::function<double(int, int)> f_;
};

// Highest-ranked neighbour of the agent whose edge passes the feasibility
// oracle. Throws std::runtime_error when no incident edge is feasible.
int find_top_feasible(int agent, const OrdinalGraphProblem& prob);

// The generalized threshold algorithm: per-agent threshold partitions with
// alpha_l = r^{-l/(lambda+1)}, simulated edge weights from the weight mode,
// and the plugged rho-approximation on the simulated graph. The returned
// edge set carries the simulated weights.
std::vector<Edge> lambda_a_tsf(const OrdinalGraphProblem& prob, QueryOracle& oracle, int lambda,
                               const ApproxSolverPlug& plug);

double lambda_a_tsf_distortion_bound(int r, int lambda, double rho);  // 3 rho r^{1/(lambda+1)}
int lambda_a_tsf_budget(int r, int lambda);  // 1 + lambda + lambda ceil(log2 r)

// ---- adapters ----

// One-sided matching as a graph problem: agents 0..n-1, items n..2n-1,
// complete bipartite, every edge feasible, r = n.
OrdinalGraphProblem one_sided_matching_problem(const OrdinalProfile& ord);
ApproxSolverPlug hungarian_assignment_plug(int n);  // exact, rho = 1

// Perfect matching on an explicit bipartite agent graph; feasibility of an
// edge = the graph minus both endpoints still has a perfect matching.
OrdinalGraphProblem two_sided_perfect_matching_problem(GraphSkeleton skeleton);

// Matching on a general undirected agent graph; every edge is feasible.
OrdinalGraphProblem general_matching_problem(GraphSkeleton skeleton);
ApproxSolverPlug greedy_matching_plug();  // rho = 2

// ---- graph problem file format ----
// graph <directed|undirected> <U>
// mode <agent-item|undirected-sum|directed>
// agents <N>
// edges <M>    followed by M lines "u v"
// ranking <i> <neighbours best first>   (N lines)
void write_graph_problem(std::ostream& os, const GraphSkeleton& skeleton);
GraphSkeleton read_graph_problem(std::istream& is);

}  // namespace qlm

#endif
