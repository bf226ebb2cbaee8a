#ifndef QLM_ALGORITHMS_HPP
#define QLM_ALGORITHMS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "qlm/core.hpp"
#include "qlm/solvers.hpp"

namespace qlm {

int ceil_log2(int n);

// alpha_l = base^{-l/(lambda+1)} for l = 0..lambda.
std::vector<double> tsf_alphas(int base, int lambda);

// Per-agent threshold partition. Rank positions are 1-based; the level-l set
// Q_{i,l} (l >= 1) is the position interval (boundaries[l-1], boundaries[l]],
// and Q_{i,0} = {1} is the top item alone.
struct ThresholdPartition {
    int agent = 0;
    double v_star = 0.0;
    std::vector<double> alphas;
    std::vector<int> boundaries;  // boundaries[0] = 1, non-decreasing

    int lambda() const { return static_cast<int>(boundaries.size()) - 1; }
    // Level of a 1-based rank position, or -1 when outside every Q set.
    int level_of_position(int pos) const;
};

// Binary search along the agent's ranking for the last position with value
// >= alpha_l * v_star, one search per level. At most 1 + ceil(log2 n)
// queries per level; 1 + lambda + lambda*ceil(log2 n) per agent in total.
// Throws std::runtime_error if the oracle's answers are not non-increasing
// along the ranking.
ThresholdPartition threshold_partition(int agent, const OrdinalProfile& ord, QueryOracle& oracle,
                                       int lambda);

// Simulated values for one agent: v* at the top, alpha_l * v* on level l,
// zero outside every level.
void fill_simulated_row(const ThresholdPartition& part, const OrdinalProfile& ord,
                        SimulatedProfile& sim);

// lambda-TSF: threshold partitions for every agent, then a maximum-weight
// matching on the simulated values.
Matching lambda_tsf(const OrdinalProfile& ord, QueryOracle& oracle, int lambda,
                    SimulatedProfile* sim_out = nullptr);

int lambda_tsf_budget(int n, int lambda);
double lambda_tsf_distortion_bound(int n, int lambda);  // 2 n^{1/(lambda+1)}

// Block structure of a k-well-structured instance: A_1, ..., A_{k+1} with
// |A_1| = 1, |A_l| = round(eps * n^{(l-1)/k}) for 2 <= l <= k, and A_{k+1}
// holding the remainder. blocks[b] lists item indices; every agent ranks all
// of blocks[b] before any of blocks[b+1].
struct KwsPartition {
    int n = 0;
    int k = 0;
    double epsilon = 0.5;
    std::vector<std::vector<int>> blocks;

    static KwsPartition make(int n, int k, double epsilon);  // identity item order
    int block_size(int b) const { return static_cast<int>(blocks[b].size()); }
    // 1-based rank position of the last item of block b (same for all agents).
    int block_end_position(int b) const;
};

bool is_block_consistent(const OrdinalProfile& ord, const KwsPartition& part);

// k-FMM: query each agent's least-preferred item in A_1..A_k (k queries),
// extend the answers block-wise, match on the simulated values.
Matching k_fmm(const OrdinalProfile& ord, QueryOracle& oracle, const KwsPartition& part,
               SimulatedProfile* sim_out = nullptr);

double k_fmm_distortion_bound(int n, int k);  // 2k n^{1/k} + k + 1

// Serial dictatorship in agent-index order; zero queries.
Matching ordinal_baseline(const OrdinalProfile& ord);

struct FpaTrace {
    bool case1 = false;
    int size_threshold = 0;        // case 1: minimum committed matching size
    int second_query_position = 0; // case 2: 1-based rank position queried
    std::vector<std::vector<std::pair<int, int>>> extractions;  // (agent, item) per round
};

// FirstPositionAdaptive for unit-sum valuations; at most two queries per
// agent on either branch.
Matching fpa(const OrdinalProfile& ord, QueryOracle& oracle, FpaTrace* trace = nullptr);

double fpa_distortion_bound(int n);  // 17 n^{2/3} sqrt(log2 n)

// Integer ceil(n^{1/3}).
int ceil_cbrt(int n);

}  // namespace qlm

#endif
