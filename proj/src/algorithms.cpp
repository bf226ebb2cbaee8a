#include "qlm/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qlm {

int ceil_log2(int n) {
    int l = 0;
    while ((1 << l) < n) ++l;
    return l;
}

int ceil_cbrt(int n) {
    int c = 1;
    while (static_cast<long long>(c) * c * c < n) ++c;
    return c;
}

std::vector<double> tsf_alphas(int base, int lambda) {
    std::vector<double> a(lambda + 1);
    for (int l = 0; l <= lambda; ++l)
        a[l] = std::pow(static_cast<double>(base), -static_cast<double>(l) / (lambda + 1));
    return a;
}

int ThresholdPartition::level_of_position(int pos) const {
    if (pos == 1) return 0;
    for (int l = 1; l <= lambda(); ++l)
        if (pos > boundaries[l - 1] && pos <= boundaries[l]) return l;
    return -1;
}

namespace {

// Probe cache for one agent's searches, with the monotonicity check the
// partition relies on: revealed values must be non-increasing in rank.
class RankProber {
public:
    RankProber(int agent, const OrdinalProfile& ord, QueryOracle& oracle)
        : agent_(agent), ord_(ord), oracle_(oracle) {}

    double value_at(int pos) {  // 1-based
        auto it = seen_.find(pos);
        if (it != seen_.end()) return it->second;
        const double val = oracle_.query(agent_, ord_.item_at(agent_, pos - 1));
        auto [ins, _] = seen_.emplace(pos, val);
        auto next = std::next(ins);
        if (next != seen_.end() && val + kWelfareTol < next->second)
            throw std::runtime_error("threshold_partition: oracle answers not monotone along ranking");
        if (ins != seen_.begin() && std::prev(ins)->second + kWelfareTol < val)
            throw std::runtime_error("threshold_partition: oracle answers not monotone along ranking");
        return val;
    }

private:
    int agent_;
    const OrdinalProfile& ord_;
    QueryOracle& oracle_;
    std::map<int, double> seen_;  // position -> revealed value
};

}  // namespace

ThresholdPartition threshold_partition(int agent, const OrdinalProfile& ord, QueryOracle& oracle,
                                       int lambda) {
    if (lambda < 0) throw std::invalid_argument("threshold_partition: lambda must be >= 0");
    const int n = ord.n;
    ThresholdPartition part;
    part.agent = agent;
    part.alphas = tsf_alphas(n, lambda);
    part.boundaries.assign(lambda + 1, 1);

    RankProber probe(agent, ord, oracle);
    part.v_star = probe.value_at(1);

    // Level-l boundary: last position with value >= alpha_l * v_star. The
    // previous boundary is a known success, so the search starts there and
    // only probes to its right.
    for (int l = 1; l <= lambda; ++l) {
        const double threshold = part.alphas[l] * part.v_star;
        int lo = part.boundaries[l - 1];
        int hi = n;
        while (lo < hi) {
            const int mid = lo + (hi - lo + 1) / 2;
            if (probe.value_at(mid) >= threshold)
                lo = mid;
            else
                hi = mid - 1;
        }
        part.boundaries[l] = lo;
    }
    return part;
}

void fill_simulated_row(const ThresholdPartition& part, const OrdinalProfile& ord,
                        SimulatedProfile& sim) {
    const int i = part.agent;
    sim.v(i, ord.item_at(i, 0)) = part.v_star;
    for (int l = 1; l <= part.lambda(); ++l) {
        const double val = part.alphas[l] * part.v_star;
        for (int pos = part.boundaries[l - 1] + 1; pos <= part.boundaries[l]; ++pos)
            sim.v(i, ord.item_at(i, pos - 1)) = val;
    }
}

Matching lambda_tsf(const OrdinalProfile& ord, QueryOracle& oracle, int lambda,
                    SimulatedProfile* sim_out) {
    SimulatedProfile sim(ord.n);
    for (int i = 0; i < ord.n; ++i) {
        const ThresholdPartition part = threshold_partition(i, ord, oracle, lambda);
        fill_simulated_row(part, ord, sim);
    }
    Matching m = hungarian_max_weight(WeightMatrix::from(sim));
    if (sim_out) *sim_out = std::move(sim);
    return m;
}

int lambda_tsf_budget(int n, int lambda) { return 1 + lambda + lambda * ceil_log2(n); }

double lambda_tsf_distortion_bound(int n, int lambda) {
    return 2.0 * std::pow(static_cast<double>(n), 1.0 / (lambda + 1));
}

KwsPartition KwsPartition::make(int n, int k, double epsilon) {
    if (k < 1 || n < 2) throw std::invalid_argument("KwsPartition: need k >= 1, n >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("KwsPartition: epsilon must lie in (0,1)");
    KwsPartition part;
    part.n = n;
    part.k = k;
    part.epsilon = epsilon;
    std::vector<int> sizes{1};
    int total = 1;
    for (int l = 2; l <= k; ++l) {
        const int s = std::max(
            1, static_cast<int>(std::llround(epsilon * std::pow(n, (l - 1) / static_cast<double>(k)))));
        sizes.push_back(s);
        total += s;
    }
    if (total >= n) throw std::invalid_argument("KwsPartition: n too small for block sizes");
    sizes.push_back(n - total);  // A_{k+1}
    part.blocks.resize(sizes.size());
    int item = 0;
    for (std::size_t b = 0; b < sizes.size(); ++b)
        for (int t = 0; t < sizes[b]; ++t) part.blocks[b].push_back(item++);
    return part;
}

int KwsPartition::block_end_position(int b) const {
    int pos = 0;
    for (int t = 0; t <= b; ++t) pos += block_size(t);
    return pos;
}

bool is_block_consistent(const OrdinalProfile& ord, const KwsPartition& part) {
    if (ord.n != part.n) return false;
    std::vector<int> block_of(part.n);
    for (std::size_t b = 0; b < part.blocks.size(); ++b)
        for (int j : part.blocks[b]) block_of[j] = static_cast<int>(b);
    for (int i = 0; i < ord.n; ++i) {
        int pos = 0;
        for (std::size_t b = 0; b < part.blocks.size(); ++b)
            for (int t = 0; t < part.block_size(static_cast<int>(b)); ++t, ++pos)
                if (block_of[ord.item_at(i, pos)] != static_cast<int>(b)) return false;
    }
    return true;
}

Matching k_fmm(const OrdinalProfile& ord, QueryOracle& oracle, const KwsPartition& part,
               SimulatedProfile* sim_out) {
    if (!is_block_consistent(ord, part))
        throw std::invalid_argument("k_fmm: ordinal profile is not k-well-structured for this partition");
    const int k = part.k;
    SimulatedProfile sim(ord.n);
    for (int i = 0; i < ord.n; ++i) {
        for (int b = 0; b < k; ++b) {
            const int pos = part.block_end_position(b);  // least-preferred item of A_{b+1}
            const double u = oracle.query(i, ord.item_at(i, pos - 1));
            for (int j : part.blocks[b]) sim.v(i, j) = u;
        }
    }
    Matching m = hungarian_max_weight(WeightMatrix::from(sim));
    if (sim_out) *sim_out = std::move(sim);
    return m;
}

double k_fmm_distortion_bound(int n, int k) {
    return 2.0 * k * std::pow(static_cast<double>(n), 1.0 / k) + k + 1;
}

Matching ordinal_baseline(const OrdinalProfile& ord) {
    const int n = ord.n;
    Matching m;
    m.assignment.assign(n, -1);
    std::vector<char> taken(n, 0);
    for (int i = 0; i < n; ++i) {
        for (int pos = 0; pos < n; ++pos) {
            const int j = ord.item_at(i, pos);
            if (!taken[j]) {
                m.assignment[i] = j;
                taken[j] = 1;
                break;
            }
        }
    }
    return m;
}

Matching fpa(const OrdinalProfile& ord, QueryOracle& oracle, FpaTrace* trace) {
    const int n = ord.n;
    if (n == 1) {
        oracle.query(0, ord.item_at(0, 0));
        return Matching{{ord.item_at(0, 0)}};
    }
    const double n_third = std::pow(static_cast<double>(n), -1.0 / 3.0);
    const int c13 = ceil_cbrt(n);

    std::vector<double> v_star(n);
    double max_top = 0.0;
    for (int i = 0; i < n; ++i) {
        v_star[i] = oracle.query(i, ord.item_at(i, 0));
        max_top = std::max(max_top, v_star[i]);
    }

    if (max_top >= n_third) {
        // Case 1: repeatedly extract large partial matchings of active agents
        // on top-l edges, querying and deactivating the matched agents.
        const int threshold = std::max(
            1, static_cast<int>(std::ceil(c13 / std::sqrt(std::log2(static_cast<double>(n))))));
        if (trace) {
            trace->case1 = true;
            trace->size_threshold = threshold;
        }
        std::vector<char> active(n, 1);
        int active_count = n;
        for (int l = 1; l <= n && active_count >= threshold; ++l) {
            while (active_count >= threshold) {
                BipartiteGraph g(n, n);
                for (int i = 0; i < n; ++i)
                    if (active[i])
                        for (int pos = 0; pos < l; ++pos) g.add_edge(i, ord.item_at(i, pos));
                const std::vector<int> match = max_cardinality_bipartite(g);
                int size = 0;
                for (int i = 0; i < n; ++i)
                    if (active[i] && match[i] >= 0) ++size;
                if (size < threshold) break;
                std::vector<std::pair<int, int>> round;
                for (int i = 0; i < n; ++i) {
                    if (!active[i] || match[i] < 0) continue;
                    oracle.query(i, match[i]);
                    active[i] = 0;
                    --active_count;
                    round.emplace_back(i, match[i]);
                }
                if (trace) trace->extractions.push_back(std::move(round));
            }
        }
        // Welfare maximization over the revealed values, zero elsewhere.
        WeightMatrix revealed(n);
        for (const QueryRecord& q : oracle.transcript()) revealed.at(q.agent, q.item) = q.answer;
        return hungarian_max_weight(revealed);
    }

    // Case 2: one more query per agent at a fixed position, then simulated
    // values with the boost for agents whose revealed tail value is tiny.
    const int p_star = std::min(n, c13 + 1);  // 1-based
    const int boost_end = std::max(
        1, static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n)) / 4.0)));
    if (trace) {
        trace->case1 = false;
        trace->second_query_position = p_star;
    }
    SimulatedProfile sim(n);
    for (int i = 0; i < n; ++i) {
        const double u = oracle.query(i, ord.item_at(i, p_star - 1));
        sim.v(i, ord.item_at(i, 0)) = v_star[i];
        for (int pos = 2; pos <= p_star; ++pos) sim.v(i, ord.item_at(i, pos - 1)) = u;
        if (u < 0.5 / n)
            for (int pos = 2; pos <= boost_end; ++pos)
                sim.v(i, ord.item_at(i, pos - 1)) = n_third / 3.0;
    }
    return hungarian_max_weight(WeightMatrix::from(sim));
}

double fpa_distortion_bound(int n) {
    return 17.0 * std::pow(static_cast<double>(n), 2.0 / 3.0) * std::sqrt(std::log2(static_cast<double>(n)));
}

}  // namespace qlm
