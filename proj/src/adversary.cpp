#include "qlm/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "qlm/rng.hpp"
#include "qlm/solvers.hpp"

namespace qlm {

OrdinalProfile identity_ordinal(int n) {
    OrdinalProfile ord(n);
    for (int i = 0; i < n; ++i) {
        ord.rankings[i].resize(n);
        std::iota(ord.rankings[i].begin(), ord.rankings[i].end(), 0);
    }
    return ord;
}

Matching random_query_strawman(const OrdinalProfile& ord, QueryOracle& oracle, int k,
                               std::uint64_t seed) {
    const int n = ord.n;
    if (k < 1 || k > n) throw std::invalid_argument("strawman: need 1 <= k <= n");
    for (int i = 0; i < n; ++i) {
        auto rng = make_rng(seed, static_cast<std::uint64_t>(i));
        std::vector<int> items(n);
        std::iota(items.begin(), items.end(), 0);
        for (int t = 0; t < k; ++t) {
            std::swap(items[t], items[uniform_int(rng, t, n - 1)]);
            oracle.query(i, items[t]);
        }
    }
    WeightMatrix revealed(n);
    for (const QueryRecord& q : oracle.transcript()) revealed.at(q.agent, q.item) = q.answer;
    return hungarian_max_weight(revealed);
}

// ---------------------------------------------------------------------------
// Ordinal adversary: paired rankings sharing a common favourite

PairedRankingInstance PairedRankingInstance::make(int n) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("paired-ranking instance: need even n >= 4");
    // Item layout: 0 = a, 1..n/2 = b_1..b_{n/2}, n/2+1..n-1 = c_1..c_{n/2-1}.
    PairedRankingInstance inst;
    inst.n = n;
    inst.ordinal = OrdinalProfile(n);
    inst.second_favorite.resize(n);
    const int half = n / 2;
    for (int i = 0; i < n; ++i) {
        const int base = i % half;
        const int s = base + 1;
        inst.second_favorite[i] = s;
        auto& rank = inst.ordinal.rankings[i];
        rank.push_back(0);
        rank.push_back(s);
        for (int b = 1; b <= half; ++b)
            if (b != s) rank.push_back(b);
        for (int c = half + 1; c < n; ++c) rank.push_back(c);
    }
    inst.ordinal.validate();
    return inst;
}

OrdinalAdversaryResult ordinal_adversary_certify(const QueryAlgorithm& alg, int n) {
    const PairedRankingInstance inst = PairedRankingInstance::make(n);
    NoQueryOracle no_queries(n);
    OrdinalAdversaryResult res;
    res.output = alg(inst.ordinal, no_queries);
    res.output.validate();

    // Conditional unit-sum values, decided by where the algorithm put each agent.
    ValuationProfile p(n, ValuationClass::unit_sum);
    for (int i = 0; i < n; ++i) {
        const int yi = res.output.assignment[i];
        const int si = inst.second_favorite[i];
        if (yi == 0) {
            for (int j = 0; j < n; ++j) p.v(i, j) = 1.0 / n;
        } else if (yi == si) {
            p.v(i, 0) = 1.0;
        } else {
            p.v(i, 0) = 0.5;
            p.v(i, si) = 0.5;
        }
    }
    p.validate();
    if (!consistent_with(p, inst.ordinal))
        throw std::logic_error("ordinal adversary: constructed profile inconsistent with announced ordinal");

    res.alg_welfare = social_welfare(res.output, p);

    // Alternative matching: per b-item, give it to the better of the two agents
    // sharing it as second favorite; item a goes to the best remaining agent.
    const int half = n / 2;
    Matching alt;
    alt.assignment.assign(n, -1);
    std::vector<char> agent_used(n, 0), item_used(n, 0);
    for (int base = 0; base < half; ++base) {
        const int item = base + 1;
        const int a1 = base, a2 = base + half;
        const int pick = p.v(a1, item) >= p.v(a2, item) ? a1 : a2;
        alt.assignment[pick] = item;
        agent_used[pick] = 1;
        item_used[item] = 1;
    }
    int best_agent = -1;
    for (int i = 0; i < n; ++i)
        if (!agent_used[i] && (best_agent < 0 || p.v(i, 0) > p.v(best_agent, 0))) best_agent = i;
    alt.assignment[best_agent] = 0;
    agent_used[best_agent] = 1;
    item_used[0] = 1;
    for (int i = 0, j = 0; i < n; ++i) {
        if (agent_used[i]) continue;
        while (item_used[j]) ++j;
        alt.assignment[i] = j;
        item_used[j] = 1;
    }
    alt.validate();

    res.opt_welfare = social_welfare(alt, p);
    if (n <= 8) {
        const Matching bf = brute_force_opt(WeightMatrix::from(p));
        res.opt_welfare = std::max(res.opt_welfare, social_welfare(bf, p));
    }
    res.ratio = distortion_ratio(res.opt_welfare, res.alg_welfare);
    res.profile = std::move(p);
    return res;
}

// ---------------------------------------------------------------------------
// Block-value adversary against (k-1)-TSF

namespace {

class BlockValueOracle : public QueryOracle {
public:
    BlockValueOracle(const KwsPartition& part, int n, int k)
        : QueryOracle(n), block_of_(n), value_(part.blocks.size()) {
        for (std::size_t b = 0; b < part.blocks.size(); ++b)
            for (int j : part.blocks[b]) block_of_[j] = static_cast<int>(b);
        for (std::size_t b = 0; b < part.blocks.size(); ++b)
            value_[b] = b + 1 <= static_cast<std::size_t>(k)
                            ? std::pow(static_cast<double>(n), -static_cast<double>(b) / k)
                            : 0.0;
    }
    double block_value(int b) const { return value_[b]; }
    int block_of(int item) const { return block_of_[item]; }

protected:
    double answer(int /*agent*/, int item) override { return value_[block_of_[item]]; }

private:
    std::vector<int> block_of_;
    std::vector<double> value_;
};

}  // namespace

TsfAdversaryResult tsf_adversary_certify(int n, int k, double eps) {
    if (k < 1) throw std::invalid_argument("tsf adversary: k >= 1");
    for (int l = 2; l <= k; ++l) {
        const double exact = eps * std::pow(static_cast<double>(n), (l - 1) / static_cast<double>(k));
        if (std::fabs(exact - std::llround(exact)) > 1e-6)
            throw std::invalid_argument("tsf adversary: eps*n^{(l-1)/k} must be integral");
    }
    const KwsPartition part = KwsPartition::make(n, k, eps);
    const OrdinalProfile ord = identity_ordinal(n);
    BlockValueOracle oracle(part, n, k);

    TsfAdversaryResult res;
    res.n = n;
    res.k = k;
    res.eps = eps;
    res.xi = part.block_size(k) / static_cast<double>(n);
    res.output = lambda_tsf(ord, oracle, k - 1);
    res.output.validate();

    // The deterministic algorithm sees identical rankings and answers, so all
    // agents issue the same item queries.
    std::vector<std::vector<int>> queried_by(n);
    for (const QueryRecord& q : oracle.transcript()) queried_by[q.agent].push_back(q.item);
    for (auto& v : queried_by) std::sort(v.begin(), v.end());
    for (int i = 1; i < n; ++i)
        if (queried_by[i] != queried_by[0])
            throw std::logic_error("tsf adversary: transcripts diverged across agents");
    std::vector<char> queried(n, 0);
    for (int j : queried_by[0]) queried[j] = 1;

    // Base profile: every agent values block items at the revealed defaults.
    ValuationProfile p(n, ValuationClass::unrestricted);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p.v(i, j) = oracle.block_value(oracle.block_of(j));

    // High values go on the actually-unqueried prefix of each block: within a
    // block, anything after the first revealed item is capped at the default
    // by the announced ordinal, so prefixes are all the construction can use.
    struct Boost {
        int item;
        int block;
        double value;
    };
    std::vector<Boost> boosts;
    for (int b = 1; b <= k; ++b) {
        const int start = part.blocks[b].front();
        const double val = oracle.block_value(b - 1);
        for (int j = start; j <= part.blocks[b].back() && !queried[j]; ++j)
            boosts.push_back({j, b, val});
    }

    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::sort(pool.begin(), pool.end(),
              [&](int a, int b) { return res.output.assignment[a] > res.output.assignment[b]; });

    // The boosted agent must keep her algorithm item's value unchanged, so
    // her item may not fall inside the boosted prefix [block front, p].
    // Deepest boost items claim the deepest-matched agents first.
    Matching witness;
    witness.assignment.assign(n, -1);
    std::vector<char> agent_used(n, 0), item_used(n, 0);
    for (auto it = boosts.rbegin(); it != boosts.rend(); ++it) {
        const Boost& bo = *it;
        const int front = part.blocks[bo.block].front();
        int agent = -1;
        for (int cand : pool) {
            if (agent_used[cand]) continue;
            const int y = res.output.assignment[cand];
            if (y < front || y > bo.item) {
                agent = cand;
                break;
            }
        }
        if (agent < 0) continue;  // no safe agent left for this slot
        for (int j = front; j <= bo.item; ++j) p.v(agent, j) = bo.value;
        witness.assignment[agent] = bo.item;
        agent_used[agent] = 1;
        item_used[bo.item] = 1;
    }
    for (int i = 0, j = 0; i < n; ++i) {  // item 0 lands on its algorithm holder here
        if (agent_used[i]) continue;
        while (item_used[j]) ++j;
        witness.assignment[i] = j;
        item_used[j] = 1;
    }
    witness.validate();

    // Consistency certificate.
    for (const QueryRecord& q : oracle.transcript())
        if (p.v(q.agent, q.item) != q.answer)
            throw std::logic_error("tsf adversary: finalized profile contradicts a transcript answer");
    const OrdinalProfile derived = derive_ordinal(p);
    for (int i = 0; i < n; ++i)
        if (derived.rankings[i] != ord.rankings[i])
            throw std::logic_error("tsf adversary: finalized profile does not induce the announced ordinal");

    res.alg_welfare = social_welfare(res.output, p);
    res.witness_welfare = social_welfare(witness, p);
    res.ratio = distortion_ratio(std::max(res.witness_welfare, res.alg_welfare), res.alg_welfare);
    res.closed_form_alg = 1.0 + eps * (k - 1);
    res.closed_form_witness =
        0.5 * std::min(eps, res.xi) * k * std::pow(static_cast<double>(n), 1.0 / k);
    res.profile = std::move(p);
    res.witness = std::move(witness);
    return res;
}

// ---------------------------------------------------------------------------
// The adaptive query adversary

LowerBoundFamily LowerBoundFamily::make(int n, int k, ValuationClass klass, double eps, double xi) {
    if (n < 4 || k < 1) throw std::invalid_argument("LowerBoundFamily: need n >= 4, k >= 1");
    if (!(eps > 0.0 && eps < 1.0) || !(xi > 0.0 && xi <= 1.0))
        throw std::invalid_argument("LowerBoundFamily: eps in (0,1), xi in (0,1]");
    LowerBoundFamily fam;
    fam.n = n;
    fam.k = k;
    fam.klass = klass;
    fam.eps = eps;
    fam.xi = xi;
    fam.delta = klass == ValuationClass::unrestricted ? 1.0 / k : 1.0 / (k + 1);
    if (klass == ValuationClass::unit_sum &&
        k > (1.0 - xi) * std::pow(static_cast<double>(n), 1.0 / (k + 1)) + kWelfareTol)
        throw std::invalid_argument("LowerBoundFamily: unit-sum mode needs k <= (1-xi) n^{1/(k+1)}");
    fam.a_sizes.push_back(1);
    for (int l = 2; l <= k + 1; ++l)
        fam.a_sizes.push_back(std::max(
            1, static_cast<int>(std::llround(eps * std::pow(static_cast<double>(n), (l - 1) * fam.delta)))));
    if (fam.sum_a() >= n) throw std::invalid_argument("LowerBoundFamily: n too small for the A sets");
    fam.set_of_item.assign(n, k + 1);  // B by default
    fam.set_start.resize(k + 1);
    int item = 0;
    for (int s = 0; s <= k; ++s) {
        fam.set_start[s] = item;
        for (int t = 0; t < fam.a_sizes[s]; ++t) fam.set_of_item[item++] = s;
    }
    return fam;
}

int LowerBoundFamily::b_size() const { return n - sum_a(); }

double LowerBoundFamily::per_item_value(int set) const {
    return std::pow(static_cast<double>(n), -delta) / a_sizes[set];
}

double LowerBoundFamily::revealed_value(int item) const {
    const int s = set_of_item[item];
    return s <= k ? per_item_value(s) : 0.0;
}

namespace {

// Raise unpinned entries of a non-increasing row, left to right, until the
// deficit is gone. Each entry may rise to its left neighbour's final value;
// a full raise assigns that value bit-exactly so downstream tie-breaking by
// item index still reproduces the announced ranking.
double waterfill(std::vector<double>& row, const std::vector<char>& pinned, double deficit) {
    const double INF = std::numeric_limits<double>::infinity();
    double run_cap = INF;
    for (std::size_t j = 0; j < row.size() && deficit > 1e-15; ++j) {
        if (!pinned[j]) {
            const double headroom = run_cap - row[j];
            if (headroom > 0 && deficit >= headroom && run_cap < INF) {
                row[j] = run_cap;
                deficit -= headroom;
            } else if (headroom > 0) {
                row[j] += deficit;
                deficit = 0.0;
            }
        }
        run_cap = row[j];
    }
    return deficit;
}

// Spread `deficit` over the contiguous unpinned span starting at position q
// as a level fill: the resulting value at q is the smallest any consistent
// completion allows. Values never exceed `cap` (the final value at q - 1).
double suffix_level_fill(std::vector<double>& row, const std::vector<char>& pinned, int q,
                         double cap, double deficit) {
    const int n = static_cast<int>(row.size());
    int z = q;
    while (z < n && !pinned[z]) ++z;
    if (z == q || deficit <= 1e-15) return deficit;
    int j = z - 1;
    double suffix_sum = row[j];
    double level = deficit + suffix_sum;
    while (j > q && row[j - 1] < level) {
        --j;
        suffix_sum += row[j];
        level = (deficit + suffix_sum) / (z - j);
    }
    level = std::min(level, cap);
    for (int p = j; p < z; ++p) {
        if (row[p] < level) {
            deficit -= level - row[p];
            row[p] = level;
        }
    }
    return std::max(deficit, 0.0);
}

}  // namespace

int max_lambda_for_budget(int n, int k) {
    int l = 0;
    while (lambda_tsf_budget(n, l + 1) <= k) ++l;
    return l;
}

FinalizeResult finalize_profile(const LowerBoundFamily& fam, const AdaptiveAdversaryOracle& oracle,
                                const Matching& output) {
    const int n = fam.n, k = fam.k;
    if (!fam.counting_precondition())
        throw std::invalid_argument("finalize_profile: counting argument needs n > 2 sum|A_l|");
    if (oracle.max_count() > k)
        throw std::runtime_error("finalize_profile: an agent exceeded the k-query budget");
    output.validate();

    const double n_delta = std::pow(static_cast<double>(n), -fam.delta);
    std::vector<std::vector<char>> queried_set(n, std::vector<char>(k + 2, 0));
    std::vector<std::vector<int>> queried_items(n);
    for (const QueryRecord& q : oracle.transcript()) {
        queried_set[q.agent][fam.set_of_item[q.item]] = 1;
        queried_items[q.agent].push_back(q.item);
    }
    std::vector<int> y_set(n);
    for (int i = 0; i < n; ++i) y_set[i] = fam.set_of_item[output.assignment[i]];

    // Inductive search for the T1 block: a set A_r together with enough agents
    // that were neither queried in it nor assigned one of its items.
    int rs = -1;
    std::vector<int> selected;
    for (int i = 0; i < n; ++i)
        if (!queried_set[i][0] && y_set[i] != 0) {
            rs = 0;
            selected = {i};
            break;
        }
    if (rs < 0) {
        for (int s = 1; s <= k && rs < 0; ++s) {
            std::vector<int> cand;
            for (int i = 0; i < n; ++i)
                if (!queried_set[i][s] && y_set[i] != s) cand.push_back(i);
            if (static_cast<int>(cand.size()) >= fam.a_sizes[s]) {
                rs = s;
                selected.assign(cand.begin(), cand.begin() + fam.a_sizes[s]);
            }
        }
    }
    if (rs < 0)
        throw std::runtime_error("finalize_profile: no qualifying set r (counting argument violated)");

    std::vector<char> is_selected(n, 0);
    for (int i : selected) is_selected[i] = 1;

    const bool unit_sum = fam.klass == ValuationClass::unit_sum;
    std::vector<double> defaults(n);
    for (int j = 0; j < n; ++j) defaults[j] = fam.revealed_value(j);
    double defaults_a_sum = 0.0;  // sum of defaults over all A items
    for (int s = 0; s <= k; ++s) defaults_a_sum += fam.a_sizes[s] * fam.per_item_value(s);

    ValuationProfile p(n, fam.klass);
    FinalizeResult res;
    res.chosen_r = rs + 1;
    res.t1_agents = selected;

    auto t1_row = [&](int i, int r, std::vector<double>& row) {
        row = defaults;
        const double cap = r == 0 ? std::numeric_limits<double>::infinity() : fam.per_item_value(r - 1);
        if (!unit_sum) {
            const double boost = r == 0 ? 1.0 : cap;
            for (int t = 0; t < fam.a_sizes[r]; ++t) row[fam.set_start[r] + t] = boost;
            return;
        }
        // Unit-sum: put the whole non-default mass on A_r when it fits under
        // the value of the block above, and waterfill the leftovers otherwise.
        const double other = defaults_a_sum - fam.a_sizes[r] * fam.per_item_value(r);
        const double x = std::min((1.0 - other) / fam.a_sizes[r], cap);
        for (int t = 0; t < fam.a_sizes[r]; ++t) row[fam.set_start[r] + t] = x;

        std::vector<char> pinned(n, 0);
        for (int j : queried_items[i]) pinned[j] = 1;
        for (int t = 0; t < fam.a_sizes[r]; ++t) pinned[fam.set_start[r] + t] = 1;
        pinned[output.assignment[i]] = 1;

        double sum = 0.0;
        for (double v : row) sum += v;
        double deficit = waterfill(row, pinned, 1.0 - sum);
        if (deficit > 1e-12) {
            // No consistent completion keeps her assigned item at its revealed
            // value (possible at k = 1, where no later A block can absorb the
            // mass). Release that pin and spread the leftover as thinly as the
            // ranking permits, starting at her item.
            const int q = output.assignment[i];
            pinned[q] = 0;
            const double before = row[q];
            const double cap_q = q == 0 ? std::numeric_limits<double>::infinity() : row[q - 1];
            deficit = suffix_level_fill(row, pinned, q, cap_q, deficit);
            if (row[q] != before) res.exact_alg_welfare = false;
        }
        if (deficit > 1e-12)
            throw std::runtime_error("finalize_profile: cannot complete a consistent unit-sum row");
    };

    auto t2_row = [&](std::vector<double>& row) {
        row = defaults;
        if (!unit_sum) return;
        const double b_val = (1.0 - defaults_a_sum) / fam.b_size();
        if (b_val < -kWelfareTol || b_val > fam.per_item_value(k) + kWelfareTol)
            throw std::runtime_error("finalize_profile: type-(T2) B value out of range");
        for (int j = fam.set_start[k] + fam.a_sizes[k]; j < n; ++j) row[j] = std::max(0.0, b_val);
    };

    std::vector<double> row;
    for (int i = 0; i < n; ++i) {
        if (is_selected[i]) {
            t1_row(i, rs, row);
        } else if (!unit_sum) {
            row = defaults;
        } else {
            int set_count = 0;
            for (int s = 0; s <= k; ++s) set_count += queried_set[i][s];
            if (set_count == k && y_set[i] <= k) {
                t2_row(row);
            } else {
                // Smallest qualifying r that closes the row without spillover:
                // A_1 first, then any block past A_2, then A_2 itself.
                int r = -1;
                if (!queried_set[i][0] && y_set[i] != 0) r = 0;
                for (int s = 2; s <= k && r < 0; ++s)
                    if (!queried_set[i][s] && y_set[i] != s) r = s;
                if (r < 0 && !queried_set[i][1] && y_set[i] != 1) r = 1;
                if (r < 0) throw std::logic_error("finalize_profile: untypeable agent");
                t1_row(i, r, row);
            }
        }
        for (int j = 0; j < n; ++j) p.v(i, j) = row[j];
    }
    p.validate();

    // Consistency certificate: answers bit-exact, announced ordinal induced.
    for (const QueryRecord& q : oracle.transcript())
        if (p.v(q.agent, q.item) != q.answer)
            throw std::logic_error("finalize_profile: profile contradicts a transcript answer");
    const OrdinalProfile identity = identity_ordinal(n);
    const OrdinalProfile derived = derive_ordinal(p);
    for (int i = 0; i < n; ++i)
        if (derived.rankings[i] != identity.rankings[i])
            throw std::logic_error("finalize_profile: profile does not induce the announced ordinal");

    // Witness: the selected agents take A_r, everything else is filled in
    // index order; a full optimum on the finalized profile can only certify
    // more, so keep whichever is better.
    Matching witness;
    witness.assignment.assign(n, -1);
    std::vector<char> agent_used(n, 0), item_used(n, 0);
    for (int t = 0; t < fam.a_sizes[rs]; ++t) {
        const int agent = selected[t];
        witness.assignment[agent] = fam.set_start[rs] + t;
        agent_used[agent] = 1;
        item_used[fam.set_start[rs] + t] = 1;
    }
    for (int i = 0, j = 0; i < n; ++i) {
        if (agent_used[i]) continue;
        while (item_used[j]) ++j;
        witness.assignment[i] = j;
        item_used[j] = 1;
    }
    witness.validate();
    double wit_welfare = social_welfare(witness, p);
    if (n <= 1024) {
        const Matching opt = hungarian_max_weight(WeightMatrix::from(p));
        const double opt_welfare = social_welfare(opt, p);
        if (opt_welfare > wit_welfare) {
            wit_welfare = opt_welfare;
            witness = opt;
        }
    }

    res.alg_welfare = social_welfare(output, p);
    res.witness_welfare = wit_welfare;
    res.ratio = distortion_ratio(std::max(wit_welfare, res.alg_welfare), res.alg_welfare);
    res.expected_alg = (k + 1) * n_delta;
    res.ratio_bound = fam.xi * std::pow(static_cast<double>(n), fam.delta) / (k + 1);
    res.exact_alg_welfare =
        res.exact_alg_welfare && std::fabs(res.alg_welfare - res.expected_alg) <= kWelfareTol;
    res.profile = std::move(p);
    res.witness = std::move(witness);
    return res;
}

}  // namespace qlm
