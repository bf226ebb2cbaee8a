#ifndef QLM_ADVERSARY_HPP
#define QLM_ADVERSARY_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "qlm/algorithms.hpp"
#include "qlm/core.hpp"

namespace qlm {

// Common ranking 0,1,...,n-1 for every agent. All adversarial families here
// index their items so that this is the announced ordinal profile.
OrdinalProfile identity_ordinal(int n);

using QueryAlgorithm = std::function<Matching(const OrdinalProfile&, QueryOracle&)>;

// k distinct uniform queries per agent, then a maximum-weight matching on
// the revealed values. The baseline the adaptive adversary is swept against.
Matching random_query_strawman(const OrdinalProfile& ord, QueryOracle& oracle, int k,
                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Ordinal lower bound: the paired-ranking instance behind the Theta(n^2)
// bound for ordinal algorithms.

struct PairedRankingInstance {
    int n = 0;
    OrdinalProfile ordinal;
    std::vector<int> second_favorite;  // s_i, per agent

    static PairedRankingInstance make(int n);  // n >= 4, even
};

struct OrdinalAdversaryResult {
    ValuationProfile profile;  // unit-sum, built conditionally on the output
    Matching output;
    double alg_welfare = 0.0;
    double opt_welfare = 0.0;  // brute force for n <= 8, else the constructed alternative
    double ratio = 0.0;
};

// Runs an ordinal algorithm (any value query throws) on the instance and
// certifies the distortion ratio against it.
OrdinalAdversaryResult ordinal_adversary_certify(const QueryAlgorithm& alg, int n);

// ---------------------------------------------------------------------------
// Fixed adversarial k-WS instance against (k-1)-TSF.

struct TsfAdversaryResult {
    int n = 0;
    int k = 0;
    double eps = 0.0;
    double xi = 0.0;  // |A_{k+1}|/n, derived
    double alg_welfare = 0.0;
    double witness_welfare = 0.0;
    double ratio = 0.0;
    double closed_form_alg = 0.0;       // 1 + eps (k-1)
    double closed_form_witness = 0.0;   // (min{eps,xi}/2) k n^{1/k}
    ValuationProfile profile;
    Matching output;
    Matching witness;
};

// Runs (k-1)-TSF against the revealed-value oracle of the k-WS family and
// then builds a transcript-consistent profile placing high values on the
// actually-unqueried prefix of each block. Boundary probes of the binary
// search necessarily reveal the head of every block past A_2, so for k >= 3
// the honestly certifiable witness is weaker than an accounting that
// assumes half of every block stays hidden; the result carries both numbers.
TsfAdversaryResult tsf_adversary_certify(int n, int k, double eps = 0.5);

// ---------------------------------------------------------------------------
// Adaptive query adversary with post-hoc consistent profiles (the general
// lower-bound family for k-query algorithms).

struct LowerBoundFamily {
    int n = 0;
    int k = 0;
    ValuationClass klass = ValuationClass::unrestricted;
    double delta = 0.0;  // 1/k unrestricted, 1/(k+1) unit-sum
    double eps = 0.5;
    double xi = 0.5;
    std::vector<int> a_sizes;       // |A_1|..|A_{k+1}|; B is the remainder
    std::vector<int> set_of_item;   // item -> set index 0..k, or k+1 for B
    std::vector<int> set_start;     // first item index of each A set

    // |A_1| = 1, |A_l| = max(1, round(eps n^{(l-1) delta})); unit-sum mode
    // additionally requires k <= (1-xi) n^{1/(k+1)}.
    static LowerBoundFamily make(int n, int k, ValuationClass klass, double eps = 0.5,
                                 double xi = 0.5);

    int b_size() const;
    int sum_a() const
    {
        int s = 0;
        for (int x : a_sizes) s += x;
        return s;
    }
    double per_item_value(int set) const;   // |A_set|^{-1} n^{-delta}
    double revealed_value(int item) const;  // per-item value, 0 on B
    // The counting argument needs n > 2 sum |A_l|; checked when finalizing.
    bool counting_precondition() const { return n > 2 * sum_a(); }
};

class AdaptiveAdversaryOracle : public QueryOracle {
public:
    explicit AdaptiveAdversaryOracle(LowerBoundFamily fam)
        : QueryOracle(fam.n), fam_(std::move(fam)) {}
    const LowerBoundFamily& family() const { return fam_; }

protected:
    double answer(int /*agent*/, int item) override { return fam_.revealed_value(item); }

private:
    LowerBoundFamily fam_;
};

struct FinalizeResult {
    ValuationProfile profile;
    Matching witness;
    double alg_welfare = 0.0;
    double witness_welfare = 0.0;
    double ratio = 0.0;
    double expected_alg = 0.0;        // (k+1) n^{-delta}
    double ratio_bound = 0.0;         // xi n^{delta} / (k+1)
    int chosen_r = 0;                 // 1-based set index of the T1 block
    std::vector<int> t1_agents;
    // True when every agent's value for her assigned item equals the value
    // the adversary would have revealed for it. Unit-sum k = 1 cannot always
    // achieve this (see finalize notes); the flag reports it honestly.
    bool exact_alg_welfare = true;
};

// Implements the inductive search over r, assigns type values, verifies
// consistency with the full transcript (exact answers, announced ordinal,
// unit-sum rows where applicable), and certifies the ratio. Throws if the
// algorithm exceeded k queries per agent or no qualifying r exists.
FinalizeResult finalize_profile(const LowerBoundFamily& fam, const AdaptiveAdversaryOracle& oracle,
                                const Matching& output);

// Largest lambda whose query budget 1 + lambda + lambda ceil(log2 n) fits k.
int max_lambda_for_budget(int n, int k);

}  // namespace qlm

#endif
