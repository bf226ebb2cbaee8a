#ifndef QLM_CORE_HPP
#define QLM_CORE_HPP

#include <iosfwd>
#include <limits>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace qlm {

constexpr double kWelfareTol = 1e-9;

enum class ValuationClass { unrestricted, unit_sum };

std::string to_string(ValuationClass c);
ValuationClass valuation_class_from_string(const std::string& s);

// Full cardinal matrix v_i(j). Ground truth held by oracles, hidden from
// the algorithms themselves.
struct ValuationProfile {
    int n = 0;
    std::vector<double> values;  // row-major, values[i*n + j]
    ValuationClass klass = ValuationClass::unrestricted;

    ValuationProfile() = default;
    ValuationProfile(int n_, ValuationClass c)
        : n(n_), values(static_cast<std::size_t>(n_) * n_, 0.0), klass(c) {}

    double v(int agent, int item) const { return values[static_cast<std::size_t>(agent) * n + item]; }
    double& v(int agent, int item) { return values[static_cast<std::size_t>(agent) * n + item]; }

    // Throws std::invalid_argument on negative entries or, for unit-sum,
    // rows that do not sum to 1 within kWelfareTol.
    void validate() const;
};

// Per-agent strict ranking of items, most to least preferred.
struct OrdinalProfile {
    int n = 0;
    std::vector<std::vector<int>> rankings;  // rankings[i] is a permutation of 0..n-1

    OrdinalProfile() = default;
    explicit OrdinalProfile(int n_) : n(n_), rankings(n_) {}

    int item_at(int agent, int pos) const { return rankings[agent][pos]; }  // pos is 0-based
    void validate() const;
};

// Perfect matching: assignment[i] = item given to agent i.
struct Matching {
    std::vector<int> assignment;

    int n() const { return static_cast<int>(assignment.size()); }
    void validate() const;  // throws unless assignment is a bijection
};

// Lower-bound proxy values built by algorithms from query answers.
struct SimulatedProfile {
    int n = 0;
    std::vector<double> simvalues;

    SimulatedProfile() = default;
    explicit SimulatedProfile(int n_) : n(n_), simvalues(static_cast<std::size_t>(n_) * n_, 0.0) {}

    double v(int agent, int item) const { return simvalues[static_cast<std::size_t>(agent) * n + item]; }
    double& v(int agent, int item) { return simvalues[static_cast<std::size_t>(agent) * n + item]; }

    // ve_i(j) <= v_i(j) everywhere; checked post-hoc against the hidden truth.
    bool dominated_by(const ValuationProfile& truth, double tol = kWelfareTol) const;
};

struct QueryRecord {
    int agent;
    int item;
    double answer;
};

// Counted, logged query channel. Repeated (agent,item) queries are served
// from the cache and do not increment the counter; every algorithm in this
// codebase queries distinct pairs anyway.
class QueryOracle {
public:
    explicit QueryOracle(int n) : n_(n), counters_(n, 0) {}
    virtual ~QueryOracle() = default;

    double query(int agent, int item);
    int n() const { return n_; }
    int count(int agent) const { return counters_[agent]; }
    int max_count() const;
    const std::vector<QueryRecord>& transcript() const { return transcript_; }
    bool was_queried(int agent, int item) const { return cache_.count(key(agent, item)) > 0; }

protected:
    virtual double answer(int agent, int item) = 0;

private:
    std::uint64_t key(int agent, int item) const {
        return static_cast<std::uint64_t>(agent) * static_cast<std::uint64_t>(n_) + item;
    }
    int n_;
    std::vector<int> counters_;
    std::vector<QueryRecord> transcript_;
    std::unordered_map<std::uint64_t, double> cache_;
};

class TruthfulOracle : public QueryOracle {
public:
    explicit TruthfulOracle(ValuationProfile truth)
        : QueryOracle(truth.n), truth_(std::move(truth)) {}
    const ValuationProfile& truth() const { return truth_; }

protected:
    double answer(int agent, int item) override { return truth_.v(agent, item); }

private:
    ValuationProfile truth_;
};

// Oracle that rejects every query; used to certify that an algorithm is
// purely ordinal.
class NoQueryOracle : public QueryOracle {
public:
    explicit NoQueryOracle(int n) : QueryOracle(n) {}

protected:
    double answer(int agent, int item) override;
};

// Items sorted by value descending, ties broken by ascending item index.
OrdinalProfile derive_ordinal(const ValuationProfile& profile);

// True when every agent's values are non-increasing along her ranking.
bool consistent_with(const ValuationProfile& profile, const OrdinalProfile& ord,
                     double tol = kWelfareTol);

double social_welfare(const Matching& m, const ValuationProfile& profile);
double social_welfare(const Matching& m, const SimulatedProfile& profile);

// opt/alg with the edge cases pinned: +inf when alg = 0 < opt, 1 when both
// are 0. alg > opt (beyond tolerance) signals a solver bug and throws.
double distortion_ratio(double opt_sw, double alg_sw);

// ---- instance file format ----
// Cardinal:  "n <int> <unrestricted|unit-sum>" then n rows of n values.
// Ordinal:   "n <int> ordinal" then n rows of n item indices.
void write_instance(std::ostream& os, const ValuationProfile& profile);
void write_instance(std::ostream& os, const OrdinalProfile& ord);
ValuationProfile read_instance(std::istream& is);
OrdinalProfile read_ordinal_instance(std::istream& is);

}  // namespace qlm

#endif
