#include "qlm/core.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qlm {

std::string to_string(ValuationClass c) {
    return c == ValuationClass::unit_sum ? "unit-sum" : "unrestricted";
}

ValuationClass valuation_class_from_string(const std::string& s) {
    if (s == "unit-sum") return ValuationClass::unit_sum;
    if (s == "unrestricted") return ValuationClass::unrestricted;
    throw std::invalid_argument("unknown valuation class: " + s);
}

void ValuationProfile::validate() const {
    if (n < 1 || values.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("ValuationProfile: bad dimensions");
    for (double x : values)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::invalid_argument("ValuationProfile: entries must be finite and >= 0");
    if (klass == ValuationClass::unit_sum) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += v(i, j);
            if (std::fabs(s - 1.0) > kWelfareTol)
                throw std::invalid_argument("ValuationProfile: unit-sum row " + std::to_string(i) +
                                            " sums to " + std::to_string(s));
        }
    }
}

void OrdinalProfile::validate() const {
    if (n < 1 || rankings.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("OrdinalProfile: bad dimensions");
    std::vector<char> seen(n);
    for (const auto& rank : rankings) {
        if (rank.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("OrdinalProfile: ranking length mismatch");
        std::fill(seen.begin(), seen.end(), 0);
        for (int j : rank) {
            if (j < 0 || j >= n || seen[j]) throw std::invalid_argument("OrdinalProfile: not a permutation");
            seen[j] = 1;
        }
    }
}

void Matching::validate() const {
    const int m = n();
    std::vector<char> seen(m, 0);
    for (int j : assignment) {
        if (j < 0 || j >= m || seen[j]) throw std::invalid_argument("Matching: not a bijection");
        seen[j] = 1;
    }
}

double QueryOracle::query(int agent, int item) {
    if (agent < 0 || agent >= n_ || item < 0 || item >= n_)
        throw std::out_of_range("query: agent/item index out of range");
    auto it = cache_.find(key(agent, item));
    if (it != cache_.end()) return it->second;
    const double a = answer(agent, item);
    cache_.emplace(key(agent, item), a);
    counters_[agent] += 1;
    transcript_.push_back({agent, item, a});
    return a;
}

int QueryOracle::max_count() const {
    int m = 0;
    for (int c : counters_) m = std::max(m, c);
    return m;
}

double NoQueryOracle::answer(int agent, int item) {
    throw std::logic_error("ordinal algorithm issued a value query (" + std::to_string(agent) +
                           "," + std::to_string(item) + ")");
}

OrdinalProfile derive_ordinal(const ValuationProfile& profile) {
    OrdinalProfile ord(profile.n);
    for (int i = 0; i < profile.n; ++i) {
        auto& rank = ord.rankings[i];
        rank.resize(profile.n);
        std::iota(rank.begin(), rank.end(), 0);
        std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) {
            if (profile.v(i, a) != profile.v(i, b)) return profile.v(i, a) > profile.v(i, b);
            return a < b;
        });
    }
    return ord;
}

bool consistent_with(const ValuationProfile& profile, const OrdinalProfile& ord, double tol) {
    for (int i = 0; i < profile.n; ++i)
        for (int p = 0; p + 1 < profile.n; ++p)
            if (profile.v(i, ord.item_at(i, p)) + tol < profile.v(i, ord.item_at(i, p + 1)))
                return false;
    return true;
}

namespace {
template <class P>
double welfare_impl(const Matching& m, const P& profile) {
    if (m.n() != profile.n) throw std::invalid_argument("social_welfare: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < profile.n; ++i) s += profile.v(i, m.assignment[i]);
    return s;
}
}  // namespace

double social_welfare(const Matching& m, const ValuationProfile& profile) {
    return welfare_impl(m, profile);
}

double social_welfare(const Matching& m, const SimulatedProfile& profile) {
    return welfare_impl(m, profile);
}

bool SimulatedProfile::dominated_by(const ValuationProfile& truth, double tol) const {
    if (truth.n != n) return false;
    for (std::size_t i = 0; i < simvalues.size(); ++i)
        if (simvalues[i] > truth.values[i] + tol) return false;
    return true;
}

double distortion_ratio(double opt_sw, double alg_sw) {
    if (alg_sw > opt_sw + kWelfareTol)
        throw std::logic_error("distortion_ratio: algorithm welfare exceeds optimum (solver bug?)");
    if (alg_sw <= 0.0) {
        if (opt_sw <= 0.0) return 1.0;
        return std::numeric_limits<double>::infinity();
    }
    return opt_sw / alg_sw;
}

void write_instance(std::ostream& os, const ValuationProfile& profile) {
    os << "n " << profile.n << ' ' << to_string(profile.klass) << '\n';
    os << std::setprecision(17);
    for (int i = 0; i < profile.n; ++i) {
        for (int j = 0; j < profile.n; ++j) os << (j ? " " : "") << profile.v(i, j);
        os << '\n';
    }
}

void write_instance(std::ostream& os, const OrdinalProfile& ord) {
    os << "n " << ord.n << " ordinal\n";
    for (int i = 0; i < ord.n; ++i) {
        for (int j = 0; j < ord.n; ++j) os << (j ? " " : "") << ord.rankings[i][j];
        os << '\n';
    }
}

namespace {
std::tuple<int, std::string> read_header(std::istream& is) {
    std::string tag, klass;
    int n = 0;
    if (!(is >> tag >> n >> klass) || tag != "n" || n < 1)
        throw std::invalid_argument("instance file: bad header");
    return {n, klass};
}
}  // namespace

ValuationProfile read_instance(std::istream& is) {
    auto [n, klass] = read_header(is);
    ValuationProfile p(n, valuation_class_from_string(klass));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(is >> p.v(i, j))) throw std::invalid_argument("instance file: truncated values");
    p.validate();
    return p;
}

OrdinalProfile read_ordinal_instance(std::istream& is) {
    auto [n, klass] = read_header(is);
    if (klass != "ordinal") throw std::invalid_argument("instance file: expected ordinal class");
    OrdinalProfile ord(n);
    for (int i = 0; i < n; ++i) {
        ord.rankings[i].resize(n);
        for (int j = 0; j < n; ++j)
            if (!(is >> ord.rankings[i][j])) throw std::invalid_argument("instance file: truncated rankings");
    }
    ord.validate();
    return ord;
}

}  // namespace qlm
