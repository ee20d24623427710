#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfkit/chain.hpp"
#include "sfkit/rational.hpp"

namespace sfkit {

/// Point of the projective line labelling where a flag sits in its fiber:
/// either a finite exact value or the point at infinity.
class FiberValue {
public:
    FiberValue() : infinite_(false), value_(0) {}
    explicit FiberValue(Rational v) : infinite_(false), value_(std::move(v)) {}
    static FiberValue infinity() {
        FiberValue v;
        v.infinite_ = true;
        return v;
    }

    bool is_infinite() const { return infinite_; }
    const Rational& finite_value() const {
        if (infinite_) throw std::domain_error("FiberValue: infinite");
        return value_;
    }

    bool operator==(const FiberValue& o) const {
        return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
    }
    bool operator!=(const FiberValue& o) const { return !(*this == o); }
    bool operator<(const FiberValue& o) const {
        if (infinite_ != o.infinite_) return !infinite_;
        if (infinite_) return false;
        return value_ < o.value_;
    }

    /// Parses "inf" / "oo" / "a/b" / "a".
    static FiberValue parse(const std::string& s) {
        if (s == "inf" || s == "oo" || s == "∞") return infinity();
        const auto slash = s.find('/');
        if (slash == std::string::npos) return FiberValue(Rational(Int(s)));
        return FiberValue(Rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1))));
    }

    std::string to_string() const {
        if (infinite_) return "inf";
        std::string out = rational_num(value_).str();
        if (rational_den(value_) != 1) out += "/" + rational_den(value_).str();
        return out;
    }

private:
    bool infinite_;
    Rational value_;
};

struct Mark {
    std::string point_id;
    FiberValue value;
    ReducedFraction weight;
};

/// Base genus plus the marked fibers with their flags and weights.
struct ParabolicStructure {
    int genus = 0;
    std::vector<Mark> marks;

    void validate() const {
        if (genus < 0) throw std::domain_error("ParabolicStructure: genus < 0");
        std::set<std::string> ids;
        for (const Mark& m : marks)
            if (!ids.insert(m.point_id).second)
                throw std::domain_error("ParabolicStructure: duplicate point id " + m.point_id);
    }
};

/// Homology data of a holomorphic section: S^2 and the set of marks it hits.
struct SectionClass {
    Int self_int;
    std::set<std::size_t> incidence;
};

/// mu(S) = S^2 + sum of weights missed - sum of weights hit.
inline Rational slope(const ParabolicStructure& ps, const SectionClass& s) {
    for (std::size_t j : s.incidence)
        if (j >= ps.marks.size())
            throw std::domain_error("slope: incidence index out of range");
    Rational mu(s.self_int);
    for (std::size_t j = 0; j < ps.marks.size(); ++j) {
        const Rational a = ps.marks[j].weight.value();
        mu += s.incidence.count(j) ? -a : a;
    }
    return mu;
}

/// S^2 for the section P(L) of P(E): deg(E) - 2 deg(L).
inline Int section_self_int(const Int& deg_e, const Int& deg_l) { return deg_e - 2 * deg_l; }

/// Orbifold Euler characteristic (2 - 2g) - sum(1 - 1/q_j).
inline Rational orbifold_euler(int genus, const std::vector<Int>& orders) {
    Rational chi(2 - 2 * genus);
    for (const Int& q : orders) {
        if (q < 2) throw std::domain_error("orbifold_euler: order " + q.str() + " < 2");
        chi -= Rational(q - 1, q);
    }
    return chi;
}

/// Negative orbifold Euler characteristic, the condition for a hyperbolic
/// cone metric on the base.
inline bool is_hyperbolic(int genus, const std::vector<Int>& orders) {
    return orbifold_euler(genus, orders) < 0;
}

namespace detail {
inline Rational weight_sum(const std::vector<ReducedFraction>& weights) {
    Rational s = 0;
    for (const auto& w : weights) s += w.value();
    return s;
}
inline Rational weight_max(const std::vector<ReducedFraction>& weights) {
    Rational m = 0;
    for (const auto& w : weights) m = std::max(m, w.value());
    return m;
}
} // namespace detail

/// Sufficient stability certificate for the product of two projective lines:
/// all flag values pairwise distinct (no two marks on one constant graph),
/// and the weight window sum < 2, sum > 2*max. Not a necessary condition.
inline bool certify_p1xp1(const std::vector<FiberValue>& values,
                          const std::vector<ReducedFraction>& weights) {
    if (values.size() != weights.size())
        throw std::domain_error("certify_p1xp1: length mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            if (values[i] == values[j]) return false;
    const Rational sum = detail::weight_sum(weights);
    return sum < 2 && sum > 2 * detail::weight_max(weights);
}

/// Certificate for the decomposable elliptic ruled surface with one weight-1/2
/// mark: the flag avoids both distinguished sections and the two line bundles
/// are non-isomorphic.
inline bool certify_elliptic_decomposable(bool q_on_s1, bool q_on_s2, bool bundles_isomorphic) {
    return !q_on_s1 && !q_on_s2 && !bundles_isomorphic;
}

/// Certificate for the genus-1 product with three weight-1/2 marks: the
/// three flag values must be pairwise distinct.
inline bool certify_txp1(const std::vector<FiberValue>& values) {
    if (values.size() != 3)
        throw std::domain_error("certify_txp1: exactly 3 marks required");
    return values[0] != values[1] && values[0] != values[2] && values[1] != values[2];
}

struct MinSlopeResult {
    Rational min_slope;
    Int degree;                       // d with S^2 = 2d of a minimizing class
    std::set<std::size_t> incidence;  // marks hit by it
};

/// Exhaustive slope minimum over section classes (d, T), 0 <= d <= bound,
/// S^2 = 2d. Feasible incidence sets: for d = 0 the constant graphs, which
/// pass exactly through marks sharing one fiber value; for d >= 1 every
/// subset (the conservative enumeration behind the 2 - sum(weights) margin
/// of the certificate).
inline MinSlopeResult brute_force_min_slope(const ParabolicStructure& ps, int degree_bound) {
    ps.validate();
    const std::size_t n = ps.marks.size();
    if (n > 20) throw std::domain_error("brute_force_min_slope: too many marks for exhaustive scan");

    MinSlopeResult best{slope(ps, SectionClass{Int(0), {}}), Int(0), {}};
    auto consider = [&](const SectionClass& s) {
        const Rational mu = slope(ps, s);
        if (mu < best.min_slope) best = MinSlopeResult{mu, s.self_int / 2, s.incidence};
    };

    // d = 0: constant sections, grouped by shared fiber value
    std::map<FiberValue, std::set<std::size_t>> classes;
    for (std::size_t j = 0; j < n; ++j) classes[ps.marks[j].value].insert(j);
    for (const auto& [value, members] : classes)
        consider(SectionClass{Int(0), members});

    // d >= 1: every incidence subset
    for (int d = 1; d <= degree_bound; ++d)
        for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
            SectionClass s{Int(2 * d), {}};
            for (std::size_t j = 0; j < n; ++j)
                if (mask & (std::size_t(1) << j)) s.incidence.insert(j);
            consider(s);
        }
    return best;
}

/// Total number of blow-ups encoded by the parabolic structure: the sum of
/// the per-mark chain sizes k_j + l_j.
inline std::size_t total_blowups(const ParabolicStructure& ps) {
    ps.validate();
    std::size_t total = 0;
    for (const Mark& m : ps.marks) total += blowup_count(m.weight);
    return total;
}

/// For a genus-0 product base, the same surface seen as a blow-up of the
/// projective plane needs one extra point.
inline std::size_t cp2_blowup_count(const ParabolicStructure& ps) { return total_blowups(ps) + 1; }

/// Random flag-value assignment for the product-of-lines cross-check: half
/// the draws are collision-free, the other half plant a collision between
/// two maximal-weight marks (and may collide further marks at random). Under
/// the certifier's weight window a planted collision forces a negative-slope
/// constant section, so the certificate and the brute-force oracle agree on
/// every draw.
template <typename Rng>
ParabolicStructure random_p1xp1_config(const std::vector<ReducedFraction>& weights, Rng& rng) {
    const std::size_t n = weights.size();
    ParabolicStructure ps;
    ps.genus = 0;
    std::vector<FiberValue> values(n);
    std::uniform_int_distribution<int> coin(0, 1);
    if (coin(rng) == 0) {
        std::uniform_int_distribution<long long> pick(0, 999);
        std::set<long long> used;
        for (std::size_t j = 0; j < n; ++j) {
            long long v = pick(rng);
            while (!used.insert(v).second) v = pick(rng);
            values[j] = FiberValue(Rational(v));
        }
    } else {
        const Rational wmax = detail::weight_max(weights);
        std::vector<std::size_t> heavy;
        for (std::size_t j = 0; j < n; ++j)
            if (weights[j].value() == wmax) heavy.push_back(j);
        if (heavy.size() < 2)
            throw std::domain_error(
                "random_p1xp1_config: collision model needs two marks of maximal weight");
        std::uniform_int_distribution<std::size_t> pick_heavy(0, heavy.size() - 1);
        std::size_t i1 = pick_heavy(rng), i2 = pick_heavy(rng);
        while (i2 == i1) i2 = pick_heavy(rng);
        std::uniform_int_distribution<long long> small(0, 5);
        for (std::size_t j = 0; j < n; ++j) values[j] = FiberValue(Rational(small(rng)));
        const FiberValue shared(Rational(small(rng) + 10));
        values[heavy[i1]] = shared;
        values[heavy[i2]] = shared;
    }
    for (std::size_t j = 0; j < n; ++j)
        ps.marks.push_back(Mark{"P" + std::to_string(j + 1), values[j], weights[j]});
    return ps;
}

struct CrossCheckResult {
    std::size_t trials = 0;
    std::size_t agreements = 0;
    std::size_t certified = 0; // draws the certifier accepted
    bool all_agree() const { return agreements == trials; }
};

/// Seeded certifier-vs-oracle experiment over random configurations.
inline CrossCheckResult certifier_oracle_cross_check(const std::vector<ReducedFraction>& weights,
                                                     std::size_t trials, unsigned seed,
                                                     int degree_bound = 3) {
    std::mt19937 rng(seed);
    CrossCheckResult out;
    out.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const ParabolicStructure ps = random_p1xp1_config(weights, rng);
        std::vector<FiberValue> values;
        for (const Mark& m : ps.marks) values.push_back(m.value);
        const bool cert = certify_p1xp1(values, weights);
        const bool stable = brute_force_min_slope(ps, degree_bound).min_slope > 0;
        if (cert) ++out.certified;
        if (cert == stable) ++out.agreements;
    }
    return out;
}

struct WeightPair {
    Rational beta, gamma;
};

/// Split a weight alpha as gamma - beta inside the window 0 <= beta < gamma < 1,
/// the normalization that makes the lifted parabolic degree zero.
inline WeightPair mehta_seshadri_weights(const ReducedFraction& alpha, const Rational& beta) {
    if (beta < 0)
        throw std::domain_error("mehta_seshadri_weights: beta < 0");
    const Rational gamma = beta + alpha.value();
    if (gamma >= 1)
        throw std::domain_error("mehta_seshadri_weights: gamma = beta + alpha >= 1");
    return WeightPair{beta, gamma};
}

} // namespace sfkit
