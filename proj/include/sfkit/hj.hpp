#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sfkit/rational.hpp"

namespace sfkit {

/// Coefficients e_1,...,e_k of the nested fraction
///     p/q = 1/(e_1 - 1/(e_2 - ... - 1/e_k)),
/// all e_i >= 2. With that bound the expansion of a fraction is unique.
struct HJExpansion {
    std::vector<Int> coefficients;

    std::size_t length() const { return coefficients.size(); }
    bool operator==(const HJExpansion& o) const { return coefficients == o.coefficients; }
};

/// Minus-sign continued fraction expansion of p/q via ceiling division:
/// e_1 = ceil(q/p), then recurse on (e_1*p - q)/p. Since p < q every
/// quotient is >= 2, which pins down the unique all->=2 expansion.
inline HJExpansion hj_expand(const ReducedFraction& f) {
    HJExpansion out;
    Int p = f.num(), q = f.den();
    while (p != 0) {
        Int e = (q + p - 1) / p; // ceil(q/p), q > p > 0
        out.coefficients.push_back(e);
        Int r = e * p - q; // next numerator, 0 <= r < p
        q = p;
        p = r;
    }
    return out;
}

/// Exact value of the nested fraction, reduced. Rejects empty input and any
/// coefficient < 2 (the uniqueness regime).
inline ReducedFraction hj_eval(const HJExpansion& e) {
    if (e.coefficients.empty())
        throw std::domain_error("hj_eval: empty expansion");
    Rational v = 0;
    for (auto it = e.coefficients.rbegin(); it != e.coefficients.rend(); ++it) {
        if (*it < 2)
            throw std::domain_error("hj_eval: coefficient " + it->str() + " < 2");
        v = Rational(1) / (Rational(*it) - v);
    }
    return ReducedFraction(rational_num(v), rational_den(v));
}

/// Reversed coefficient list. If the input expands lambda/mu, the reversal
/// expands lambda'/mu with lambda*lambda' = 1 (mod mu) and 0 < lambda' < mu.
inline HJExpansion hj_reverse(HJExpansion e) {
    std::reverse(e.coefficients.begin(), e.coefficients.end());
    return e;
}

/// Expansion of (q-p)/q. Together with hj_expand(p/q) the two values sum
/// to 1 exactly; the pair of strings flanks the -1 curve of the fiber chain.
inline HJExpansion complement(const ReducedFraction& f) {
    return hj_expand(f.complement_fraction());
}

/// Convergent pairs (m_j, n_j), j = 1..k+1, with n_j/m_j the value of the
/// truncated expansion through e_{j-1}. Satisfies the three-term recurrence
/// m_{j+1} = e_j m_j - m_{j-1} seeded by (m_0,n_0) = (0,-1), (m_1,n_1) = (1,0),
/// and ends at (m_{k+1}, n_{k+1}) = (q, p).
inline std::vector<std::pair<Int, Int>> approximants(const ReducedFraction& f) {
    const HJExpansion e = hj_expand(f);
    std::vector<std::pair<Int, Int>> out;
    out.reserve(e.length() + 1);
    Int m_prev = 0, n_prev = -1;
    Int m = 1, n = 0;
    out.emplace_back(m, n);
    for (const Int& coeff : e.coefficients) {
        Int m_next = coeff * m - m_prev;
        Int n_next = coeff * n - n_prev;
        m_prev = std::exchange(m, m_next);
        n_prev = std::exchange(n, n_next);
        out.emplace_back(m, n);
    }
    return out;
}

} // namespace sfkit
