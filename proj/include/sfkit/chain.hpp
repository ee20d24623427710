#pragma once

#include <stdexcept>
#include <vector>

#include "sfkit/fan.hpp"
#include "sfkit/hj.hpp"
#include "sfkit/rational.hpp"

namespace sfkit {

/// Fiber configuration [-a_1,...,-a_j, -1, -b_r,...,-b_1] reached by an
/// iterated blow-up, stored as the two runs of magnitudes a_i, b_i >= 2
/// flanking the distinguished (-1)-curve.
struct ChainState {
    std::vector<Int> left;  // a_1..a_j, a_1 outermost
    std::vector<Int> right; // b_1..b_r, b_1 outermost

    bool operator==(const ChainState& o) const { return left == o.left && right == o.right; }
};

enum class Move { A, B };
using MoveSequence = std::vector<Move>;

inline char move_char(Move m) { return m == Move::A ? 'A' : 'B'; }

inline void validate(const ChainState& s) {
    for (const Int& e : s.left)
        if (e < 2) throw std::domain_error("ChainState: left entry < 2");
    for (const Int& e : s.right)
        if (e < 2) throw std::domain_error("ChainState: right entry < 2");
    if (s.left.empty() || s.right.empty())
        throw std::domain_error("ChainState: runs must be non-empty");
}

/// State after the two opening blow-ups: two (-2)-curves separated by the
/// (-1)-curve.
inline ChainState initial_config() { return ChainState{{Int(2)}, {Int(2)}}; }

/// Blow up the intersection of the innermost left curve with the (-1)-curve:
/// a_j gains one and the old (-1)-curve becomes a new -2 on the right run.
inline ChainState move_a(ChainState s) {
    validate(s);
    s.left.back() += 1;
    s.right.push_back(2);
    return s;
}

/// Mirror move at the right-hand intersection point.
inline ChainState move_b(ChainState s) {
    validate(s);
    s.right.back() += 1;
    s.left.push_back(2);
    return s;
}

/// Signed self-intersections along the fiber: the left run, -1, then the
/// right run read inward-out.
inline CurveChain to_chain(const ChainState& s) {
    validate(s);
    CurveChain out;
    out.reserve(s.left.size() + s.right.size() + 1);
    for (const Int& a : s.left) out.push_back(-a);
    out.push_back(-1);
    for (auto it = s.right.rbegin(); it != s.right.rend(); ++it) out.push_back(-*it);
    return out;
}

/// Exact duality check: value(left) + value(right) must equal 1 for every
/// state reachable from initial_config(). Exposed for tests and assertions.
inline bool duality_holds(const ChainState& s) {
    const Rational l = hj_eval(HJExpansion{s.left}).value();
    const Rational r = hj_eval(HJExpansion{s.right}).value();
    return l + r == 1;
}

/// Target chain for weight p/q: [-e_1..-e_k, -1, -e'_l..-e'_1].
inline CurveChain chain_of(const ReducedFraction& f) {
    const HJExpansion e = hj_expand(f);
    const HJExpansion ec = complement(f);
    CurveChain out;
    out.reserve(e.length() + ec.length() + 1);
    for (const Int& c : e.coefficients) out.push_back(-c);
    out.push_back(-1);
    for (auto it = ec.coefficients.rbegin(); it != ec.coefficients.rend(); ++it) out.push_back(-*it);
    return out;
}

/// Number of blow-ups needed to build the fiber of chain_of(f): k + l, one
/// per exceptional curve.
inline std::size_t blowup_count(const ReducedFraction& f) {
    return hj_expand(f).length() + complement(f).length();
}

/// Canonical A/B schedule reaching chain_of(f) from initial_config(): the
/// blow-down sequence of the resolution fan replayed in reverse, with each
/// reinserted ray classified by which side of the current (-1)-ray it lands
/// on. The first two insertions rebuild initial_config() and carry no move.
inline MoveSequence plan_moves(const ReducedFraction& f) {
    const BlowDownResult bd = blow_down_all(resolution_fan(f));
    MoveSequence moves;
    if (bd.removed.size() < 2) return moves; // weight 1/2: initial config is the target

    LatticeFan fan = base_fan();
    const std::size_t steps = bd.removed.size();
    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t at = bd.indices[steps - 1 - s];
        const Ray& ray = bd.removed[steps - 1 - s];
        if (!(Ray(fan[at - 1].x + fan[at].x, fan[at - 1].y + fan[at].y) == ray))
            throw std::logic_error("plan_moves: replay does not reproduce the removed ray");
        if (s >= 2) {
            // locate the unique (-1)-ray of the current chain
            const CurveChain chain = self_intersections(fan);
            std::size_t minus_one = 0;
            std::size_t hits = 0;
            for (std::size_t i = 0; i < chain.size(); ++i)
                if (chain[i] == -1) { minus_one = i + 1; ++hits; }
            if (hits != 1)
                throw std::logic_error("plan_moves: intermediate fan is not a single-(-1) chain");
            if (at == minus_one)
                moves.push_back(Move::A);
            else if (at == minus_one + 1)
                moves.push_back(Move::B);
            else
                throw std::logic_error("plan_moves: insertion not adjacent to the (-1)-curve");
        }
        fan = stellar_subdivide(fan, at - 1);
    }
    return moves;
}

/// Apply a move sequence starting from initial_config().
inline ChainState apply_moves(const MoveSequence& moves) {
    ChainState s = initial_config();
    for (Move m : moves) s = (m == Move::A) ? move_a(std::move(s)) : move_b(std::move(s));
    return s;
}

} // namespace sfkit
