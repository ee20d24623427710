#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sfkit/chain.hpp"

using namespace sfkit;

TEST_CASE("initial configuration is the double blow-up") {
    const ChainState s = initial_config();
    CHECK(to_chain(s) == CurveChain{-2, -1, -2});
    CHECK(duality_holds(s)); // 1/2 + 1/2 = 1
    CHECK(chain_of(ReducedFraction(1, 2)) == to_chain(s));
}

TEST_CASE("move A bumps the left run and appends -2 on the right") {
    const ChainState s = move_a(initial_config());
    CHECK(to_chain(s) == CurveChain{-3, -1, -2, -2});
    CHECK(duality_holds(s));
    // the left fraction strictly decreases: 1/3 < 1/2
    CHECK(hj_eval(HJExpansion{s.left}).value() < Rational(1, 2));
}

TEST_CASE("move B mirrors move A") {
    const ChainState s = move_b(initial_config());
    CHECK(to_chain(s) == CurveChain{-2, -2, -1, -3});
    CHECK(duality_holds(s));

    // mirror conjugation: swapping runs turns B into A
    auto mirror = [](ChainState st) {
        std::swap(st.left, st.right);
        return st;
    };
    const ChainState via_a = mirror(move_a(mirror(initial_config())));
    CHECK(via_a == s);
}

TEST_CASE("duality and monotonicity along random move words") {
    std::mt19937 rng(7);
    std::bernoulli_distribution coin;
    for (int trial = 0; trial < 50; ++trial) {
        ChainState s = initial_config();
        for (int step = 0; step < 12; ++step) {
            const Rational left_before = hj_eval(HJExpansion{s.left}).value();
            const bool use_a = coin(rng);
            s = use_a ? move_a(std::move(s)) : move_b(std::move(s));
            REQUIRE(duality_holds(s));
            const Rational left_after = hj_eval(HJExpansion{s.left}).value();
            if (use_a) REQUIRE(left_after < left_before);
        }
    }
}

TEST_CASE("chain_of reproduces the worked chains") {
    CHECK(chain_of(ReducedFraction(1, 2)) == CurveChain{-2, -1, -2});
    CHECK(chain_of(ReducedFraction(1, 3)) == CurveChain{-3, -1, -2, -2});
    CHECK(chain_of(ReducedFraction(2, 5)) == CurveChain{-3, -2, -1, -3, -2});
}

TEST_CASE("blow-up counts") {
    CHECK(blowup_count(ReducedFraction(1, 2)) == 2);
    CHECK(blowup_count(ReducedFraction(1, 3)) == 3);
    CHECK(blowup_count(ReducedFraction(2, 5)) == 4);
    CHECK(blowup_count(ReducedFraction(2, 5)) == chain_of(ReducedFraction(2, 5)).size() - 1);
}

TEST_CASE("planned moves replay to the target chain") {
    CHECK(plan_moves(ReducedFraction(1, 2)).empty());
    CHECK(plan_moves(ReducedFraction(1, 3)) == MoveSequence{Move::A});
    const MoveSequence m25 = plan_moves(ReducedFraction(2, 5));
    CHECK(m25 == MoveSequence{Move::A, Move::B});
    CHECK(to_chain(apply_moves(m25)) == chain_of(ReducedFraction(2, 5)));
}

TEST_CASE("replay agreement for all q <= 120") {
    for (long long q = 2; q <= 120; ++q)
        for (long long p = 1; p < q; ++p) {
            if (boost::multiprecision::gcd(Int(p), Int(q)) != 1) continue;
            const ReducedFraction f(p, q);
            const MoveSequence moves = plan_moves(f);
            REQUIRE(moves.size() + 2 == blowup_count(f));
            REQUIRE(to_chain(apply_moves(moves)) == chain_of(f));
        }
}
