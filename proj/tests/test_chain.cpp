#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace theta;

namespace {

// Consistent affine triple (x+y, x, y) from Heisenberg translates of the null
// point.
struct Triple {
    AffineThetaPoint xy, x, y;
};

Triple make_triple(const ThetaNullPoint& np, const IndexVector& i1, const IndexVector& j1,
                   const IndexVector& i2, const IndexVector& j2) {
    const ThetaContext& ctx = *np.ctx();
    HeisenbergElement h1(ctx.field()->one(), i1, j1), h2(ctx.field()->one(), i2, j2);
    return Triple{heisenberg_act(ctx, h1.compose(ctx, h2), np.point()),
                  heisenberg_act(ctx, h1, np.point()), heisenberg_act(ctx, h2, np.point())};
}

AffineThetaPoint diff_point(const ThetaNullPoint& np, const IndexVector& i1, const IndexVector& j1,
                            const IndexVector& i2, const IndexVector& j2) {
    const ThetaContext& ctx = *np.ctx();
    HeisenbergElement h1(ctx.field()->one(), i1, j1), hm2(ctx.field()->one(), -i2, -j2);
    return heisenberg_act(ctx, h1.compose(ctx, hm2), np.point());
}

}  // namespace

TEST_CASE("chain_add(x, 0, x) = x exactly on translates") {
    for (const fx::Instance* Ip : {&fx::p13(), &fx::p17()}) {
        const auto& np = *Ip->null_B;
        int checked = 0;
        for (const auto& i : enumerate(1, 4))
            for (const auto& j : enumerate(1, 4)) {
                auto x = fx::translate(np, i, j);
                CHECK(chain_add(x, np.point(), x, np) == x);
                ++checked;
            }
        CHECK(checked == 16);
    }
}

TEST_CASE("homogeneity of chain_add (homogen1)") {
    const auto& I = fx::p13();
    const auto& np = *I.null_B;
    const auto* F = I.F.get();
    auto idx = enumerate(1, 4);
    auto x = fx::translate(np, idx[1], idx[0]);
    auto y = fx::translate(np, idx[0], idx[1]);
    auto d = diff_point(np, idx[1], idx[0], idx[0], idx[1]);
    auto base = chain_add(x, y, d, np);
    for (u64 lx : {2, 3, 5})
        for (u64 ly : {2, 3, 5})
            for (u64 ld : {2, 3, 5}) {
                auto scaled = chain_add(x.scaled(F->from_int(lx)), y.scaled(F->from_int(ly)),
                                        d.scaled(F->from_int(ld)), np);
                FieldElement factor =
                    F->from_int(lx).pow(2) * F->from_int(ly).pow(2) / F->from_int(ld);
                CHECK(scaled == base.scaled(factor));
            }
}

TEST_CASE("multiplication chain basics and scaling laws") {
    for (const fx::Instance* Ip : {&fx::p13(), &fx::p17()}) {
        const auto& np = *Ip->null_B;
        const auto* F = Ip->F.get();
        auto idx = enumerate(1, 4);
        auto x = fx::translate(np, idx[1], idx[2]);

        CHECK(chain_mult(0, x, np) == np.point());
        CHECK(chain_mult(1, x, np) == x);
        CHECK(chain_mult(2, x, np) == chain_add(x, x, np.point(), np));

        // chain_mult(m, lambda x) = lambda^{m^2} chain_mult(m, x)
        for (u64 m : {2, 3, 5})
            for (u64 lam : {2, 3}) {
                auto lhs = chain_mult(m, x.scaled(F->from_int(lam)), np);
                auto rhs = chain_mult(m, x, np).scaled(F->from_int(lam).pow(m * m));
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("multadd ladder equals naive recursion for m <= 20") {
    const auto& I = fx::p13();
    const auto& np = *I.null_B;
    auto idx = enumerate(1, 4);
    int triples = 0;
    for (auto [a, b, c, d] : {std::array<int, 4>{1, 0, 0, 1},
                              {2, 1, 1, 0},
                              {3, 2, 0, 2},
                              {1, 1, 2, 3},
                              {0, 3, 1, 1},
                              {2, 0, 3, 1},
                              {3, 3, 1, 2},
                              {1, 2, 2, 1},
                              {0, 1, 3, 0},
                              {2, 2, 1, 3}}) {
        Triple t = make_triple(np, idx[a], idx[b], idx[c], idx[d]);
        ++triples;
        CHECK(chain_multadd(1, t.xy, t.x, t.y, np) == t.xy);
        for (u64 m = 0; m <= 20; ++m) {
            auto lad = chain_multadd(m, t.xy, t.x, t.y, np);
            auto naive = chain_multadd_naive(m, t.xy, t.x, t.y, np);
            CHECK(lad == naive);
        }
    }
    CHECK(triples == 10);
}

TEST_CASE("homogeneity of chain_multadd (homogen2)") {
    const auto& I = fx::p13();
    const auto& np = *I.null_B;
    const auto* F = I.F.get();
    auto idx = enumerate(1, 4);
    Triple t = make_triple(np, idx[1], idx[2], idx[2], idx[1]);
    for (u64 m : {2, 3, 5, 7}) {
        auto base = chain_multadd(m, t.xy, t.x, t.y, np);
        for (u64 lxy : {2, 5})
            for (u64 lx : {3, 2})
                for (u64 ly : {2, 3}) {
                    auto scaled = chain_multadd(m, t.xy.scaled(F->from_int(lxy)),
                                                t.x.scaled(F->from_int(lx)),
                                                t.y.scaled(F->from_int(ly)), np);
                    // lambda_x^{m(m-1)} lambda_{x+y}^m / lambda_y^{m-1}
                    FieldElement factor = F->from_int(lx).pow(m * (m - 1)) *
                                          F->from_int(lxy).pow(m) / F->from_int(ly).pow(m - 1);
                    CHECK(scaled == base.scaled(factor));
                }
    }
}

TEST_CASE("riemann certificate holds for computed additions") {
    const auto& I = fx::p13();
    const auto& np = *I.null_B;
    auto idx = enumerate(1, 4);
    auto x = fx::translate(np, idx[2], idx[1]);
    auto y = fx::translate(np, idx[1], idx[3]);
    auto d = diff_point(np, idx[2], idx[1], idx[1], idx[3]);
    auto z = chain_add(x, y, d, np);
    CHECK(riemann_certificate(z, d, y, x, np));
    // certificate rejects a wrong lift
    CHECK(!riemann_certificate(z.scaled(I.F->from_int(2)), d, y, x, np));
}

TEST_CASE("translation compatibility of the pseudo-addition") {
    const auto& I = fx::p13();
    const auto& np = *I.null_B;
    const auto& ctx = *I.ctx;
    auto one = I.F->one();
    auto idx = enumerate(1, 4);
    auto x = fx::translate(np, idx[1], idx[0]);
    auto y = fx::translate(np, idx[2], idx[3]);
    auto d = diff_point(np, idx[1], idx[0], idx[2], idx[3]);
    auto sum = chain_add(x, y, d, np);
    IndexVector z(1, 4);
    for (const auto& i : idx)
        for (const auto& j : idx) {
            // translation parts only
            HeisenbergElement hi(one, i, z), hj(one, j, z), hij(one, i + j, z), him_j(one, i - j, z);
            auto lhs = heisenberg_act(ctx, hij, sum);
            auto rhs = chain_add(heisenberg_act(ctx, hi, x), heisenberg_act(ctx, hj, y),
                                 heisenberg_act(ctx, him_j, d), np);
            CHECK(lhs == rhs);
        }
    // full version with dual parts
    for (const auto& k : idx)
        for (const auto& l : idx) {
            HeisenbergElement hk(one, idx[1], k), hl(one, idx[3], l);
            HeisenbergElement hkl(one, idx[1] + idx[3], k + l), hk_l(one, idx[1] - idx[3], k - l);
            auto lhs = heisenberg_act(ctx, hkl, sum);
            auto rhs = chain_add(heisenberg_act(ctx, hk, x), heisenberg_act(ctx, hl, y),
                                 heisenberg_act(ctx, hk_l, d), np);
            CHECK(lhs == rhs);
        }
}

TEST_CASE("ladder associativity on true torsion lifts") {
    const auto& I = fx::p13();
    const auto& np = *I.null_B;
    // a nonzero 3-torsion point, lifted per the true-lift rule
    const AffineThetaPoint* T0 = nullptr;
    for (const auto& t : I.torsion)
        if (!projective_eq(np.point(), t).equal) {
            T0 = &t;
            break;
        }
    REQUIRE(T0 != nullptr);
    auto Tl = true_lift(*T0, np);
    CHECK(Tl.verify(np));
    const auto& x = Tl.point;
    auto y = fx::translate(np, IndexVector(1, 4, {1}), IndexVector(1, 4, {2}));
    auto xy = normal_add(x, y, np);
    // (n1+n2)x + y = chain_add(n1 x + y, n2 x, (n1-n2) x + y)
    for (u64 n1 = 0; n1 <= 10; ++n1)
        for (u64 n2 = 0; n2 <= n1; ++n2) {
            auto a = chain_multadd(n1, xy, x, y, np);
            auto b = chain_mult(n2, x, np);
            auto c = chain_multadd(n1 - n2, xy, x, y, np);
            auto lhs = chain_multadd(n1 + n2, xy, x, y, np);
            CHECK(chain_add(a, b, c, np) == lhs);
        }
}

TEST_CASE("negation rule for multiplication chains") {
    const auto& I = fx::p13();
    const auto& np = *I.null_B;
    auto idx = enumerate(1, 4);
    Triple t = make_triple(np, idx[1], idx[2], idx[3], idx[0]);
    for (u64 m : {2, 3, 5, 7}) {
        auto lhs = negate(chain_multadd(m, t.xy, t.x, t.y, np));
        auto rhs = chain_multadd(m, negate(t.xy), negate(t.x), negate(t.y), np);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("normal_add agrees with chain_add projectively") {
    const auto& I = fx::p13();
    const auto& np = *I.null_B;
    auto idx = enumerate(1, 4);
    auto x = fx::translate(np, idx[1], idx[2]);
    auto y = fx::translate(np, idx[3], idx[1]);
    auto d = diff_point(np, idx[1], idx[2], idx[3], idx[1]);
    auto via_chain = chain_add(x, y, d, np);
    auto via_normal = normal_add(x, y, np);
    CHECK(projective_eq(via_chain, via_normal).equal);
    CHECK(projective_eq(normal_add(y, x, np), via_normal).equal);  // commutative
    CHECK(projective_eq(normal_add(x, np.point(), np), x).equal);

    // and on brute-forced torsion points
    const auto& T = I.torsion;
    for (size_t a = 0; a < T.size(); ++a)
        for (size_t b = 0; b < T.size(); ++b) {
            if (projective_eq(np.point(), T[a]).equal || projective_eq(np.point(), T[b]).equal)
                continue;
            auto nsum = normal_add(T[a], T[b], np);
            auto ndiff = normal_add(T[a], negate(T[b]), np);
            if (projective_eq(np.point(), ndiff).equal) continue;  // a = b: difference is zero
            auto csum = chain_add(T[a], T[b], ndiff, np);
            CHECK(projective_eq(nsum, csum).equal);
        }
}

TEST_CASE("level-2 chain arithmetic (Kummer line)") {
    const auto& K = fx::kummer_line();
    const auto& np = *K.null_B;
    REQUIRE(K.torsion.size() == 5);
    // x = chaineadd(x, 0, x) at level 2 as well
    for (const auto& t : K.torsion) CHECK(chain_add(t, np.point(), t, np) == t);
    // ladder consistency at level 2
    const AffineThetaPoint* T0 = nullptr;
    for (const auto& t : K.torsion)
        if (!projective_eq(np.point(), t).equal) {
            T0 = &t;
            break;
        }
    REQUIRE(T0 != nullptr);
    for (u64 m = 0; m <= 12; ++m)
        CHECK(chain_mult(m, *T0, np) ==
              chain_multadd_naive(m, *T0, *T0, np.point(), np));
    // projective order 3
    CHECK(projective_eq(np.point(), chain_mult(3, *T0, np)).equal);
    CHECK(!projective_eq(np.point(), chain_mult(2, *T0, np)).equal);
    // normal_add refuses level 2
    CHECK_THROWS_AS(normal_add(*T0, *T0, np), Error);
}
