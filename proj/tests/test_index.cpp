#include <set>
#include <tuple>

#include <catch2/catch_amalgamated.hpp>
#include <theta/index.hpp>

using namespace theta;

TEST_CASE("enumerate is lexicographic and complete") {
    auto v = enumerate(1, 4);
    REQUIRE(v.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(v[i][0] == i);

    auto w = enumerate(2, 2);
    REQUIRE(w.size() == 4);
    CHECK(w[0].str() == "[0,0]");
    CHECK(w[1].str() == "[0,1]");
    CHECK(w[2].str() == "[1,0]");
    CHECK(w[3].str() == "[1,1]");

    auto u = enumerate(2, 3);
    REQUIRE(u.size() == 9);
    CHECK(u.front().str() == "[0,0]");
    CHECK(u.back().str() == "[2,2]");
    for (size_t k = 0; k < u.size(); ++k) CHECK(u[k].rank() == k);
}

TEST_CASE("embed_scale multiplies into the larger level") {
    IndexVector i1(1, 4);
    i1.set(0, 1);
    CHECK(embed_scale(i1, 3)[0] == 3);
    i1.set(0, 3);
    CHECK(embed_scale(i1, 3)[0] == 9);
    IndexVector i2(2, 2, {1, 1});
    auto e = embed_scale(i2, 3);
    CHECK(e.modulus() == 6);
    CHECK(e[0] == 3);
    CHECK(e[1] == 3);
}

TEST_CASE("section set is the CRT section") {
    FieldContext F13(13);
    ThetaContext c143(1, 4, 3, &F13);
    auto S = section_set(c143);
    REQUIRE(S.size() == 3);
    CHECK(S[0][0] == 0);
    CHECK(S[1][0] == 4);
    CHECK(S[2][0] == 8);

    FieldContext F11(11);
    ThetaContext c125(1, 2, 5, &F11);
    auto S2 = section_set(c125);
    REQUIRE(S2.size() == 5);
    for (size_t k = 0; k < 5; ++k) CHECK(S2[k][0] == (int)(2 * k));

    ThetaContext c223(2, 2, 3, &F13);
    auto S3 = section_set(c223);
    REQUIRE(S3.size() == 9);
    for (const auto& s : S3) {
        CHECK(s[0] % 2 == 0);
        CHECK(s[1] % 2 == 0);
    }

    // unique decomposition: S + Z(n) covers Z(ell*n) exactly once
    std::vector<int> hits(36, 0);
    for (const auto& s : S3)
        for (const auto& b : enumerate(2, 2)) hits[(s + b.embedded(6, 3)).rank()]++;
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("chain basis") {
    FieldContext F13(13);
    ThetaContext c143(1, 4, 3, &F13);
    auto S = chain_basis(c143);
    REQUIRE(S.size() == 2);  // 1 + g(g+1)/2 with g=1
    CHECK(S[0][0] == 0);
    CHECK(S[1][0] == 4);

    ThetaContext c223(2, 2, 3, &F13);
    auto S2 = chain_basis(c223);
    REQUIRE(S2.size() == 4);
    CHECK(S2[0].str() == "[0,0]");
    CHECK(S2[1].str() == "[2,0]");
    CHECK(S2[2].str() == "[0,2]");
    CHECK(S2[3].str() == "[2,2]");

    // |S| = 1 + g(g+1)/2 at g=3
    FieldContext F7(7);
    ThetaContext c3(3, 2, 3, &F7);
    CHECK(chain_basis(c3).size() == 7);
}

TEST_CASE("chain basis closure generates the embedded Z(ell)") {
    FieldContext F13(13), F11(11);
    for (auto [g, n, ell] : {std::tuple{1, 4, 3}, {2, 2, 3}, {1, 2, 5}}) {
        const FieldContext& F = (ell == 5) ? F11 : F13;
        ThetaContext ctx(g, n, ell, &F);
        auto S = chain_basis(ctx);
        std::set<size_t> have;
        std::vector<IndexVector> base;
        for (const auto& s : S) {
            IndexVector i(g, ell);
            for (int k = 0; k < g; ++k) i.set(k, s[k] / n);
            base.push_back(i);
            have.insert(i.rank());
        }
        auto all = enumerate(g, ell);
        bool progress = true;
        while (progress) {
            progress = false;
            for (const auto& i : all)
                for (const auto& j : all) {
                    if (!have.count(i.rank()) || !have.count(j.rank()) ||
                        !have.count((i - j).rank()))
                        continue;
                    if (have.insert((i + j).rank()).second) progress = true;
                }
        }
        CHECK(have.size() == all.size());
    }
}

TEST_CASE("dual pairing values and bilinearity") {
    FieldContext F13(13);
    ThetaContext ctx(1, 4, 3, &F13);
    IndexVector z(1, 12), i(1, 12), j(1, 12), j2(1, 12);
    i.set(0, 1);
    j.set(0, 1);
    CHECK(dual_pairing(ctx, i, z, 12) == F13.one());
    CHECK(dual_pairing(ctx, i, j, 12) == F13.from_int(2));  // zeta_12 = 2 in F_13

    // bilinearity and order over the full enumeration at g<=2, delta<=12
    for (int delta : {2, 3, 4, 6, 12}) {
        for (const auto& a : enumerate(1, delta))
            for (const auto& b : enumerate(1, delta)) {
                for (const auto& c : enumerate(1, delta)) {
                    CHECK(dual_pairing(ctx, a + c, b, delta) ==
                          dual_pairing(ctx, a, b, delta) * dual_pairing(ctx, c, b, delta));
                }
                CHECK(F13.pow(dual_pairing(ctx, a, b, delta), delta) == F13.one());
            }
    }
    ThetaContext ctx2(2, 2, 3, &F13);
    for (const auto& a : enumerate(2, 6))
        for (const auto& b : enumerate(2, 6)) {
            CHECK(F13.pow(dual_pairing(ctx2, a, b, 6), 6) == F13.one());
            for (const auto& c : enumerate(2, 6))
                CHECK(dual_pairing(ctx2, a, b + c, 6) ==
                      dual_pairing(ctx2, a, b, 6) * dual_pairing(ctx2, a, c, 6));
        }
}

TEST_CASE("theta context invariants") {
    FieldContext F13(13);
    CHECK_THROWS_AS(ThetaContext(1, 3, 3, &F13), Error);  // n odd
    CHECK_THROWS_AS(ThetaContext(1, 4, 4, &F13), Error);  // ell even
    FieldContext F17(17);
    CHECK_THROWS_AS(ThetaContext(1, 4, 3, &F17), Error);  // no 12th root of unity in F_17
    ThetaContext ok(1, 4, 1, &F17);                       // chain-only context
    CHECK(ok.zeta_n().pow(4) == F17.one());
}

TEST_CASE("characters of Z(2)^g") {
    Character2 triv(2, 0), c1(2, 1), c2(2, 2);
    CHECK(triv.eval_bits(3) == 1);
    CHECK(c1.eval_bits(1) == -1);
    CHECK(c1.eval_bits(2) == 1);
    CHECK((c1 * c2).eval_bits(3) == 1);
    CHECK((c1 * c1).trivial());
}
