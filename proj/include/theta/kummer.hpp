#pragma once

// Level-2 (Kummer variety) pseudo-arithmetic.  At level 2 the Riemann relations
// only determine the symmetric functions of the unordered pair
// {x+y, x-y}: in Hadamard coordinates u_chi(P) = sum_t chi(t) theta_t(P),
//
//   p_chi      = u_chi(S) u_chi(D),
//   s_{chi,c'} = u_chi(S) u_{c'}(D) + u_{c'}(S) u_chi(D),
//
// because B_chi(k,l;0,0) vanishes identically whenever chi(k+l) = -1.  The pair
// is separated by one square root (kummer_add_pair); given neighbouring sums the
// square root is avoided by taking the gcd of two quadratics
// (kummer_compatible_add).

#include <algorithm>

#include "chain.hpp"

namespace theta {

// Unordered pair {+-(x+y), +-(x-y)} of level-2 points; members are normalized
// projectively and ordered lexicographically.
struct KummerPair {
    AffineThetaPoint first, second;

    static KummerPair make(AffineThetaPoint a, AffineThetaPoint b) {
        KummerPair r;
        a = a.projective_normalized();
        b = b.projective_normalized();
        auto less = [](const AffineThetaPoint& p, const AffineThetaPoint& q) {
            for (size_t k = 0; k < p.size(); ++k)
                if (p[k].coeffs() != q[k].coeffs()) return p[k].coeffs() < q[k].coeffs();
            return false;
        };
        if (less(b, a)) std::swap(a, b);
        r.first = std::move(a);
        r.second = std::move(b);
        return r;
    }

    bool contains_projective(const AffineThetaPoint& p) const {
        return projective_eq(first, p).equal || projective_eq(second, p).equal;
    }
};

namespace detail {

// Symmetric pair data for {S, D} = {x+y, x-y} in Hadamard coordinates.
struct KummerData {
    std::vector<FieldElement> p;                 // p[chi]
    std::vector<std::vector<FieldElement>> s;    // s[chi][chi']
};

inline KummerData kummer_pair_data(const AffineThetaPoint& x, const AffineThetaPoint& y,
                                   const ThetaNullPoint& null_pt) {
    const ThetaContext* ctx = x.ctx();
    int g = x.g();
    if (x.level() != 2) fail(errc::bad_input, "Kummer operations work at level 2");
    SelfBCache BX(x), BY(y);
    auto chis = Character2::all(g);
    unsigned C = 1u << g;
    IndexVector zero(g, 2);
    // B_{chi*}(0, tau; S, D) for the reachable (chi*, tau)
    auto getB = [&](const Character2& cs, unsigned taub) -> FieldElement {
        IndexVector tau = two_torsion_index(g, 2, taub);
        auto v = relation_b(cs, zero, tau, BX, BY, null_pt);
        if (!v) fail(errc::degenerate_data, "Kummer data: degenerate null B-sums");
        return *v;
    };
    KummerData out;
    out.p.assign(C, ctx->field()->zero());
    out.s.assign(C, std::vector<FieldElement>(C, ctx->field()->zero()));
    Character2 triv(g, 0);
    for (unsigned cm = 0; cm < C; ++cm) {
        Character2 chi(g, cm);
        FieldElement acc = ctx->field()->zero();
        for (unsigned tb = 0; tb < C; ++tb) {
            FieldElement b = getB(triv, tb);
            acc = chi.eval_bits(tb) < 0 ? acc - b : acc + b;
        }
        out.p[cm] = acc;
    }
    FieldElement two = ctx->field()->from_int(2);
    for (unsigned cm = 0; cm < C; ++cm)
        for (unsigned dm = cm + 1; dm < C; ++dm) {
            Character2 chi(g, cm), chi2(g, dm);
            Character2 prod = chi * chi2;
            FieldElement acc = ctx->field()->zero();
            for (unsigned tb = 0; tb < C; ++tb) {
                if (prod.eval_bits(tb) < 0) continue;  // blocked (and zero-weight) terms
                FieldElement b = getB(prod, tb);
                acc = chi.eval_bits(tb) < 0 ? acc - b : acc + b;
            }
            acc = acc * two;
            out.s[cm][dm] = acc;
            out.s[dm][cm] = acc;
        }
    for (unsigned cm = 0; cm < C; ++cm) out.s[cm][cm] = out.p[cm] * two;
    return out;
}

inline AffineThetaPoint point_from_hadamard(const ThetaContext* ctx, int g,
                                            const std::vector<FieldElement>& uh) {
    AffineThetaPoint out(ctx, 2);
    FieldElement inv2g = ctx->field()->from_int(1u << g).inv();
    for (unsigned ib = 0; ib < (1u << g); ++ib) {
        FieldElement acc = ctx->field()->zero();
        for (unsigned cm = 0; cm < (1u << g); ++cm) {
            acc = Character2(g, cm).eval_bits(ib) < 0 ? acc - uh[cm] : acc + uh[cm];
        }
        out.at(two_torsion_index(g, 2, ib)) = acc * inv2g;
    }
    return out;
}

}  // namespace detail

// The unordered pair {+-(x+y), +-(x-y)} via one square root.
inline KummerPair kummer_add_pair(const AffineThetaPoint& x, const AffineThetaPoint& y,
                                  const ThetaNullPoint& null_pt) {
    const ThetaContext* ctx = x.ctx();
    const FieldContext* F = ctx->field();
    int g = x.g();
    unsigned C = 1u << g;
    auto data = detail::kummer_pair_data(x, y, null_pt);
    // reference character with p != 0
    unsigned c0 = C;
    for (unsigned cm = 0; cm < C; ++cm)
        if (!data.p[cm].is_zero()) {
            c0 = cm;
            break;
        }
    if (c0 == C) fail(errc::degenerate_data, "kummer_add_pair: all diagonal products vanish");
    FieldElement ip0 = data.p[c0].inv();
    // ratios t_chi(S), t_chi(D) (u_chi / u_{c0}) are the roots of
    // T^2 - (s_{chi,c0}/p0) T + p_chi/p0.
    std::vector<FieldElement> tS(C, F->zero()), tD(C, F->zero());
    tS[c0] = F->one();
    tD[c0] = F->one();
    long pivot = -1;
    FieldElement half = F->from_int(2).inv();
    for (unsigned cm = 0; cm < C; ++cm) {
        if (cm == c0) continue;
        FieldElement sum = data.s[cm][c0] * ip0;
        FieldElement prod = data.p[cm] * ip0;
        FieldElement disc = sum * sum - F->from_int(4) * prod;
        if (pivot < 0) {
            if (disc.is_zero()) {
                tS[cm] = sum * half;
                tD[cm] = tS[cm];
                continue;
            }
            FieldElement r;
            try {
                r = F->kth_root(disc, 2);
            } catch (const Error& e) {
                if (e.code() == errc::no_root)
                    fail(errc::no_sqrt, "kummer_add_pair: square root lies in an extension");
                throw;
            }
            tS[cm] = (sum + r) * half;
            tD[cm] = (sum - r) * half;
            pivot = (long)cm;
        } else {
            // linear once a pivot separates the sides:
            // t(S)*tD[pivot] + tS[pivot]*t(D) = s_{cm,pivot}/p0, t(S)+t(D) = sum
            FieldElement cross = data.s[cm][pivot] * ip0;
            FieldElement denom = tD[pivot] - tS[pivot];
            if (denom.is_zero()) fail(errc::degenerate_data, "kummer_add_pair: pivot collapsed");
            tS[cm] = (cross - tS[pivot] * sum) / denom;
            tD[cm] = sum - tS[cm];
        }
    }
    if (pivot < 0) {
        // S and D projectively equal (e.g. y of order 2): pair {S, S}
        auto P = detail::point_from_hadamard(ctx, g, tS);
        return KummerPair::make(P, P);
    }
    return KummerPair::make(detail::point_from_hadamard(ctx, g, tS),
                            detail::point_from_hadamard(ctx, g, tD));
}

// +-(x+z) consistent with the given +-(x+y) and +-(y+z), without a square root:
// the pairs {x+z, x-z} and {(x+y)+(y+z), (x+y)-(y+z)} share the member +-(x-z),
// extracted per character as the common root (gcd) of the two quadratics.
inline AffineThetaPoint kummer_compatible_add(const AffineThetaPoint& x, const AffineThetaPoint& y,
                                              const AffineThetaPoint& z, const AffineThetaPoint& x_plus_y,
                                              const AffineThetaPoint& y_plus_z,
                                              const ThetaNullPoint& null_pt) {
    const ThetaContext* ctx = x.ctx();
    const FieldContext* F = ctx->field();
    int g = x.g();
    unsigned C = 1u << g;
    for (const AffineThetaPoint* p : {&x, &y, &z}) {
        AffineThetaPoint dbl = chain_mult(2, *p, null_pt);
        if (dbl.is_zero_vector() || projective_eq(null_pt.point(), dbl).equal)
            fail(errc::genericity_violation, "compatible add needs 2x, 2y, 2z nonzero");
    }
    auto d1 = detail::kummer_pair_data(x, z, null_pt);
    auto d2 = detail::kummer_pair_data(x_plus_y, y_plus_z, null_pt);
    unsigned c0 = C;
    for (unsigned cm = 0; cm < C; ++cm)
        if (!d1.p[cm].is_zero() && !d2.p[cm].is_zero()) {
            c0 = cm;
            break;
        }
    if (c0 == C) fail(errc::genericity_violation, "compatible add: no usable reference character");
    FieldElement i1 = d1.p[c0].inv(), i2 = d2.p[c0].inv();
    std::vector<FieldElement> t(C, F->zero());
    t[c0] = F->one();
    for (unsigned cm = 0; cm < C; ++cm) {
        if (cm == c0) continue;
        FieldElement S1 = d1.s[cm][c0] * i1, P1 = d1.p[cm] * i1;
        FieldElement S2 = d2.s[cm][c0] * i2, P2 = d2.p[cm] * i2;
        FieldElement dS = S1 - S2;
        if (dS.is_zero()) fail(errc::genericity_violation, "compatible add: quadratics not coprime");
        FieldElement common = (P1 - P2) / dS;  // ratio of +-(x-z)
        t[cm] = S1 - common;                   // the other root: +-(x+z)
    }
    return detail::point_from_hadamard(ctx, g, t);
}

}  // namespace theta
