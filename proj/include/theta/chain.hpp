#pragma once

// Pseudo-addition on the affine cone: differential addition chains, multiplication
// chains via a Montgomery ladder, and ordinary (non-differential) addition.
//
// chain_add(x, y, d, 0) returns the unique lift z of x+y with, for all
// i+j+k+l = 2m and all chi,
//
//   B_chi(i,j; z,d) * B_chi(k,l; 0,0) = B_chi(i-m, m-j; y,y) * B_chi(m-k, m-l; x,x).
//
// Each dual coordinate of z is recovered as
//
//   u_{(i,chi_i)}(z) = sum_tau chi_j(tau) B_chi(i, j+tau; z,d) / u_{(j,chi_j)}(d),
//
// where chi = chi_i*chi_j, (j,chi_j) is any index with u_{(j,chi_j)}(d) != 0, and
// each B_chi(i, j+tau; z,d) comes from one relation divided by a nonzero null
// B-sum.  Index selection scans k = i + 2Z, l = j+tau + 2Z first and falls back
// to a full parity-class scan before raising DegenerateData.

#include <optional>

#include "riemann.hpp"

namespace theta {

namespace detail {

// Memoized B-sums of one point against itself, per call.
class SelfBCache {
  public:
    explicit SelfBCache(const AffineThetaPoint& P) : P_(&P), N_(P.size()) {
        int g = P.g();
        v_.resize((size_t)(1u << g) * N_ * N_);
        have_.resize(v_.size(), false);
    }
    const FieldElement& get(const Character2& chi, const IndexVector& i, const IndexVector& j) {
        size_t s = (chi.mask() * N_ + i.rank()) * N_ + j.rank();
        if (!have_[s]) {
            v_[s] = b_sum(chi, i, j, *P_, *P_);
            have_[s] = true;
        }
        return v_[s];
    }

  private:
    const AffineThetaPoint* P_;
    size_t N_;
    std::vector<FieldElement> v_;
    std::vector<bool> have_;
};

// 2Z(delta) offsets in lexicographic order.
inline const std::vector<IndexVector>& even_offsets(int g, int delta) {
    thread_local std::map<std::pair<int, int>, std::vector<IndexVector>> cache;
    auto key = std::make_pair(g, delta);
    auto it = cache.find(key);
    if (it == cache.end()) {
        std::vector<IndexVector> v;
        for (const auto& h : enumerate(g, delta / 2)) v.push_back(h.embedded(delta, 2));
        it = cache.emplace(key, std::move(v)).first;
    }
    return it->second;
}

inline unsigned parity_class(const IndexVector& v) {
    unsigned c = 0;
    for (int i = 0; i < v.g(); ++i)
        if (v[i] & 1) c |= 1u << i;
    return c;
}

// B_chi(i, jj; z, d) extracted from one Riemann relation.  Returns nullopt when
// no admissible (k,l) with nonzero null B-sum exists.
inline std::optional<FieldElement> relation_b(const Character2& chi, const IndexVector& i,
                                              const IndexVector& jj, SelfBCache& BX, SelfBCache& BY,
                                              const ThetaNullPoint& null_pt) {
    const NullBTable& nb = null_pt.b_table();
    int g = i.g(), delta = i.modulus();
    auto eval = [&](const IndexVector& k, const IndexVector& l) -> FieldElement {
        IndexVector m = detail::halves(i + jj + k + l).front();
        return nb.inverse(chi.mask(), k, l) * BY.get(chi, i - m, m - jj) * BX.get(chi, m - k, m - l);
    };
    for (const auto& a : even_offsets(g, delta))
        for (const auto& b : even_offsets(g, delta)) {
            IndexVector k = i + a, l = jj + b;
            if (nb.nonzero(chi.mask(), k, l)) return eval(k, l);
        }
    // fallback: full scan over the parity class of i + jj
    unsigned want = parity_class(i + jj);
    for (const auto& k : enumerate_cached(g, delta))
        for (const auto& l : enumerate_cached(g, delta)) {
            if (parity_class(k + l) != want) continue;
            if (nb.nonzero(chi.mask(), k, l)) return eval(k, l);
        }
    return std::nullopt;
}

}  // namespace detail

inline AffineThetaPoint chain_add(const AffineThetaPoint& x, const AffineThetaPoint& y,
                                  const AffineThetaPoint& d, const ThetaNullPoint& null_pt) {
    const ThetaContext* ctx = x.ctx();
    int g = x.g(), delta = x.level();
    if (y.level() != delta || d.level() != delta || null_pt.level() != delta)
        fail(errc::context_mismatch, "chain_add level mismatch");
    DualThetaTable uD = char_transform(d);
    detail::SelfBCache BX(x), BY(y);
    auto chis = Character2::all(g);
    const auto& all_idx = enumerate_cached(g, delta);
    DualThetaTable uS(ctx, delta);
    for (const auto& rep : enumerate_cached(g, delta / 2)) {
        IndexVector i(g, delta);
        for (int k = 0; k < g; ++k) i.set(k, rep[k]);
        for (const auto& chi_i : chis) {
            bool done = false;
            // prefer chi_j = chi_i (combined character trivial), then the rest
            for (unsigned pass = 0; pass < chis.size() + 1 && !done; ++pass) {
                Character2 chi_j = pass == 0 ? chi_i : chis[pass - 1];
                if (pass > 0 && chi_j == chi_i) continue;
                Character2 chi = chi_i * chi_j;
                for (const auto& j : all_idx) {
                    FieldElement den = uD.get(j, chi_j);
                    if (den.is_zero()) continue;
                    FieldElement total = ctx->field()->zero();
                    bool feasible = true;
                    for (unsigned tb = 0; tb < (1u << g) && feasible; ++tb) {
                        IndexVector jj = j + two_torsion_index(g, delta, tb);
                        auto bval = detail::relation_b(chi, i, jj, BX, BY, null_pt);
                        if (!bval) {
                            feasible = false;
                            break;
                        }
                        total = chi_j.eval_bits(tb) < 0 ? total - *bval : total + *bval;
                    }
                    if (feasible) {
                        uS.rep_slot(i, chi_i) = total / den;
                        done = true;
                        break;
                    }
                }
            }
            if (!done) fail(errc::degenerate_data, "chain_add: no usable index selection");
        }
    }
    return inverse_char_transform(uS);
}

// Naive recursive multiplication chain, m*x + y; reference for the ladder.
inline AffineThetaPoint chain_multadd_naive(u64 m, const AffineThetaPoint& xy, const AffineThetaPoint& x,
                                            const AffineThetaPoint& y, const ThetaNullPoint& null_pt) {
    if (m == 0) return y;
    if (m == 1) return xy;
    AffineThetaPoint prev2 = y, prev1 = xy;
    for (u64 k = 2; k <= m; ++k) {
        AffineThetaPoint cur = chain_add(prev1, x, prev2, null_pt);
        prev2 = std::move(prev1);
        prev1 = std::move(cur);
    }
    return prev1;
}

// Montgomery ladder maintaining (m'*x, (m'+1)*x, m'*x + y); one pass yields both
// ell*x + y and ell*x, which the pairing uses in lockstep.
inline std::pair<AffineThetaPoint, AffineThetaPoint> chain_multadd_pair(
    u64 m, const AffineThetaPoint& xy, const AffineThetaPoint& x, const AffineThetaPoint& y,
    const ThetaNullPoint& null_pt) {
    if (m == 0) return {y, null_pt.point()};
    if (m == 1) return {xy, x};
    AffineThetaPoint y_minus_x = chain_add(y, negate(x), xy, null_pt);
    const AffineThetaPoint& zero = null_pt.point();
    AffineThetaPoint xm = zero, xm1 = x, xym = y;
    int top = 63;
    while (!(m >> top & 1)) --top;
    for (int b = top; b >= 0; --b) {
        if (m >> b & 1) {
            AffineThetaPoint nxym = chain_add(xym, xm1, y_minus_x, null_pt);
            AffineThetaPoint nxm = chain_add(xm1, xm, x, null_pt);
            AffineThetaPoint nxm1 = chain_add(xm1, xm1, zero, null_pt);
            xm = std::move(nxm);
            xm1 = std::move(nxm1);
            xym = std::move(nxym);
        } else {
            AffineThetaPoint nxym = chain_add(xym, xm, y, null_pt);
            AffineThetaPoint nxm1 = chain_add(xm1, xm, x, null_pt);
            AffineThetaPoint nxm = chain_add(xm, xm, zero, null_pt);
            xm = std::move(nxm);
            xm1 = std::move(nxm1);
            xym = std::move(nxym);
        }
    }
    return {std::move(xym), std::move(xm)};
}

// The affine lift of m*x + y determined by the recursive chain definition.
inline AffineThetaPoint chain_multadd(u64 m, const AffineThetaPoint& xy, const AffineThetaPoint& x,
                                      const AffineThetaPoint& y, const ThetaNullPoint& null_pt) {
    return chain_multadd_pair(m, xy, x, y, null_pt).first;
}

// m*x as the lift chain_multadd(m, x, x, 0).
inline AffineThetaPoint chain_mult(u64 m, const AffineThetaPoint& x, const ThetaNullPoint& null_pt) {
    if (m == 0) return null_pt.point();
    if (m == 1) return x;
    return chain_multadd(m, x, x, null_pt.point(), null_pt);
}

// Ordinary addition without a difference point; result defined up to a scalar.
// Requires 4 | level (at level 2 use the Kummer operations).
inline AffineThetaPoint normal_add(const AffineThetaPoint& x, const AffineThetaPoint& y,
                                   const ThetaNullPoint& null_pt) {
    const ThetaContext* ctx = x.ctx();
    int g = x.g(), delta = x.level();
    if (delta % 4 != 0) fail(errc::level2_unsupported, "normal_add needs 4 | level");
    detail::SelfBCache BX(x), BY(y);
    auto chis = Character2::all(g);
    FieldElement inv2g = ctx->field()->from_int(1u << g).inv();
    // W_u = theta_u(x+y) * theta_{j0+s}(x-y); scan (j0, s) until some coordinate
    // of the unknown difference point is nonzero.
    for (const auto& j0 : enumerate_cached(g, delta)) {
        for (unsigned sb = 0; sb < (1u << g); ++sb) {
            IndexVector s = two_torsion_index(g, delta, sb);
            AffineThetaPoint W(ctx, delta);
            bool feasible = true, nonzero = false;
            for (const auto& u : enumerate_cached(g, delta)) {
                FieldElement acc = ctx->field()->zero();
                for (const auto& chi : chis) {
                    auto bval = detail::relation_b(chi, u - s, j0, BX, BY, null_pt);
                    if (!bval) {
                        feasible = false;
                        break;
                    }
                    acc = chi.eval_bits(sb) < 0 ? acc - *bval : acc + *bval;
                }
                if (!feasible) break;
                W.at(u) = acc * inv2g;
                if (!W.at(u).is_zero()) nonzero = true;
            }
            if (feasible && nonzero) return W;
        }
    }
    fail(errc::degenerate_data, "normal_add: all projections vanished");
}

}  // namespace theta
