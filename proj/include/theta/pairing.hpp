#pragma once

// The extended commutator pairing e'_ell on B[ell] (equal to the Weil pairing
// composed with the polarization), computed from four multiplication chains:
//
//   chain_mult(ell, P)            = lambdaP0 * 0,
//   chain_multadd(ell, P+Q, P, Q) = lambdaP1 * Q,
//   chain_mult(ell, Q)            = lambdaQ0 * 0,
//   chain_multadd(ell, P+Q, Q, P) = lambdaQ1 * P,
//
//   e'_ell(P, Q) = lambdaP1 * lambdaQ0 / (lambdaQ1 * lambdaP0).
//
// The value does not depend on the affine lifts.  The two chains m*P and m*P+Q
// run in lockstep inside one ladder, so one call produces both scalars of a row.

#include "isogeny.hpp"

namespace theta {

struct PairingValue {
    FieldElement value;
    u64 order_bound;  // ell; value^ell = 1
};

// e'_ell(P, Q) from lifts of P, Q and any lift of P+Q.
inline PairingValue commutator_pairing(const AffineThetaPoint& P, const AffineThetaPoint& Q,
                                       const AffineThetaPoint& PQ, const ThetaNullPoint& null_B) {
    const ThetaContext* ctx = null_B.ctx();
    u64 ell = (u64)ctx->ell();
    auto [lPQ, lP] = chain_multadd_pair(ell, PQ, P, Q, null_B);
    auto [lQP, lQ] = chain_multadd_pair(ell, PQ, Q, P, null_B);
    FieldElement lambdaP0 = detail::extract_scalar(null_B.point(), lP);
    FieldElement lambdaP1 = detail::extract_scalar(Q, lPQ);
    FieldElement lambdaQ0 = detail::extract_scalar(null_B.point(), lQ);
    FieldElement lambdaQ1 = detail::extract_scalar(P, lQP);
    FieldElement v = lambdaP1 * lambdaQ0 / (lambdaQ1 * lambdaP0);
    if (!(ctx->field()->pow(v, ell) == ctx->field()->one()))
        fail(errc::scalar_extraction_failure, "pairing value is not an ell-th root of unity");
    return {v, ell};
}

// All pairwise values for a family of ell-torsion points with chosen sum lifts.
// sums[i][j] must lift basis[i] + basis[j] for i < j.
inline std::vector<std::vector<PairingValue>> pairing_matrix(
    const std::vector<AffineThetaPoint>& basis,
    const std::vector<std::vector<AffineThetaPoint>>& sums, const ThetaNullPoint& null_B) {
    const ThetaContext* ctx = null_B.ctx();
    size_t k = basis.size();
    std::vector<std::vector<PairingValue>> M(
        k, std::vector<PairingValue>(k, PairingValue{ctx->field()->one(), (u64)ctx->ell()}));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) {
            PairingValue v = commutator_pairing(basis[i], basis[j], sums[i][j], null_B);
            M[i][j] = v;
            M[j][i] = PairingValue{v.value.inv(), v.order_bound};
        }
    return M;
}

// Discrete log of an ell-th root of unity base zeta_ell (ell is small).
inline u64 pairing_dlog(const ThetaContext& ctx, const FieldElement& v) {
    FieldElement cur = ctx.field()->one();
    for (u64 k = 0; k < (u64)ctx.ell(); ++k) {
        if (cur == v) return k;
        cur = cur * ctx.zeta_ell();
    }
    fail(errc::bad_input, "value is not a power of zeta_ell");
}

// Level 2: the symmetric value e'_ell(P,Q) + e'_ell(P,Q)^{-1}, independent of the
// sign choices of +-P, +-Q (one square root through kummer_add_pair).
inline FieldElement kummer_symmetric_pairing(const AffineThetaPoint& P, const AffineThetaPoint& Q,
                                             const ThetaNullPoint& null_B) {
    if (P.level() != 2) fail(errc::bad_input, "kummer_symmetric_pairing works at level 2");
    KummerPair pr = kummer_add_pair(P, Q, null_B);
    PairingValue e = commutator_pairing(P, Q, pr.first, null_B);
    return e.value + e.value.inv();
}

}  // namespace theta
