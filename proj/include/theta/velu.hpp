#pragma once

// Construction of level-ell*n theta null points from an isotropic kernel
// ("Velu-like" reconstruction), true ell-torsion lifts, enumeration of all
// modular points above a level-n null point, the modular correspondence, and
// the desk-scale brute-force torsion search.

#include <algorithm>
#include <functional>

#include "pairing.hpp"

namespace theta {

// An affine lift T of an ell-torsion point with
// chain_mult(ell'+1, T) = negate(chain_mult(ell', T)), ell = 2*ell'+1.
// Stable under scaling by exact ell-th roots of unity only.
struct TrueTorsionLift {
    AffineThetaPoint point;
    u64 order;

    bool verify(const ThetaNullPoint& null_B) const {
        u64 lp = (order - 1) / 2;
        return chain_mult(lp + 1, point, null_B) == negate(chain_mult(lp, point, null_B));
    }
};

// Lift any affine representative of an ell-torsion point to a true lift:
// with beta = chain_mult(ell', T'), gamma = chain_mult(ell'+1, T'),
// lambda^ell = negate(beta)/gamma and the output is lambda * T'.
// root_twist, when given, multiplies the result by an exact ell-th root of
// unity (all such twists are valid true lifts).
inline TrueTorsionLift true_lift(const AffineThetaPoint& T, const ThetaNullPoint& null_B,
                                 const FieldElement* root_twist = nullptr) {
    const ThetaContext* ctx = null_B.ctx();
    u64 ell = (u64)ctx->ell();
    if (ell < 3) fail(errc::bad_input, "true_lift needs ell >= 3");
    u64 lp = (ell - 1) / 2;
    AffineThetaPoint beta = chain_mult(lp, T, null_B);
    AffineThetaPoint gamma = chain_mult(lp + 1, T, null_B);
    auto cmp = projective_eq(gamma, negate(beta));
    if (!cmp.equal || cmp.lambda.is_zero())
        fail(errc::not_torsion, "point is not of ell-torsion (scalar extraction failed)");
    FieldElement lambda = ctx->field()->kth_root(cmp.lambda, ell);
    AffineThetaPoint out = T.scaled(lambda);
    if (root_twist) out = out.scaled(*root_twist);
    TrueTorsionLift lift{std::move(out), ell};
    if (!lift.verify(null_B)) fail(errc::not_torsion, "true-lift invariant failed after scaling");
    return lift;
}

// Kernel of the isogeny to reconstruct: projective level-n points of order ell
// generating a rank-g isotropic subgroup, plus chosen sums T_{d_i} + T_{d_j}.
struct KernelSpec {
    std::vector<AffineThetaPoint> basis;                    // size g
    std::map<std::pair<int, int>, AffineThetaPoint> sums;   // (i<j) -> T_i + T_j

    const AffineThetaPoint& sum(int i, int j) const { return sums.at({std::min(i, j), std::max(i, j)}); }
};

// Fill the pair sums of a kernel basis: normal_add when 4 | n, the Kummer path
// (one square root, then compatible additions) at n = 2.
inline KernelSpec make_kernel_spec(std::vector<AffineThetaPoint> basis, const ThetaNullPoint& null_B) {
    KernelSpec ks;
    ks.basis = std::move(basis);
    int g = null_B.ctx()->g();
    if ((int)ks.basis.size() != g) fail(errc::bad_input, "kernel basis must have g points");
    if (g < 2) return ks;
    if (null_B.level() % 4 == 0) {
        for (int i = 0; i < g; ++i)
            for (int j = i + 1; j < g; ++j)
                ks.sums[{i, j}] = normal_add(ks.basis[i], ks.basis[j], null_B);
    } else {
        ks.sums[{0, 1}] = kummer_add_pair(ks.basis[0], ks.basis[1], null_B).first;
        for (int j = 2; j < g; ++j)
            ks.sums[{0, j}] = kummer_add_pair(ks.basis[0], ks.basis[j], null_B).first;
        for (int i = 1; i < g; ++i)
            for (int j = i + 1; j < g; ++j)
                ks.sums[{i, j}] = kummer_compatible_add(ks.basis[i], ks.basis[0], ks.basis[j],
                                                        ks.sums.at({0, i}), ks.sums.at({0, j}), null_B);
    }
    return ks;
}

namespace detail {

// Expand chain-basis blocks of the null point itself into the full R-table:
// R_{i+j} = chain_add(R_i, R_j, R_{i-j}) with offsets taken from the same table.
inline std::map<size_t, AffineThetaPoint> expand_null_blocks(
    const std::vector<IndexVector>& basis, const std::vector<AffineThetaPoint>& blocks,
    const ThetaNullPoint& null_B) {
    const ThetaContext* ctx = null_B.ctx();
    int g = ctx->g(), ell = ctx->ell();
    std::map<size_t, AffineThetaPoint> blk;
    for (size_t k = 0; k < basis.size(); ++k) blk.emplace(basis[k].rank(), blocks[k]);
    auto all = enumerate(g, ell);
    bool progress = true;
    while (blk.size() < all.size() && progress) {
        progress = false;
        for (const auto& i : all) {
            if (!blk.count(i.rank())) continue;
            for (const auto& j : all) {
                if (!blk.count(j.rank()) || !blk.count((i - j).rank())) continue;
                IndexVector t = i + j;
                if (blk.count(t.rank())) continue;
                blk.emplace(t.rank(),
                            chain_add(blk.at(i.rank()), blk.at(j.rank()), blk.at((i - j).rank()),
                                      null_B));
                progress = true;
            }
        }
    }
    if (blk.size() != all.size()) fail(errc::bad_input, "chain basis does not generate Z(ell)");
    return blk;
}

inline AffineThetaPoint assemble_from_blocks(const std::map<size_t, AffineThetaPoint>& blk,
                                             const ThetaContext* ctx) {
    int g = ctx->g(), n = ctx->n(), ell = ctx->ell(), ln = ctx->level_ln();
    AffineThetaPoint out(ctx, ln);
    for (const auto& i : enumerate(g, ell)) {
        const AffineThetaPoint& b = blk.at(i.rank());
        IndexVector ni = i.embedded(ln, n);
        for (const auto& j : enumerate(g, n)) out.at(ni + j.embedded(ln, ell)) = b.at(j);
    }
    return out;
}

}  // namespace detail

struct VeluResult {
    IsogenyData iso;
    std::vector<FieldElement> root_choices;  // lambda per chain-basis element (after 0)
};

// Reconstruct the level-ell*n null point from an isotropic kernel.  Every choice
// of the g(g+1)/2 ell-th roots (steerable by root_twists, one exact ell-th root
// of unity per non-zero chain-basis element) yields a valid null point of the
// same quotient variety.
inline VeluResult velu_reconstruct(const KernelSpec& K, const ThetaNullPoint& null_B,
                                   const std::vector<FieldElement>* root_twists = nullptr,
                                   bool check_isotropy = true) {
    const ThetaContext* ctx = null_B.ctx();
    int g = ctx->g();
    if (check_isotropy && g > 1) {
        for (int i = 0; i < g; ++i)
            for (int j = i + 1; j < g; ++j) {
                PairingValue e = commutator_pairing(K.basis[i], K.basis[j], K.sum(i, j), null_B);
                if (!(e.value == ctx->field()->one()))
                    fail(errc::isotropy_violation, "kernel basis is not isotropic for e'_ell");
            }
    }
    std::vector<IndexVector> basis;
    std::vector<AffineThetaPoint> blocks;
    std::vector<FieldElement> roots;
    size_t twist_at = 0;
    auto next_twist = [&]() -> const FieldElement* {
        if (!root_twists || twist_at >= root_twists->size()) return nullptr;
        return &(*root_twists)[twist_at++];
    };
    // chain basis of Z(ell): 0, d_i, d_i + d_j
    IndexVector zero(g, ctx->ell());
    basis.push_back(zero);
    blocks.push_back(null_B.point());
    auto add_block = [&](IndexVector idx, const AffineThetaPoint& pt) {
        const FieldElement* tw = next_twist();
        TrueTorsionLift lift = true_lift(pt, null_B, tw);
        basis.push_back(idx);
        blocks.push_back(lift.point);
        roots.push_back(detail::extract_scalar(pt, lift.point));
    };
    for (int i = 0; i < g; ++i) {
        IndexVector d(g, ctx->ell());
        d.set(i, 1);
        add_block(d, K.basis[i]);
    }
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j) {
            IndexVector d(g, ctx->ell());
            d.set(i, 1);
            d.set(j, 1);
            add_block(d, K.sum(i, j));
        }
    auto blk = detail::expand_null_blocks(basis, blocks, null_B);
    AffineThetaPoint null_A = detail::assemble_from_blocks(blk, ctx);
    VeluResult out{IsogenyData(ThetaNullPoint(std::move(null_A))), std::move(roots)};
    if (!(out.iso.null_B().point() == null_B.point()))
        fail(errc::inconsistent_blocks, "reconstructed null point does not project to null_B");
    return out;
}

// The modular correspondence: a level-ell*n null point maps to the pair of
// level-n null points (b, c) with b_i = a_{ell*i} and c_i = sum_j a_{ell*i + n*j}.
struct ModularImage {
    AffineThetaPoint b, c;
};

inline ModularImage modular_phi(const AffineThetaPoint& null_A) {
    const ThetaContext* ctx = null_A.ctx();
    int g = ctx->g(), n = ctx->n(), ell = ctx->ell(), ln = ctx->level_ln();
    ModularImage out{AffineThetaPoint(ctx, n), AffineThetaPoint(ctx, n)};
    for (const auto& i : enumerate(g, n)) {
        IndexVector li = i.embedded(ln, ell);
        out.b.at(i) = null_A.at(li);
        FieldElement s = ctx->field()->zero();
        for (const auto& j : enumerate(g, ell)) s = s + null_A.at(li + j.embedded(ln, n));
        out.c.at(i) = s;
    }
    return out;
}

// Desk-scale brute-force search: all projective level-n points of ell-torsion
// (canonical representatives, first nonzero coordinate = 1).  The variety
// filter applies when 4 | n; at n = 2 the projective order test alone decides.
inline std::vector<AffineThetaPoint> brute_torsion_search(const ThetaNullPoint& null_B, u64 ell,
                                                          u64 budget = 20'000'000) {
    const ThetaContext* ctx = null_B.ctx();
    const FieldContext* F = ctx->field();
    int g = ctx->g(), n = ctx->n();
    size_t N = ctx->coord_count(n);
    // candidate count = (q^N - 1)/(q - 1)
    long double est = 0, qd = (long double)F->order();
    for (size_t k = 0; k < N; ++k) est = est * qd + 1;
    if (est > (long double)budget) fail(errc::budget_exceeded, "projective enumeration above budget");
    bool check_variety = n % 4 == 0;
    std::vector<AffineThetaPoint> found;
    u64 q = F->order();
    for (size_t lead = 0; lead < N; ++lead) {
        size_t free_coords = N - lead - 1;
        u64 combos = 1;
        bool overflow = false;
        for (size_t k = 0; k < free_coords; ++k) {
            if (combos > budget / (q ? q : 1)) {
                overflow = true;
                break;
            }
            combos *= q;
        }
        if (overflow) fail(errc::budget_exceeded, "projective enumeration above budget");
        AffineThetaPoint P(ctx, n);
        P[lead] = F->one();
        for (u64 r = 0; r < combos; ++r) {
            u64 rr = r;
            for (size_t k = lead + 1; k < N; ++k) {
                P[k] = F->from_rank(rr % q);
                rr /= q;
            }
            try {
                if (check_variety && !validate_on_variety(P, null_B)) continue;
                AffineThetaPoint lP = chain_mult(ell, P, null_B);
                if (lP.is_zero_vector()) continue;
                if (!projective_eq(null_B.point(), lP).equal) continue;
            } catch (const Error&) {
                continue;  // off-variety garbage can hit degenerate divisions
            }
            found.push_back(P);
        }
    }
    return found;
}

// True lifts for every element of the span of a 2g-point torsion basis,
// indexed by exponent vectors in [0, ell)^{2g}.  Needs true lifts of the basis
// and of all pairwise sums; everything else comes from chain additions (which
// preserve trueness).
class TorsionLiftTable {
  public:
    TorsionLiftTable(const std::vector<AffineThetaPoint>& basis_points,
                     const std::vector<std::vector<AffineThetaPoint>>& sum_points,
                     const ThetaNullPoint& null_B)
        : ctx_(null_B.ctx()), rank_((int)basis_points.size()), ell_(ctx_->ell()) {
        std::vector<IndexVector> keys;
        std::vector<AffineThetaPoint> vals;
        IndexVector zero(rank_, ell_);
        keys.push_back(zero);
        vals.push_back(null_B.point());
        for (int i = 0; i < rank_; ++i) {
            IndexVector e(rank_, ell_);
            e.set(i, 1);
            keys.push_back(e);
            vals.push_back(true_lift(basis_points[i], null_B).point);
        }
        for (int i = 0; i < rank_; ++i)
            for (int j = i + 1; j < rank_; ++j) {
                IndexVector e(rank_, ell_);
                e.set(i, 1);
                e.set(j, 1);
                keys.push_back(e);
                vals.push_back(true_lift(sum_points[i][j], null_B).point);
            }
        // mod-ell chain closure over the exponent group (Z/ell)^{2g}
        std::map<size_t, AffineThetaPoint> tab;
        for (size_t k = 0; k < keys.size(); ++k) tab.emplace(keys[k].rank(), vals[k]);
        auto all = enumerate(rank_, ell_);
        bool progress = true;
        while (tab.size() < all.size() && progress) {
            progress = false;
            for (const auto& i : all) {
                if (!tab.count(i.rank())) continue;
                for (const auto& j : all) {
                    if (!tab.count(j.rank()) || !tab.count((i - j).rank())) continue;
                    IndexVector t = i + j;
                    if (tab.count(t.rank())) continue;
                    tab.emplace(t.rank(), chain_add(tab.at(i.rank()), tab.at(j.rank()),
                                                    tab.at((i - j).rank()), null_B));
                    progress = true;
                }
            }
        }
        if (tab.size() != all.size()) fail(errc::not_spanning, "basis does not span under chain closure");
        table_ = std::move(tab);
    }

    int rank() const { return rank_; }
    const AffineThetaPoint& at(const IndexVector& e) const { return table_.at(e.rank()); }

  private:
    const ThetaContext* ctx_;
    int rank_;
    int ell_;
    std::map<size_t, AffineThetaPoint> table_;
};

struct ModularPoint {
    std::vector<IndexVector> kernel_generators;  // exponent vectors over the input basis
    VeluResult velu;
};

// All modular points above null_B: one Velu reconstruction per maximal
// isotropic subgroup of B[ell].  The 2g input points must span B[ell]
// (checked through non-degeneracy of the pairing matrix).
inline std::vector<ModularPoint> all_modular_points(const std::vector<AffineThetaPoint>& torsion_basis,
                                                    const ThetaNullPoint& null_B) {
    const ThetaContext* ctx = null_B.ctx();
    int g = ctx->g(), ell = ctx->ell();
    int r = 2 * g;
    if ((int)torsion_basis.size() != r) fail(errc::bad_input, "need 2g torsion points");
    for (int q = 2; q < ell; ++q)
        if (ell % q == 0) fail(errc::bad_input, "modular enumeration needs prime ell");
    // exact projective order ell
    for (const auto& T : torsion_basis) {
        if (projective_eq(null_B.point(), T).equal) fail(errc::not_torsion, "basis point is zero");
        AffineThetaPoint lT = chain_mult((u64)ell, T, null_B);
        if (!projective_eq(null_B.point(), lT).equal) fail(errc::not_torsion, "basis point order != ell");
    }
    // pairwise sums (for the lift table and the pairing matrix)
    std::vector<std::vector<AffineThetaPoint>> sums(r, std::vector<AffineThetaPoint>(r));
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            if (null_B.level() % 4 == 0)
                sums[i][j] = normal_add(torsion_basis[i], torsion_basis[j], null_B);
            else
                sums[i][j] = kummer_add_pair(torsion_basis[i], torsion_basis[j], null_B).first;
        }
    TorsionLiftTable table(torsion_basis, sums, null_B);
    // pairing exponent matrix over F_ell
    auto M = pairing_matrix(torsion_basis, sums, null_B);
    std::vector<std::vector<long long>> E(r, std::vector<long long>(r, 0));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (i != j) E[i][j] = (long long)pairing_dlog(*ctx, M[i][j].value);
    // non-degeneracy check mod ell (ell odd, possibly prime power at desk scale)
    {
        std::vector<std::vector<long long>> A = E;
        long long det = 1;
        int sz = r;
        for (int c = 0; c < sz; ++c) {
            int piv = -1;
            for (int rr = c; rr < sz; ++rr)
                if (A[rr][c] % ell != 0) {
                    piv = rr;
                    break;
                }
            if (piv < 0) {
                det = 0;
                break;
            }
            std::swap(A[c], A[piv]);
            long long inv = 0;
            for (long long t = 1; t < ell; ++t)
                if ((A[c][c] % ell + ell) % ell * t % ell == 1) {
                    inv = t;
                    break;
                }
            for (int rr = c + 1; rr < sz; ++rr) {
                long long f = ((A[rr][c] % ell + ell) % ell) * inv % ell;
                for (int cc = c; cc < sz; ++cc)
                    A[rr][cc] = ((A[rr][cc] - f * A[c][cc]) % ell + ell) % ell;
            }
        }
        if (det == 0) fail(errc::not_spanning, "pairing matrix degenerate: points do not span B[ell]");
    }
    // enumerate rank-g subgroups of (Z/ell)^{2g} by reduced row-echelon normal
    // form (pivot columns c_1 < ... < c_g; free entries right of each pivot at
    // non-pivot columns), keep the isotropic ones
    std::vector<ModularPoint> out;
    std::vector<int> pivots;
    std::function<void(int, int)> choose_pivots = [&](int start, int need) {
        if (need == 0) {
            // free positions per row
            std::vector<std::vector<int>> freepos(g);
            for (int a = 0; a < g; ++a)
                for (int j = pivots[a] + 1; j < r; ++j)
                    if (std::find(pivots.begin(), pivots.end(), j) == pivots.end())
                        freepos[a].push_back(j);
            size_t total_free = 0;
            for (auto& f : freepos) total_free += f.size();
            u64 total = 1;
            for (size_t k = 0; k < total_free; ++k) total *= (u64)ell;
            for (u64 v = 0; v < total; ++v) {
                std::vector<IndexVector> gens(g, IndexVector(r, ell));
                u64 vv = v;
                for (int a = 0; a < g; ++a) {
                    gens[a].set(pivots[a], 1);
                    for (int j : freepos[a]) {
                        gens[a].set(j, (long long)(vv % ell));
                        vv /= ell;
                    }
                }
                bool iso = true;
                for (int a = 0; a < g && iso; ++a)
                    for (int b = a + 1; b < g && iso; ++b) {
                        long long s = 0;
                        for (int i = 0; i < r; ++i)
                            for (int j = 0; j < r; ++j) s += (long long)gens[a][i] * E[i][j] * gens[b][j];
                        if ((s % ell + ell) % ell != 0) iso = false;
                    }
                if (!iso) continue;
                KernelSpec ks;
                for (int a = 0; a < g; ++a) ks.basis.push_back(table.at(gens[a]));
                for (int a = 0; a < g; ++a)
                    for (int b = a + 1; b < g; ++b) ks.sums[{a, b}] = table.at(gens[a] + gens[b]);
                out.push_back(ModularPoint{gens, velu_reconstruct(ks, null_B, nullptr, false)});
            }
            return;
        }
        for (int c = start; c + need <= r; ++c) {
            pivots.push_back(c);
            choose_pivots(c + 1, need - 1);
            pivots.pop_back();
        }
    };
    choose_pivots(0, g);
    return out;
}

}  // namespace theta
