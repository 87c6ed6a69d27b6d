#pragma once

// Everything attached to a fixed compatible isogeny pair (A, ell*n) -> (B, n):
// coordinate projections, point compression/decompression, evaluation of the
// contragredient isogeny, and kernel membership.
//
// Index convention (shared by all modules): with gcd(ell, n) = 1, Z(n) embeds in
// Z(ell*n) as ell*Z(n) and Z(ell) as n*Z(ell); coordinates assemble via
// theta_{n*i + ell*j}(x) = (pi_i(x))_j.

#include <map>

#include "chain.hpp"
#include "kummer.hpp"

namespace theta {

// pi: subsample at the embedded Z(n).
inline AffineThetaPoint project(const AffineThetaPoint& x) {
    const ThetaContext* ctx = x.ctx();
    int g = x.g(), n = ctx->n(), ell = ctx->ell();
    if (x.level() != ctx->level_ln()) fail(errc::bad_input, "project expects a level ell*n point");
    AffineThetaPoint out(ctx, n);
    for (const auto& j : enumerate(g, n)) out.at(j) = x.at(j.embedded(ctx->level_ln(), ell));
    return out;
}

// pi_i for i in Z(ell): coordinate j is x at n*i + ell*j.
inline AffineThetaPoint project_i(const AffineThetaPoint& x, const IndexVector& i) {
    const ThetaContext* ctx = x.ctx();
    int g = x.g(), n = ctx->n(), ell = ctx->ell(), ln = ctx->level_ln();
    AffineThetaPoint out(ctx, n);
    IndexVector ni = i.embedded(ln, n);
    for (const auto& j : enumerate(g, n)) out.at(j) = x.at(ni + j.embedded(ln, ell));
    return out;
}

// The level-n blocks pi_i(x), i in the chain basis.
struct CompressedPoint {
    std::vector<IndexVector> basis;        // elements of Z(ell) (reduced mod ell)
    std::vector<AffineThetaPoint> blocks;  // same order; block 0 is pi(x)
};

inline CompressedPoint compress(const AffineThetaPoint& x) {
    const ThetaContext* ctx = x.ctx();
    CompressedPoint out;
    for (const auto& s : chain_basis(*ctx)) {
        IndexVector i(ctx->g(), ctx->ell());
        for (int k = 0; k < ctx->g(); ++k) i.set(k, s[k] / ctx->n());
        out.basis.push_back(i);
        out.blocks.push_back(project_i(x, i));
    }
    return out;
}

// The moduli datum of the isogeny: the level-ell*n null point, its level-n
// projection, and the kernel lifts R_i = pi_i(0_A).
class IsogenyData {
  public:
    IsogenyData(ThetaNullPoint null_A)
        : null_A_(std::move(null_A)), null_B_(project(null_A_.point())) {
        const ThetaContext* ctx = null_A_.ctx();
        if (null_A_.level() != ctx->level_ln()) fail(errc::bad_input, "null_A must have level ell*n");
        for (const auto& i : enumerate(ctx->g(), ctx->ell()))
            R_.emplace(i.rank(), project_i(null_A_.point(), i));
    }

    const ThetaContext* ctx() const { return null_A_.ctx(); }
    const ThetaNullPoint& null_A() const { return null_A_; }
    const ThetaNullPoint& null_B() const { return null_B_; }
    const AffineThetaPoint& R(const IndexVector& i) const { return R_.at(i.reduced(ctx()->ell()).rank()); }

    // Construction invariants: R_0 = 0_B and the chain closure
    // R_{i+j} = chain_add(R_i, R_j, R_{i-j}).
    bool verify_invariants() const {
        const ThetaContext* c = ctx();
        IndexVector z(c->g(), c->ell());
        if (!(R(z) == null_B_.point())) return false;
        for (const auto& i : enumerate(c->g(), c->ell()))
            for (const auto& j : enumerate(c->g(), c->ell())) {
                AffineThetaPoint s = chain_add(R(i), R(j), R(i - j), null_B_);
                if (!(s == R(i + j))) return false;
            }
        return true;
    }

  private:
    ThetaNullPoint null_A_;
    ThetaNullPoint null_B_;
    std::map<size_t, AffineThetaPoint> R_;
};

// Rebuild all pi_i(x) blocks from the chain-basis blocks by
// pi_{i+j}(x) = chain_add(pi_i(x), R_j, pi_{i-j}(x)), then reassemble the
// level-ell*n coordinates.  O(ell^g) chain additions.
inline AffineThetaPoint decompress(const CompressedPoint& cp, const IsogenyData& iso,
                                   bool self_check = false) {
    const ThetaContext* ctx = iso.ctx();
    int g = ctx->g(), ell = ctx->ell(), n = ctx->n(), ln = ctx->level_ln();
    std::map<size_t, AffineThetaPoint> blk;
    for (size_t k = 0; k < cp.basis.size(); ++k) blk.emplace(cp.basis[k].rank(), cp.blocks[k]);
    auto all = enumerate(g, ell);
    // expand: repeatedly find i, j known with i+j unknown and i-j known
    bool progress = true;
    while (blk.size() < all.size() && progress) {
        progress = false;
        for (const auto& i_ : all) {
            if (!blk.count(i_.rank())) continue;
            for (const auto& j_ : all) {
                if (!blk.count(j_.rank()) || !blk.count((i_ - j_).rank())) continue;
                IndexVector t = i_ + j_;
                if (blk.count(t.rank())) continue;
                blk.emplace(t.rank(),
                            chain_add(blk.at(i_.rank()), iso.R(j_), blk.at((i_ - j_).rank()),
                                      iso.null_B()));
                progress = true;
            }
        }
    }
    if (blk.size() != all.size()) fail(errc::bad_input, "chain basis does not generate Z(ell)");
    if (self_check) {
        for (const auto& i_ : all)
            for (const auto& j_ : all) {
                AffineThetaPoint s =
                    chain_add(blk.at(i_.rank()), iso.R(j_), blk.at((i_ - j_).rank()), iso.null_B());
                if (!(s == blk.at((i_ + j_).rank())))
                    fail(errc::inconsistent_blocks, "decompression closure failed at " + i_.str() +
                                                        "+" + j_.str());
            }
    }
    AffineThetaPoint out(ctx, ln);
    for (const auto& i_ : all) {
        const AffineThetaPoint& b = blk.at(i_.rank());
        IndexVector ni = i_.embedded(ln, n);
        for (const auto& j_ : enumerate(g, n)) out.at(ni + j_.embedded(ln, ell)) = b.at(j_);
    }
    return out;
}

namespace detail {

// lambda with b = lambda * a, verified on every coordinate.
inline FieldElement extract_scalar(const AffineThetaPoint& a, const AffineThetaPoint& b) {
    auto cmp = projective_eq(a, b);
    if (!cmp.equal || cmp.lambda.is_zero())
        fail(errc::scalar_extraction_failure, "points are not proportional");
    return cmp.lambda;
}

// A lift of y + R_i: normal_add at 4 | n; at n = 2 the Kummer path (one square
// root for the first kernel direction, compatible additions for the rest).
class KernelTranslates {
  public:
    KernelTranslates(const AffineThetaPoint& y, const IsogenyData& iso) : y_(&y), iso_(&iso) {}

    const AffineThetaPoint& get(const IndexVector& i) {
        auto it = cache_.find(i.rank());
        if (it != cache_.end()) return it->second;
        AffineThetaPoint v = compute(i);
        return cache_.emplace(i.rank(), std::move(v)).first->second;
    }

  private:
    const AffineThetaPoint* y_;
    const IsogenyData* iso_;
    std::map<size_t, AffineThetaPoint> cache_;

    AffineThetaPoint compute(const IndexVector& i) {
        const ThetaContext* ctx = iso_->ctx();
        if (i.is_zero()) return *y_;
        if (ctx->n() % 4 == 0) return normal_add(*y_, iso_->R(i), iso_->null_B());
        // n == 2: first direction by one square root, consistent choice after
        IndexVector d1(ctx->g(), ctx->ell());
        d1.set(0, 1);
        if (!first_) {
            IndexVector anchor = anchor_index();
            KummerPair pr = kummer_add_pair(*y_, iso_->R(anchor), iso_->null_B());
            first_ = std::make_pair(anchor, pr.first);
            cache_.emplace(anchor.rank(), pr.first);
        }
        if (i == first_->first) return cache_.at(i.rank());
        // y + R_i from y + R_a and R_a + R_i = R_{a+i} (known from null_A)
        const IndexVector& a = first_->first;
        return kummer_compatible_add(*y_, iso_->R(a), iso_->R(i), first_->second, iso_->R(a + i),
                                     iso_->null_B());
    }

    IndexVector anchor_index() const {
        IndexVector d1(iso_->ctx()->g(), iso_->ctx()->ell());
        d1.set(0, 1);
        return d1;
    }

    std::optional<std::pair<IndexVector, AffineThetaPoint>> first_;
};

}  // namespace detail

// The compressed image of y under the contragredient isogeny pi-hat: B -> A.
// For each basis index i: with y_i any lift of y + R_i,
//   lambda_i^ell from  y = lambda_i^ell * chain_multadd(ell, y_i, R_i, y),
//   block_i = lambda_i^ell * chain_multadd(ell, y_i, y, R_i).
// The output does not depend on the lift choices (homogeneity).
inline CompressedPoint isogeny_image(const AffineThetaPoint& y, const IsogenyData& iso) {
    const ThetaContext* ctx = iso.ctx();
    u64 ell = (u64)ctx->ell();
    detail::KernelTranslates translates(y, iso);
    CompressedPoint out;
    for (const auto& s : chain_basis(*ctx)) {
        IndexVector i(ctx->g(), ctx->ell());
        for (int k = 0; k < ctx->g(); ++k) i.set(k, s[k] / ctx->n());
        out.basis.push_back(i);
        if (i.is_zero()) {
            // pi_0(pi-hat(y)) = ell * y
            out.blocks.push_back(chain_mult(ell, y, iso.null_B()));
            continue;
        }
        const AffineThetaPoint& yi = translates.get(i);
        AffineThetaPoint back = chain_multadd(ell, yi, iso.R(i), y, iso.null_B());
        FieldElement lambda_ell = detail::extract_scalar(back, y);
        AffineThetaPoint fwd = chain_multadd(ell, yi, y, iso.R(i), iso.null_B());
        out.blocks.push_back(fwd.scaled(lambda_ell));
    }
    return out;
}

// Membership of the ell-torsion point y in the kernel {R_i} of pi-hat.
// With c from chain_mult(ell, y) = c * 0_B, alpha_i, beta_i from
//   chain_multadd(ell, y_i, y, R_i) = alpha_i R_i,
//   chain_multadd(ell, y_i, R_i, y) = beta_i  y,
// the ratio alpha_i/(beta_i c) equals the extended commutator pairing
// e'_ell(y, R_i) and is independent of the lift of y; membership is the ratio
// being 1 for all basis directions.
struct KernelCheck {
    bool member;
    std::vector<FieldElement> pairings;  // e'_ell(y, R_{d_k}) per direction
};

inline KernelCheck kernel_contains(const AffineThetaPoint& y, const IsogenyData& iso) {
    const ThetaContext* ctx = iso.ctx();
    u64 ell = (u64)ctx->ell();
    AffineThetaPoint ly = chain_mult(ell, y, iso.null_B());
    FieldElement c = detail::extract_scalar(iso.null_B().point(), ly);
    detail::KernelTranslates translates(y, iso);
    KernelCheck out{true, {}};
    for (int k = 0; k < ctx->g(); ++k) {
        IndexVector i(ctx->g(), ctx->ell());
        i.set(k, 1);
        const AffineThetaPoint& yi = translates.get(i);
        AffineThetaPoint a = chain_multadd(ell, yi, y, iso.R(i), iso.null_B());
        FieldElement alpha = detail::extract_scalar(iso.R(i), a);
        AffineThetaPoint b = chain_multadd(ell, yi, iso.R(i), y, iso.null_B());
        FieldElement beta = detail::extract_scalar(y, b);
        FieldElement ratio = alpha / (beta * c);
        if (!(ratio == ctx->field()->one())) out.member = false;
        out.pairings.push_back(ratio);
    }
    return out;
}

}  // namespace theta
