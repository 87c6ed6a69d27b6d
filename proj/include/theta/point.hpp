#pragma once

// Points on the affine cone in theta coordinates, the Heisenberg action, and the
// character transforms used by the chain arithmetic.
//
// A point of level delta is the dense coordinate vector (theta_i)_{i in Z(delta)^g}
// in lexicographic index order.  The dual table u_{(i,chi)} = sum_{t in Z(2)^g}
// chi(t) theta_{i+t} satisfies u_{(i+t,chi)} = chi(t) u_{(i,chi)}, so only one
// representative per Z(2)-coset is stored (delta^g values in total).

#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "index.hpp"

namespace theta {

class AffineThetaPoint {
  public:
    AffineThetaPoint() : ctx_(nullptr), level_(0) {}
    AffineThetaPoint(const ThetaContext* ctx, int level)
        : ctx_(ctx), level_(level), c_(ctx->coord_count(level), ctx->field()->zero()) {
        if (level < 2 || level % 2) fail(errc::bad_input, "point level must be even");
    }
    AffineThetaPoint(const ThetaContext* ctx, int level, std::vector<FieldElement> coords)
        : ctx_(ctx), level_(level), c_(std::move(coords)) {
        if (c_.size() != ctx->coord_count(level)) fail(errc::bad_input, "coordinate count mismatch");
    }

    const ThetaContext* ctx() const { return ctx_; }
    int level() const { return level_; }
    int g() const { return ctx_->g(); }
    size_t size() const { return c_.size(); }

    const FieldElement& at(const IndexVector& i) const { return c_[i.rank()]; }
    FieldElement& at(const IndexVector& i) { return c_[i.rank()]; }
    const FieldElement& operator[](size_t r) const { return c_[r]; }
    FieldElement& operator[](size_t r) { return c_[r]; }
    const std::vector<FieldElement>& coords() const { return c_; }

    bool is_zero_vector() const {
        for (const auto& v : c_)
            if (!v.is_zero()) return false;
        return true;
    }

    bool operator==(const AffineThetaPoint& o) const {
        return ctx_ == o.ctx_ && level_ == o.level_ && c_ == o.c_;
    }
    bool operator!=(const AffineThetaPoint& o) const { return !(*this == o); }

    AffineThetaPoint scaled(const FieldElement& lambda) const {
        AffineThetaPoint r = *this;
        for (auto& v : r.c_) v = v * lambda;
        return r;
    }

    // Scale so the first nonzero coordinate (in index order) is 1.
    AffineThetaPoint projective_normalized() const {
        for (const auto& v : c_)
            if (!v.is_zero()) return scaled(v.inv());
        fail(errc::bad_input, "zero coordinate vector");
    }

  private:
    const ThetaContext* ctx_;
    int level_;
    std::vector<FieldElement> c_;
};

// (alpha, i, j) in the Heisenberg group of level delta; alpha != 0.
struct HeisenbergElement {
    FieldElement alpha;
    IndexVector i;  // translation part
    IndexVector j;  // dual part
    int level;

    HeisenbergElement(FieldElement a, IndexVector iv, IndexVector jv)
        : alpha(std::move(a)), i(iv), j(jv), level(iv.modulus()) {
        if (alpha.is_zero()) fail(errc::bad_input, "Heisenberg scalar must be nonzero");
    }

    // Composition with o acting first: acting by this*o equals acting by o then
    // by this; the scalar picks up the cross term e_c(i_o, j_this).
    HeisenbergElement compose(const ThetaContext& ctx, const HeisenbergElement& o) const {
        return HeisenbergElement(alpha * o.alpha * ctx.e_c(o.i, j, level), i + o.i, j + o.j);
    }
};

// (h.x)_u = alpha * e_c(-u-i, j) * x_{u+i}.
inline AffineThetaPoint heisenberg_act(const ThetaContext& ctx, const HeisenbergElement& h,
                                       const AffineThetaPoint& x) {
    if (h.level != x.level()) fail(errc::context_mismatch, "level mismatch in Heisenberg action");
    int delta = x.level();
    AffineThetaPoint r(x.ctx(), delta);
    for (const auto& u : enumerate_cached(x.g(), delta))
        r.at(u) = h.alpha * ctx.e_c(-(u + h.i), h.j, delta) * x.at(u + h.i);
    return r;
}

// -x has coordinate u equal to x at -u.
inline AffineThetaPoint negate(const AffineThetaPoint& x) {
    AffineThetaPoint r(x.ctx(), x.level());
    for (const auto& u : enumerate_cached(x.g(), x.level())) r.at(u) = x.at(-u);
    return r;
}

// Projective comparison; returns the scalar lambda with y = lambda * x when equal.
struct ProjectiveCmp {
    bool equal = false;
    FieldElement lambda;
};

inline ProjectiveCmp projective_eq(const AffineThetaPoint& x, const AffineThetaPoint& y) {
    if (x.ctx() != y.ctx() || x.level() != y.level())
        fail(errc::context_mismatch, "projective comparison across levels");
    if (x.is_zero_vector() || y.is_zero_vector()) fail(errc::bad_input, "BothZero: zero vector compared");
    ProjectiveCmp r;
    for (size_t k = 0; k < x.size(); ++k) {
        if (!x[k].is_zero()) {
            r.lambda = y[k] / x[k];
            break;
        }
        if (!y[k].is_zero()) return r;  // x zero here, y not
    }
    if (r.lambda.is_zero()) return r;
    for (size_t k = 0; k < x.size(); ++k)
        if (y[k] != x[k] * r.lambda) return r;
    r.equal = true;
    return r;
}

// ---- character transform (u-table) ---------------------------------------

// Z(2)^g embedded in Z(delta)^g as (delta/2)*bits.
inline IndexVector two_torsion_index(int g, int delta, unsigned bits) {
    IndexVector t(g, delta);
    for (int i = 0; i < g; ++i)
        if (bits >> i & 1) t.set(i, delta / 2);
    return t;
}

// Coset representative: entries reduced below delta/2; eps = the Z(2) part.
inline void coset_split(const IndexVector& i, IndexVector& rep, unsigned& eps) {
    int h = i.modulus() / 2;
    rep = i;
    eps = 0;
    for (int k = 0; k < i.g(); ++k)
        if (i[k] >= h) {
            rep.set(k, i[k] - h);
            eps |= 1u << k;
        }
}

class DualThetaTable {
  public:
    DualThetaTable() : ctx_(nullptr), level_(0) {}
    DualThetaTable(const ThetaContext* ctx, int level)
        : ctx_(ctx), level_(level), v_(ctx->coord_count(level), ctx->field()->zero()) {}

    const ThetaContext* ctx() const { return ctx_; }
    int level() const { return level_; }

    // u_{(i,chi)} for arbitrary i (sign from the coset decomposition).
    FieldElement get(const IndexVector& i, const Character2& chi) const {
        IndexVector rep(i.g(), i.modulus());
        unsigned eps;
        coset_split(i, rep, eps);
        const FieldElement& base = v_[slot(rep, chi)];
        return chi.eval_bits(eps) < 0 ? -base : base;
    }
    FieldElement& rep_slot(const IndexVector& rep, const Character2& chi) { return v_[slot(rep, chi)]; }
    const FieldElement& rep_slot(const IndexVector& rep, const Character2& chi) const {
        return v_[slot(rep, chi)];
    }

  private:
    const ThetaContext* ctx_;
    int level_;
    std::vector<FieldElement> v_;  // [rep-rank * 2^g + chi]
    size_t slot(const IndexVector& rep, const Character2& chi) const {
        int h = level_ / 2, g = rep.g();
        size_t r = 0;
        for (int k = 0; k < g; ++k) r = r * h + rep[k];
        return r * (1u << g) + chi.mask();
    }
};

// u_{(i,chi)}(x) = sum_{t in Z(2)} chi(t) x_{i+t}.
inline DualThetaTable char_transform(const AffineThetaPoint& x) {
    int g = x.g(), delta = x.level();
    if (delta % 2) fail(errc::bad_input, "char_transform needs even level");
    DualThetaTable out(x.ctx(), delta);
    auto chis = Character2::all(g);
    for (const auto& rep : enumerate_cached(g, delta / 2)) {
        IndexVector base(g, delta);
        for (int k = 0; k < g; ++k) base.set(k, rep[k]);
        for (const auto& chi : chis) {
            FieldElement s = x.ctx()->field()->zero();
            for (unsigned tb = 0; tb < (1u << g); ++tb) {
                const FieldElement& term = x.at(base + two_torsion_index(g, delta, tb));
                s = chi.eval_bits(tb) < 0 ? s - term : s + term;
            }
            out.rep_slot(base.reduced(delta), chi) = s;  // rep entries already < delta/2
        }
    }
    return out;
}

// theta_i = 2^{-g} sum_chi u_{(i,chi)}.
inline AffineThetaPoint inverse_char_transform(const DualThetaTable& u) {
    const ThetaContext* ctx = u.ctx();
    int g = ctx->g(), delta = u.level();
    AffineThetaPoint out(ctx, delta);
    FieldElement inv2g = ctx->field()->from_int(1u << g).inv();
    auto chis = Character2::all(g);
    for (const auto& i : enumerate_cached(g, delta)) {
        FieldElement s = ctx->field()->zero();
        for (const auto& chi : chis) s = s + u.get(i, chi);
        out.at(i) = s * inv2g;
    }
    return out;
}

// Full level-delta character transform (the J automorphism that swaps the two
// halves of the Heisenberg group): result_i = sum_j e_c(i,j) x_j.
inline AffineThetaPoint inversion_transform(const AffineThetaPoint& x) {
    const ThetaContext* ctx = x.ctx();
    int delta = x.level();
    AffineThetaPoint out(ctx, delta);
    const auto& idx = enumerate_cached(x.g(), delta);
    for (const auto& i : idx) {
        FieldElement s = ctx->field()->zero();
        for (const auto& j : idx) s = s + ctx->e_c(i, j, delta) * x.at(j);
        out.at(i) = s;
    }
    return out;
}

}  // namespace theta
