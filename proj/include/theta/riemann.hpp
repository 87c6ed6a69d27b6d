#pragma once

// The generalized Riemann relations in the two-by-two "B-sum" form
//
//   B_chi(i,j; a,b) = sum_{t in Z(2)^g} chi(t) a_{i+t} b_{j+t},
//
// which underlie everything here: the modular equations cutting out valid theta
// null points, the equations of the embedded variety, and the pseudo-addition
// law.  For indices i+j+k+l = 2m (any valid m) and every chi,
//
//   B_chi(i,j; x+y, x-y) * B_chi(k,l; 0,0)
//     = B_chi(i-m, m-j; y,y) * B_chi(m-k, m-l; x,x).
//
// Specializing x+y = x-y = x, y = 0 gives the variety membership test, and
// specializing all points to 0 gives the null-point (modular) equations.

#include <algorithm>
#include <optional>
#include <sstream>
#include <vector>

#include "point.hpp"

namespace theta {

inline FieldElement b_sum(const Character2& chi, const IndexVector& i, const IndexVector& j,
                          const AffineThetaPoint& a, const AffineThetaPoint& b) {
    int g = a.g(), delta = a.level();
    FieldElement s = a.ctx()->field()->zero();
    for (unsigned tb = 0; tb < (1u << g); ++tb) {
        IndexVector t = two_torsion_index(g, delta, tb);
        FieldElement term = a.at(i + t) * b.at(j + t);
        s = chi.eval_bits(tb) < 0 ? s - term : s + term;
    }
    return s;
}

// One violated relation, for reports.
struct RelationViolation {
    IndexVector x, y, u, v, z;
    unsigned chi_mask;
    std::string str() const {
        std::ostringstream os;
        os << "(" << x.str() << "," << y.str() << "," << u.str() << "," << v.str() << "; z=" << z.str()
           << ", chi=" << chi_mask << ")";
        return os.str();
    }
};

struct ValidationReport {
    bool valid = true;
    bool symmetry_ok = true;
    size_t checked = 0;
    std::vector<RelationViolation> violations;  // first 10
};

namespace detail {

// All z with 2z = s (componentwise).
inline std::vector<IndexVector> halves(const IndexVector& s) {
    std::vector<IndexVector> out;
    if (!s.all_even()) return out;
    int g = s.g(), delta = s.modulus();
    IndexVector h = s.halved();
    for (unsigned eb = 0; eb < (1u << g); ++eb) out.push_back(h + two_torsion_index(g, delta, eb));
    return out;
}

}  // namespace detail

// Dense cache of the B-sums of a null point, with inverses of the nonzero ones.
// Index layout: [chi][rank(i)*N + rank(j)].
class NullBTable {
  public:
    NullBTable() = default;
    explicit NullBTable(const AffineThetaPoint& null_pt) {
        int g = null_pt.g(), delta = null_pt.level();
        N_ = null_pt.size();
        const auto& idx = enumerate_cached(g, delta);
        auto chis = Character2::all(g);
        vals_.resize(chis.size());
        invs_.resize(chis.size());
        for (const auto& chi : chis) {
            auto& v = vals_[chi.mask()];
            auto& iv = invs_[chi.mask()];
            v.reserve(N_ * N_);
            iv.resize(N_ * N_);
            for (const auto& i : idx)
                for (const auto& j : idx) {
                    FieldElement b = b_sum(chi, i, j, null_pt, null_pt);
                    if (!b.is_zero()) iv[v.size()] = b.inv();
                    v.push_back(std::move(b));
                }
        }
    }

    const FieldElement& value(unsigned chi_mask, const IndexVector& i, const IndexVector& j) const {
        return vals_[chi_mask][i.rank() * N_ + j.rank()];
    }
    bool nonzero(unsigned chi_mask, const IndexVector& i, const IndexVector& j) const {
        return !vals_[chi_mask][i.rank() * N_ + j.rank()].is_zero();
    }
    const FieldElement& inverse(unsigned chi_mask, const IndexVector& i, const IndexVector& j) const {
        return invs_[chi_mask][i.rank() * N_ + j.rank()];
    }

  private:
    size_t N_ = 0;
    std::vector<std::vector<FieldElement>> vals_, invs_;
};

// The affine lift of a theta null point together with the cached tables the
// chain arithmetic needs.  Validation is explicit (validate()); construction
// only builds tables.
class ThetaNullPoint {
  public:
    ThetaNullPoint() = default;
    explicit ThetaNullPoint(AffineThetaPoint pt)
        : pt_(std::move(pt)), u_(char_transform(pt_)), b_(pt_) {}

    const AffineThetaPoint& point() const { return pt_; }
    const ThetaContext* ctx() const { return pt_.ctx(); }
    int level() const { return pt_.level(); }
    const DualThetaTable& u_table() const { return u_; }
    const NullBTable& b_table() const { return b_; }
    bool validated() const { return validated_; }

    // Symmetry a_x = a_{-x}.
    bool symmetric() const {
        for (const auto& x : enumerate_cached(pt_.g(), pt_.level()))
            if (pt_.at(x) != pt_.at(-x)) return false;
        return true;
    }

    // Modular (Riemann) equations at the null point.  Requires 4 | level for the
    // quartic relations; at level == 2 mod 4 only the symmetry check applies.
    ValidationReport validate(size_t max_violations = 10) {
        ValidationReport rep;
        rep.symmetry_ok = symmetric();
        rep.valid = rep.symmetry_ok;
        int g = pt_.g(), delta = pt_.level();
        if (delta % 4 != 0) {
            validated_ = rep.valid;
            return rep;
        }
        const auto& idx = enumerate_cached(g, delta);
        auto chis = Character2::all(g);
        size_t N = idx.size();
        // one representative per orbit of the symmetries (x<->y), (u<->v),
        // (pair <-> pair); violations still cite the original tuple
        for (size_t xr = 0; xr < N; ++xr)
            for (size_t yr = xr; yr < N; ++yr)
                for (size_t ur = xr; ur < N; ++ur)
                    for (size_t vr = ur; vr < N; ++vr) {
                        const auto &x = idx[xr], &y = idx[yr], &u = idx[ur], &v = idx[vr];
                        if ((x.rank() * N + y.rank()) > (u.rank() * N + v.rank())) continue;
                        for (const auto& z : detail::halves(x + y + u + v)) {
                            for (const auto& chi : chis) {
                                ++rep.checked;
                                FieldElement lhs = b_.value(chi.mask(), x, y) * b_.value(chi.mask(), u, v);
                                FieldElement rhs =
                                    b_.value(chi.mask(), z - x, z - y) * b_.value(chi.mask(), z - u, z - v);
                                if (lhs != rhs) {
                                    rep.valid = false;
                                    if (rep.violations.size() < max_violations)
                                        rep.violations.push_back({x, y, u, v, z, chi.mask()});
                                }
                            }
                        }
                    }
        validated_ = rep.valid;
        return rep;
    }

    // Degeneracy heuristic.  Two conditions make a null point unusable:
    //  - the chain arithmetic needs, for the trivial character, some (k,l) with
    //    k+l in every parity class of Z(delta)/2Z(delta) and B_1(k,l;0,0) != 0
    //    (the identically-zero odd characteristics exempt the other characters);
    //  - the Heisenberg translates of 0 must be pairwise distinct projective
    //    points (K(L) embeds into the variety); a collision means the modular
    //    solution is degenerate.
    bool suspect() const {
        int g = pt_.g(), delta = pt_.level();
        const auto& idx = enumerate_cached(g, delta);
        {
            std::vector<bool> covered(1u << g, false);
            for (const auto& k : idx)
                for (const auto& l : idx) {
                    if (!b_.nonzero(0, k, l)) continue;
                    IndexVector s = k + l;
                    unsigned cls = 0;
                    for (int t = 0; t < g; ++t)
                        if (s[t] & 1) cls |= 1u << t;
                    covered[cls] = true;
                }
            for (int cls = 0; cls < (1 << g); ++cls)
                if (!covered[cls]) return true;
        }
        std::map<std::vector<u64>, int> seen;
        const ThetaContext* ctx = pt_.ctx();
        for (const auto& i : idx)
            for (const auto& j : idx) {
                HeisenbergElement h(ctx->field()->one(), i, j);
                AffineThetaPoint t = heisenberg_act(*ctx, h, pt_);
                if (t.is_zero_vector()) return true;
                t = t.projective_normalized();
                std::vector<u64> key;
                key.reserve(t.size() * ctx->field()->d());
                for (size_t k = 0; k < t.size(); ++k)
                    for (unsigned c = 0; c < ctx->field()->d(); ++c) key.push_back(t[k].coeff(c));
                if (!seen.emplace(std::move(key), 1).second) return true;
            }
        return false;
    }

  private:
    AffineThetaPoint pt_;
    DualThetaTable u_;
    NullBTable b_;
    bool validated_ = false;
};

// Early-exit symmetry + modular-equation check, cheap enough for exhaustive
// searches.  At levels not divisible by 4 only symmetry applies.
inline bool null_relations_hold(const AffineThetaPoint& a) {
    int g = a.g(), delta = a.level();
    for (const auto& x : enumerate_cached(g, delta))
        if (!(a.at(x) == a.at(-x))) return false;
    if (delta % 4 != 0) return true;
    const auto& idx = enumerate_cached(g, delta);
    auto chis = Character2::all(g);
    size_t N = idx.size();
    std::vector<std::vector<FieldElement>> B(chis.size());
    for (const auto& chi : chis) {
        auto& v = B[chi.mask()];
        v.reserve(N * N);
        for (const auto& i : idx)
            for (const auto& j : idx) v.push_back(b_sum(chi, i, j, a, a));
    }
    auto bv = [&](unsigned cm, const IndexVector& i, const IndexVector& j) -> const FieldElement& {
        return B[cm][i.rank() * N + j.rank()];
    };
    for (size_t xr = 0; xr < N; ++xr)
        for (size_t yr = xr; yr < N; ++yr)
            for (size_t ur = xr; ur < N; ++ur)
                for (size_t vr = ur; vr < N; ++vr) {
                    const auto &x = idx[xr], &y = idx[yr], &u = idx[ur], &v = idx[vr];
                    if ((xr * N + yr) > (ur * N + vr)) continue;
                    for (const auto& z : detail::halves(x + y + u + v))
                        for (const auto& chi : chis)
                            if (!(bv(chi.mask(), x, y) * bv(chi.mask(), u, v) ==
                                  bv(chi.mask(), z - x, z - y) * bv(chi.mask(), z - u, z - v)))
                                return false;
                }
    return true;
}

// Variety membership: the relations of chaineadd(x, 0, x) = x, i.e. for all
// i+j+k+l = 2m and chi:
//   B(i,j;P,P) B(k,l;0,0) = B(i-m,m-j;0,0) B(m-k,m-l;P,P).
// Scaling-invariant and Heisenberg-invariant.  Early-exits on the first
// violation.
inline bool validate_on_variety(const AffineThetaPoint& P, const ThetaNullPoint& null_pt) {
    if (P.level() != null_pt.level()) fail(errc::context_mismatch, "level mismatch");
    if (P.level() % 4 != 0) fail(errc::bad_input, "variety equations need 4 | level");
    int g = P.g(), delta = P.level();
    const auto& idx = enumerate_cached(g, delta);
    auto chis = Character2::all(g);
    const NullBTable& nb = null_pt.b_table();
    size_t N = idx.size();
    for (size_t ir = 0; ir < N; ++ir)
        for (size_t jr = ir; jr < N; ++jr)
            for (size_t kr = 0; kr < N; ++kr)
                for (size_t lr = kr; lr < N; ++lr) {
                    const auto &i = idx[ir], &j = idx[jr], &k = idx[kr], &l = idx[lr];
                    for (const auto& m : detail::halves(i + j + k + l)) {
                        for (const auto& chi : chis) {
                            FieldElement lhs =
                                b_sum(chi, i, j, P, P) * nb.value(chi.mask(), k, l);
                            FieldElement rhs = nb.value(chi.mask(), i - m, m - j) *
                                               b_sum(chi, m - k, m - l, P, P);
                            if (lhs != rhs) return false;
                        }
                    }
                }
    return true;
}

// The certificate form used by tests: does (z,d,0,0; y,y,x,x) satisfy the full
// relation sweep?
inline bool riemann_certificate(const AffineThetaPoint& z, const AffineThetaPoint& d,
                                const AffineThetaPoint& y, const AffineThetaPoint& x,
                                const ThetaNullPoint& null_pt) {
    int g = z.g(), delta = z.level();
    const auto& idx = enumerate_cached(g, delta);
    auto chis = Character2::all(g);
    const NullBTable& nb = null_pt.b_table();
    for (const auto& i : idx)
        for (const auto& j : idx)
            for (const auto& k : idx)
                for (const auto& l : idx)
                    for (const auto& m : detail::halves(i + j + k + l))
                        for (const auto& chi : chis) {
                            FieldElement lhs = b_sum(chi, i, j, z, d) * nb.value(chi.mask(), k, l);
                            FieldElement rhs =
                                b_sum(chi, i - m, m - j, y, y) * b_sum(chi, m - k, m - l, x, x);
                            if (lhs != rhs) return false;
                        }
    return true;
}

}  // namespace theta
