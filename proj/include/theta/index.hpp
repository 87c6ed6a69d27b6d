#pragma once

// Index combinatorics for theta coordinates: the groups Z(delta) = (Z/delta)^g,
// characters of Z(2)^g, the CRT section/embeddings between levels, chain bases,
// and the canonical pairing e_c.

#include <array>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace theta {

constexpr int kMaxG = 8;

// Element of (Z/modulus)^g, entries reduced to [0, modulus).
class IndexVector {
  public:
    IndexVector() : g_(0), mod_(1) { e_.fill(0); }
    IndexVector(int g, int modulus) : g_(g), mod_(modulus) { e_.fill(0); }
    IndexVector(int g, int modulus, const std::vector<long long>& v) : g_(g), mod_(modulus) {
        e_.fill(0);
        for (int i = 0; i < g; ++i) e_[i] = reduce(v[i]);
    }

    int g() const { return g_; }
    int modulus() const { return mod_; }
    int operator[](int i) const { return e_[i]; }
    void set(int i, long long v) { e_[i] = reduce(v); }

    IndexVector operator+(const IndexVector& o) const {
        IndexVector r(g_, mod_);
        for (int i = 0; i < g_; ++i) r.e_[i] = wrap(e_[i] + o.e_[i]);
        return r;
    }
    IndexVector operator-(const IndexVector& o) const {
        IndexVector r(g_, mod_);
        for (int i = 0; i < g_; ++i) r.e_[i] = wrap(e_[i] - o.e_[i] + mod_);
        return r;
    }
    IndexVector operator-() const {
        IndexVector r(g_, mod_);
        for (int i = 0; i < g_; ++i) r.e_[i] = e_[i] ? mod_ - e_[i] : 0;
        return r;
    }
    IndexVector scaled(long long f) const {
        IndexVector r(g_, mod_);
        for (int i = 0; i < g_; ++i) r.e_[i] = reduce((long long)e_[i] * f);
        return r;
    }
    // Componentwise map into (Z/new_modulus)^g via multiplication by factor.
    IndexVector embedded(int new_modulus, long long factor) const {
        IndexVector r(g_, new_modulus);
        for (int i = 0; i < g_; ++i) r.e_[i] = (int)(((long long)e_[i] * factor) % new_modulus);
        return r;
    }
    // Reinterpret mod new_modulus dividing modulus (entry mod new_modulus).
    IndexVector reduced(int new_modulus) const {
        IndexVector r(g_, new_modulus);
        for (int i = 0; i < g_; ++i) r.e_[i] = e_[i] % new_modulus;
        return r;
    }

    bool operator==(const IndexVector& o) const {
        if (g_ != o.g_ || mod_ != o.mod_) return false;
        for (int i = 0; i < g_; ++i)
            if (e_[i] != o.e_[i]) return false;
        return true;
    }
    bool operator!=(const IndexVector& o) const { return !(*this == o); }
    bool operator<(const IndexVector& o) const {  // lexicographic, entry 0 most significant
        for (int i = 0; i < g_; ++i)
            if (e_[i] != o.e_[i]) return e_[i] < o.e_[i];
        return false;
    }

    bool is_zero() const {
        for (int i = 0; i < g_; ++i)
            if (e_[i]) return false;
        return true;
    }
    bool all_even() const {
        for (int i = 0; i < g_; ++i)
            if (e_[i] & 1) return false;
        return true;
    }
    // Canonical half: entries v/2 (requires all_even()).
    IndexVector halved() const {
        IndexVector r(g_, mod_);
        for (int i = 0; i < g_; ++i) r.e_[i] = e_[i] / 2;
        return r;
    }

    long long dot(const IndexVector& o) const {
        long long s = 0;
        for (int i = 0; i < g_; ++i) s += (long long)e_[i] * o.e_[i];
        return s;
    }

    // Rank in lexicographic enumeration (entry 0 most significant).
    size_t rank() const {
        size_t r = 0;
        for (int i = 0; i < g_; ++i) r = r * mod_ + e_[i];
        return r;
    }
    static IndexVector from_rank(int g, int modulus, size_t rank) {
        IndexVector v(g, modulus);
        for (int i = g - 1; i >= 0; --i) {
            v.e_[i] = (int)(rank % modulus);
            rank /= modulus;
        }
        return v;
    }

    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < g_; ++i) {
            if (i) s += ',';
            s += std::to_string(e_[i]);
        }
        return s + "]";
    }

  private:
    int g_, mod_;
    std::array<int, kMaxG> e_;
    int wrap(int v) const { return v >= mod_ ? v - mod_ : v; }
    int reduce(long long v) const {
        long long r = v % mod_;
        if (r < 0) r += mod_;
        return (int)r;
    }
};

// All delta^g vectors in lexicographic order.
inline std::vector<IndexVector> enumerate(int g, int delta) {
    if (delta < 1) fail(errc::bad_input, "delta must be >= 1");
    size_t total = 1;
    for (int i = 0; i < g; ++i) total *= (size_t)delta;
    std::vector<IndexVector> out;
    out.reserve(total);
    for (size_t r = 0; r < total; ++r) out.push_back(IndexVector::from_rank(g, delta, r));
    return out;
}

// Cached enumeration for the inner loops.
inline const std::vector<IndexVector>& enumerate_cached(int g, int delta) {
    thread_local std::map<std::pair<int, int>, std::vector<IndexVector>> cache;
    auto key = std::make_pair(g, delta);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, enumerate(g, delta)).first;
    return it->second;
}

// Character of Z(2)^g: chi(t) = (-1)^{<mask, t>}.
class Character2 {
  public:
    Character2() : g_(0), mask_(0) {}
    Character2(int g, unsigned mask) : g_(g), mask_(mask) {}
    int g() const { return g_; }
    unsigned mask() const { return mask_; }
    // Evaluate on a bit pattern of Z(2)^g.
    int eval_bits(unsigned tbits) const { return __builtin_parity(mask_ & tbits) ? -1 : 1; }
    Character2 operator*(const Character2& o) const { return Character2(g_, mask_ ^ o.mask_); }
    bool trivial() const { return mask_ == 0; }
    bool operator==(const Character2& o) const { return g_ == o.g_ && mask_ == o.mask_; }
    static std::vector<Character2> all(int g) {
        std::vector<Character2> v;
        for (unsigned m = 0; m < (1u << g); ++m) v.emplace_back(g, m);
        return v;
    }

  private:
    int g_;
    unsigned mask_;
};

// The working context: dimension g, base level n (even), odd ell with
// gcd(ell, n) = 1, a field, and a fixed primitive (ell*n)-th root of unity that
// pins the duality Z(delta)^ = Z(delta).  ell = 1 is allowed for instances that
// only exercise the level-n chain arithmetic.
class ThetaContext {
  public:
    ThetaContext(int g, int n, int ell, const FieldContext* field)
        : g_(g), n_(n), ell_(ell), F_(field) {
        if (g < 1 || g > kMaxG) fail(errc::bad_input, "dimension out of range");
        if (n < 2 || n % 2) fail(errc::bad_input, "level n must be even");
        if (ell < 1 || ell % 2 == 0) fail(errc::bad_input, "ell must be odd");
        if (std::gcd(ell, n) != 1) fail(errc::bad_input, "ell must be prime to n");
        zeta_ln_ = F_->primitive_root_of_unity((u64)ell * n);
        zeta_n_ = F_->pow(zeta_ln_, ell);
        zeta_ell_ = ell > 1 ? F_->pow(zeta_ln_, n) : F_->one();
        // power tables of zeta_delta for every divisor delta of ell*n
        int ln = ell * n;
        for (int delta = 1; delta <= ln; ++delta) {
            if (ln % delta) continue;
            std::vector<FieldElement> pw(delta);
            FieldElement z = F_->pow(zeta_ln_, (u64)(ln / delta));
            pw[0] = F_->one();
            for (int k = 1; k < delta; ++k) pw[k] = pw[k - 1] * z;
            zeta_powers_[delta] = std::move(pw);
        }
    }

    ThetaContext(const ThetaContext&) = delete;
    ThetaContext& operator=(const ThetaContext&) = delete;

    int g() const { return g_; }
    int n() const { return n_; }
    int ell() const { return ell_; }
    int level_ln() const { return ell_ * n_; }
    const FieldContext* field() const { return F_; }
    const FieldElement& zeta_ln() const { return zeta_ln_; }
    const FieldElement& zeta_n() const { return zeta_n_; }
    const FieldElement& zeta_ell() const { return zeta_ell_; }

    // Canonical pairing e_{c,delta}(i,j) = zeta_delta^{<i,j>} for delta | ell*n.
    FieldElement e_c(const IndexVector& i, const IndexVector& j, int delta) const {
        auto it = zeta_powers_.find(delta);
        if (it == zeta_powers_.end()) fail(errc::bad_input, "delta does not divide ell*n");
        long long e = i.dot(j) % delta;
        return it->second[(size_t)e];
    }

    size_t coord_count(int level) const {
        size_t t = 1;
        for (int i = 0; i < g_; ++i) t *= (size_t)level;
        return t;
    }

  private:
    int g_, n_, ell_;
    const FieldContext* F_;
    FieldElement zeta_ln_, zeta_n_, zeta_ell_;
    std::map<int, std::vector<FieldElement>> zeta_powers_;
};

// Z(n) -> Z(ell*n) by x -> ell*x (the canonical level embedding).
inline IndexVector embed_scale(const IndexVector& i, int ell) {
    return i.embedded(i.modulus() * ell, ell);
}

// The CRT section S = n * Z(ell) inside Z(ell*n): S + Z(n) = Z(ell*n).
inline std::vector<IndexVector> section_set(const ThetaContext& ctx) {
    std::vector<IndexVector> out;
    for (const auto& x : enumerate(ctx.g(), ctx.ell())) out.push_back(x.embedded(ctx.level_ln(), ctx.n()));
    return out;
}

// Canonical chain basis of the embedded Z(ell): {0, d_i, d_i + d_j (i<j)} with
// d_i = n*e_i, in Z(ell*n).  Size 1 + g(g+1)/2.
inline std::vector<IndexVector> chain_basis(const ThetaContext& ctx) {
    int g = ctx.g(), ln = ctx.level_ln(), n = ctx.n();
    std::vector<IndexVector> out;
    out.emplace_back(g, ln);
    for (int i = 0; i < g; ++i) {
        IndexVector d(g, ln);
        d.set(i, n);
        out.push_back(d);
    }
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j) {
            IndexVector d(g, ln);
            d.set(i, n);
            d.set(j, n);
            out.push_back(d);
        }
    return out;
}

// dual_pairing: e_c on Z(delta) x Z(delta)^ for delta | ell*n.
inline FieldElement dual_pairing(const ThetaContext& ctx, const IndexVector& i, const IndexVector& j,
                                 int delta) {
    return ctx.e_c(i, j, delta);
}

}  // namespace theta
