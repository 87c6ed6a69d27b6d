#pragma once

// Exact arithmetic in F_{p^d} for odd primes p, desk-scale sizes (p^d up to ~2^41).
//
// Elements are coefficient vectors (low degree first) reduced mod p, stored
// inline; extensions are F_p[x]/(f) for a monic irreducible f of degree d.  The
// context owns a deterministic multiplicative generator (the lexicographically
// smallest one) from which all roots of unity and k-th roots are derived, so
// every root choice in the library is reproducible.

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace theta {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr unsigned kMaxFieldDeg = 8;

class FieldContext;

class FieldElement {
  public:
    FieldElement() = default;

    const FieldContext* ctx() const { return ctx_; }
    unsigned deg() const { return d_; }
    u64 coeff(unsigned i) const { return c_[i]; }
    std::vector<u64> coeffs() const { return std::vector<u64>(c_.begin(), c_.begin() + d_); }

    bool is_zero() const {
        for (unsigned i = 0; i < d_; ++i)
            if (c_[i]) return false;
        return true;
    }

    bool operator==(const FieldElement& o) const {
        if (ctx_ != o.ctx_ || d_ != o.d_) return false;
        for (unsigned i = 0; i < d_; ++i)
            if (c_[i] != o.c_[i]) return false;
        return true;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    // Lexicographic order on coefficient vectors (entry 0 most significant).
    bool lex_less(const FieldElement& o) const {
        for (unsigned i = 0; i < d_; ++i)
            if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
        return false;
    }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement inv() const;
    FieldElement pow(u64 e) const;

    std::string str() const {
        std::ostringstream os;
        for (unsigned i = 0; i < d_; ++i) {
            if (i) os << ',';
            os << c_[i];
        }
        return os.str();
    }

  private:
    const FieldContext* ctx_ = nullptr;
    unsigned d_ = 0;
    std::array<u64, kMaxFieldDeg> c_{};
    friend class FieldContext;
};

class FieldContext {
  public:
    // modulus_poly: coefficients c0..c_{d-1} of a monic degree-d irreducible
    // (leading 1 implicit); empty for d == 1 or to request a deterministic scan.
    explicit FieldContext(u64 p, unsigned d = 1, std::vector<u64> modulus_poly = {},
                          const std::vector<u64>& declared_root_orders = {})
        : p_(p), d_(d), mod_(std::move(modulus_poly)) {
        if (p < 3 || !is_prime(p)) fail(errc::bad_input, "p must be an odd prime");
        if (d < 1 || d > kMaxFieldDeg) fail(errc::bad_input, "extension degree out of range");
        q_ = 1;
        for (unsigned i = 0; i < d_; ++i) {
            if (q_ > (u64(1) << 41) / p_) fail(errc::bad_input, "field too large (p^d > 2^41)");
            q_ *= p_;
        }
        if (d_ == 1) {
            mod_.clear();
        } else if (mod_.empty()) {
            mod_ = find_irreducible();
        } else {
            if (mod_.size() != d_) fail(errc::bad_input, "modulus poly must have degree d");
            for (auto& c : mod_) c %= p_;
            if (!is_irreducible(mod_)) fail(errc::bad_input, "modulus poly is not irreducible");
        }
        factor_group_order();
        generator_ = find_generator();
        for (u64 m : declared_root_orders) unity_cache_.emplace(m, primitive_root_of_unity(m));
    }

    FieldContext(const FieldContext&) = delete;
    FieldContext& operator=(const FieldContext&) = delete;

    u64 p() const { return p_; }
    unsigned d() const { return d_; }
    u64 order() const { return q_; }  // p^d
    const std::vector<u64>& modulus_poly() const { return mod_; }
    const FieldElement& generator() const { return generator_; }

    FieldElement zero() const {
        FieldElement e;
        e.ctx_ = this;
        e.d_ = d_;
        return e;
    }
    FieldElement one() const { return from_int(1); }
    FieldElement from_int(u64 v) const {
        FieldElement e = zero();
        e.c_[0] = v % p_;
        return e;
    }
    FieldElement from_coeffs(const std::vector<u64>& c) const {
        if (c.size() > d_) fail(errc::bad_input, "too many coefficients for field degree");
        FieldElement e = zero();
        for (size_t i = 0; i < c.size(); ++i) e.c_[i] = c[i] % p_;
        return e;
    }
    FieldElement from_int_signed(long long v) const {
        long long r = v % (long long)p_;
        if (r < 0) r += (long long)p_;
        return from_int((u64)r);
    }
    // Element with coefficient vector enumerated by rank (mixed radix base p).
    FieldElement from_rank(u64 r) const {
        FieldElement e = zero();
        for (unsigned i = 0; i < d_; ++i) {
            e.c_[i] = r % p_;
            r /= p_;
        }
        return e;
    }

    FieldElement parse(const std::string& s) const {
        std::vector<u64> c;
        std::istringstream is(s);
        std::string tok;
        while (std::getline(is, tok, ',')) c.push_back(std::stoull(tok));
        return from_coeffs(c);
    }

    // ---- arithmetic --------------------------------------------------------

    FieldElement add(const FieldElement& a, const FieldElement& b) const {
        check(a, b);
        FieldElement r = zero();
        for (unsigned i = 0; i < d_; ++i) {
            u64 s = a.c_[i] + b.c_[i];
            r.c_[i] = s >= p_ ? s - p_ : s;
        }
        return r;
    }
    FieldElement sub(const FieldElement& a, const FieldElement& b) const {
        check(a, b);
        FieldElement r = zero();
        for (unsigned i = 0; i < d_; ++i)
            r.c_[i] = a.c_[i] >= b.c_[i] ? a.c_[i] - b.c_[i] : a.c_[i] + p_ - b.c_[i];
        return r;
    }
    FieldElement neg(const FieldElement& a) const {
        check(a);
        FieldElement r = zero();
        for (unsigned i = 0; i < d_; ++i) r.c_[i] = a.c_[i] ? p_ - a.c_[i] : 0;
        return r;
    }
    FieldElement mul(const FieldElement& a, const FieldElement& b) const {
        check(a, b);
        if (d_ == 1) {
            FieldElement r = zero();
            r.c_[0] = (u64)((u128)a.c_[0] * b.c_[0] % p_);
            return r;
        }
        u64 t[2 * kMaxFieldDeg - 1] = {0};
        for (unsigned i = 0; i < d_; ++i) {
            if (!a.c_[i]) continue;
            for (unsigned j = 0; j < d_; ++j)
                if (b.c_[j]) t[i + j] = (u64)((t[i + j] + (u128)a.c_[i] * b.c_[j]) % p_);
        }
        // reduce by the monic modulus: x^d = -mod_
        for (unsigned i = 2 * d_ - 2; i >= d_; --i) {
            u64 c = t[i];
            if (c) {
                t[i] = 0;
                for (unsigned j = 0; j < d_; ++j)
                    if (mod_[j]) t[i - d_ + j] = (u64)((t[i - d_ + j] + (u128)c * (p_ - mod_[j])) % p_);
            }
            if (i == d_) break;
        }
        FieldElement r = zero();
        for (unsigned i = 0; i < d_; ++i) r.c_[i] = t[i];
        return r;
    }
    FieldElement inv(const FieldElement& a) const {
        check(a);
        if (a.is_zero()) fail(errc::division_by_zero, "inverse of zero");
        return pow(a, q_ - 2);
    }
    FieldElement div(const FieldElement& a, const FieldElement& b) const { return mul(a, inv(b)); }
    FieldElement pow(const FieldElement& a, u64 e) const {
        check(a);
        FieldElement acc = one(), base = a;
        while (e) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }
    FieldElement pow_signed(const FieldElement& a, long long e) const {
        if (e >= 0) return pow(a, (u64)e);
        return pow(inv(a), (u64)(-e));
    }

    // ---- roots -------------------------------------------------------------

    // Primitive m-th root of unity: gamma^{(q-1)/m}.  NoSuchRoot when m does
    // not divide q-1.
    FieldElement primitive_root_of_unity(u64 m) const {
        if (m == 0 || (q_ - 1) % m != 0) fail(errc::no_such_root, "m does not divide p^d - 1");
        auto it = unity_cache_.find(m);
        if (it != unity_cache_.end()) return it->second;
        return pow(generator_, (q_ - 1) / m);
    }

    // Deterministic k-th root via the generator's exponent lattice, normalized
    // to the lexicographically smallest root.  NoRoot when none exists here.
    FieldElement kth_root(const FieldElement& x, u64 k) const {
        check(x);
        if (k == 0) fail(errc::bad_input, "k must be positive");
        if (x.is_zero()) fail(errc::bad_input, "kth_root of zero");
        u64 n = q_ - 1;
        u64 e = dlog(x);
        u64 g = std::gcd(k, n);
        if (e % g != 0) fail(errc::no_root, "no k-th root in this field");
        u64 n1 = n / g;
        u64 r0 = mulmod_u(e / g % n1, inv_mod(k / g % n1, n1), n1);
        FieldElement best = pow(generator_, r0);
        if (g > 1) {
            FieldElement zeta = pow(generator_, n / g);
            FieldElement cur = best;
            for (u64 j = 1; j < g; ++j) {
                cur = mul(cur, zeta);
                if (cur.lex_less(best)) best = cur;
            }
        }
        return best;
    }

    bool has_kth_root(const FieldElement& x, u64 k) const {
        check(x);
        if (x.is_zero()) return false;
        u64 g = std::gcd(k, q_ - 1);
        return pow(x, (q_ - 1) / g) == one();
    }

    // Discrete log base the canonical generator (Pohlig-Hellman + BSGS).
    u64 dlog(const FieldElement& x) const {
        if (x.is_zero()) fail(errc::bad_input, "dlog of zero");
        u64 n = q_ - 1;
        u64 result = 0, modulus = 1;
        for (auto [pr, ex] : group_factors_) {
            u64 pe = 1;
            for (unsigned i = 0; i < ex; ++i) pe *= pr;
            u64 sub = subgroup_dlog(x, pr, ex);
            u64 m1 = modulus, r1 = result;
            u64 inv12 = inv_mod(m1 % pe, pe);
            u64 t = mulmod_u((sub + pe - r1 % pe) % pe, inv12, pe);
            result = r1 + m1 * t;
            modulus = m1 * pe;
        }
        return result;
    }

    // Constant-coefficient embedding F_p -> this field (d_src == 1 only).
    FieldElement embed(const FieldElement& a) const {
        if (a.ctx() == this) return a;
        if (a.ctx()->d() != 1 || a.ctx()->p() != p_)
            fail(errc::context_mismatch, "only prime-field elements embed into extensions");
        return from_int(a.coeff(0));
    }

  private:
    u64 p_, q_;
    unsigned d_;
    std::vector<u64> mod_;
    std::vector<std::pair<u64, unsigned>> group_factors_;  // factorization of q-1
    FieldElement generator_;
    std::map<u64, FieldElement> unity_cache_;

    void check(const FieldElement& a) const {
        if (a.ctx_ != this) fail(errc::context_mismatch, "element from another field context");
    }
    void check(const FieldElement& a, const FieldElement& b) const {
        check(a);
        check(b);
    }

    static bool is_prime(u64 n) {
        if (n < 2) return false;
        for (u64 f = 2; f * f <= n; ++f)
            if (n % f == 0) return false;
        return true;
    }

    static u64 mulmod_u(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

    static u64 inv_mod(u64 a, u64 m) {
        if (m == 1) return 0;
        long long t = 0, newt = 1, r = (long long)m, newr = (long long)(a % m);
        while (newr) {
            long long qq = r / newr;
            t -= qq * newt;
            std::swap(t, newt);
            r -= qq * newr;
            std::swap(r, newr);
        }
        if (t < 0) t += (long long)m;
        return (u64)t;
    }

    std::vector<u64> find_irreducible() const {
        std::vector<u64> c(d_, 0);
        while (true) {
            if (is_irreducible(c)) return c;
            int i = (int)d_ - 1;
            while (i >= 0 && c[i] == p_ - 1) c[i--] = 0;
            if (i < 0) fail(errc::bad_input, "no irreducible polynomial found");
            ++c[i];
        }
    }

    bool is_irreducible(const std::vector<u64>& f) const {
        if (d_ == 1) return true;
        auto mulp = [&](const std::vector<u64>& a, const std::vector<u64>& b) {
            std::vector<u64> t(2 * d_ - 1, 0);
            for (unsigned i = 0; i < d_; ++i)
                for (unsigned j = 0; j < d_; ++j)
                    if (a[i] && b[j]) t[i + j] = (u64)((t[i + j] + (u128)a[i] * b[j]) % p_);
            for (int i = (int)(2 * d_ - 2); i >= (int)d_; --i) {
                u64 c = t[i];
                if (c) {
                    t[i] = 0;
                    for (unsigned j = 0; j < d_; ++j)
                        if (f[j]) t[i - d_ + j] = (u64)((t[i - d_ + j] + (u128)c * (p_ - f[j])) % p_);
                }
            }
            t.resize(d_);
            return t;
        };
        auto frob_power = [&](const std::vector<u64>& base) {
            std::vector<u64> acc(d_, 0);
            acc[0] = 1;
            std::vector<u64> b = base;
            u64 e = p_;
            while (e) {
                if (e & 1) acc = mulp(acc, b);
                b = mulp(b, b);
                e >>= 1;
            }
            return acc;
        };
        auto deg = [](const std::vector<u64>& v) {
            for (int i = (int)v.size() - 1; i >= 0; --i)
                if (v[i]) return i;
            return -1;
        };
        auto polygcd_is_one = [&](std::vector<u64> a) {
            std::vector<u64> g = f;
            g.push_back(1);
            std::vector<u64> h = std::move(a);
            while (true) {
                int dh = deg(h);
                if (dh < 0) return deg(g) == 0;
                if (dh == 0) return true;
                int dg = deg(g);
                if (dg < dh) {
                    std::swap(g, h);
                    continue;
                }
                u64 lc = inv_mod(h[dh], p_);
                u64 factor = mulmod_u(g[dg], lc, p_);
                for (int i = 0; i <= dh; ++i) {
                    u64 s = mulmod_u(factor, h[i], p_);
                    int k = dg - dh + i;
                    g[k] = (g[k] + p_ - s) % p_;
                }
                while (!g.empty() && !g.back()) g.pop_back();
            }
        };
        std::vector<u64> x(d_, 0);
        x[1] = 1;
        std::vector<std::vector<u64>> frob(d_ + 1);
        frob[0] = x;
        for (unsigned j = 1; j <= d_; ++j) frob[j] = frob_power(frob[j - 1]);
        if (frob[d_] != x) return false;
        for (unsigned e = 2; e <= d_; ++e) {
            if (d_ % e == 0 && is_prime(e)) {
                std::vector<u64> diff = frob[d_ / e];
                diff[1] = (diff[1] + p_ - 1) % p_;
                if (!polygcd_is_one(diff)) return false;
            }
        }
        return true;
    }

    void factor_group_order() {
        u64 n = q_ - 1;
        for (u64 f = 2; f * f <= n; ++f) {
            if (n % f == 0) {
                unsigned e = 0;
                while (n % f == 0) {
                    n /= f;
                    ++e;
                }
                group_factors_.emplace_back(f, e);
            }
        }
        if (n > 1) group_factors_.emplace_back(n, 1);
    }

    FieldElement find_generator() const {
        // smallest element in lexicographic coefficient order that generates
        FieldElement cand = zero();
        while (true) {
            int i = (int)d_ - 1;
            while (i >= 0 && cand.c_[i] == p_ - 1) cand.c_[i--] = 0;
            if (i < 0) fail(errc::bad_input, "no generator found");
            ++cand.c_[i];
            if (cand.is_zero()) continue;
            bool ok = true;
            for (auto [pr, ex] : group_factors_) {
                (void)ex;
                if (pow(cand, (q_ - 1) / pr) == one()) {
                    ok = false;
                    break;
                }
            }
            if (ok) return cand;
        }
    }

    u64 subgroup_dlog(const FieldElement& x, u64 pr, unsigned ex) const {
        u64 pe = 1;
        for (unsigned i = 0; i < ex; ++i) pe *= pr;
        u64 n = q_ - 1;
        FieldElement xs = pow(x, n / pe);           // order divides pr^ex
        FieldElement gs = pow(generator_, n / pe);  // order pr^ex exactly
        FieldElement gamma = pow(gs, pe / pr);      // order pr
        u64 result = 0, mult = 1;
        for (unsigned digit = 0; digit < ex; ++digit) {
            FieldElement cur = mul(xs, pow(inv(gs), result));
            FieldElement probe = pow(cur, pe / (mult * pr));
            u64 dv = bsgs_order_p(probe, gamma, pr);
            result += mult * dv;
            mult *= pr;
        }
        return result;
    }

    // gamma^t = probe with gamma of prime order pr
    u64 bsgs_order_p(const FieldElement& probe, const FieldElement& gamma, u64 pr) const {
        u64 mstep = 1;
        while (mstep * mstep < pr) ++mstep;
        std::map<std::vector<u64>, u64> table;
        FieldElement cur = one();
        for (u64 j = 0; j < mstep; ++j) {
            table.emplace(cur.coeffs(), j);
            cur = mul(cur, gamma);
        }
        FieldElement factor = inv(cur);  // gamma^{-mstep}
        FieldElement y = probe;
        for (u64 i = 0; i <= mstep; ++i) {
            auto it = table.find(y.coeffs());
            if (it != table.end()) return (i * mstep + it->second) % pr;
            y = mul(y, factor);
        }
        fail(errc::bad_input, "dlog failure (element not in subgroup)");
    }
};

inline FieldElement FieldElement::operator+(const FieldElement& o) const { return ctx_->add(*this, o); }
inline FieldElement FieldElement::operator-(const FieldElement& o) const { return ctx_->sub(*this, o); }
inline FieldElement FieldElement::operator*(const FieldElement& o) const { return ctx_->mul(*this, o); }
inline FieldElement FieldElement::operator/(const FieldElement& o) const { return ctx_->div(*this, o); }
inline FieldElement FieldElement::operator-() const { return ctx_->neg(*this); }
inline FieldElement FieldElement::inv() const { return ctx_->inv(*this); }
inline FieldElement FieldElement::pow(u64 e) const { return ctx_->pow(*this, e); }

}  // namespace theta
