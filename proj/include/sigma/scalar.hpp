#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>

namespace sigma {

// a + b*sqrt(3) with a, b rational
class Scalar {
public:
    Scalar() = default;
    Scalar(long v) : a_(v), b_(0) {}
    Scalar(int v) : a_(v), b_(0) {}
    Scalar(mpq_class a, mpq_class b = 0) : a_(std::move(a)), b_(std::move(b)) {
        a_.canonicalize();
        b_.canonicalize();
    }

    static Scalar frac(long num, long den) {
        if (den == 0) throw std::domain_error("zero denominator");
        return Scalar(mpq_class(num, den));
    }
    static Scalar sqrt3() { return Scalar(0, 1); }

    const mpq_class& rat() const { return a_; }
    const mpq_class& root3() const { return b_; }
    bool is_rational() const { return sgn(b_) == 0; }

    int sign() const {
        int sa = sgn(a_), sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite signs: compare a^2 with 3 b^2
        int c = cmp(mpq_class(a_ * a_), mpq_class(3 * b_ * b_));
        return c > 0 ? sa : (c < 0 ? sb : 0);
    }
    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

    Scalar operator-() const { return Scalar(-a_, -b_); }
    Scalar& operator+=(const Scalar& o) { a_ += o.a_; b_ += o.b_; return *this; }
    Scalar& operator-=(const Scalar& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
    Scalar& operator*=(const Scalar& o) {
        mpq_class na = a_ * o.a_ + 3 * b_ * o.b_;
        mpq_class nb = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(na);
        b_ = std::move(nb);
        return *this;
    }
    Scalar inverse() const {
        // 1/(a+b r) = (a - b r)/(a^2 - 3 b^2)
        mpq_class n = a_ * a_ - 3 * b_ * b_;
        if (sgn(n) == 0) throw std::domain_error("division by zero");
        return Scalar(a_ / n, -b_ / n);
    }
    Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

    friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
    friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
    friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
    friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }

    friend bool operator==(const Scalar& x, const Scalar& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend std::strong_ordering operator<=>(const Scalar& x, const Scalar& y) {
        int s = (x - y).sign();
        return s < 0 ? std::strong_ordering::less
                     : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    double to_double() const { return a_.get_d() + b_.get_d() * 1.7320508075688772; }

    // lexicographic on (a, b); a total order used only for canonical sorting
    static int lex(const Scalar& x, const Scalar& y) {
        int c = cmp(x.a_, y.a_);
        if (c) return c < 0 ? -1 : 1;
        c = cmp(x.b_, y.b_);
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }

    std::string str() const {
        if (is_rational()) return a_.get_str();
        std::string s = sgn(a_) ? a_.get_str() + (sgn(b_) > 0 ? "+" : "") : "";
        return s + b_.get_str() + "*r3";
    }

private:
    mpq_class a_ = 0, b_ = 0;
};

inline Scalar abs(const Scalar& x) { return x.sign() < 0 ? -x : x; }

namespace detail {
inline bool rational_sqrt(const mpq_class& q, mpq_class& out) {
    if (sgn(q) < 0) return false;
    if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 || mpz_perfect_square_p(q.get_den_mpz_t()) == 0) return false;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    out = mpq_class(n, d);
    out.canonicalize();
    return true;
}
}  // namespace detail

// non-negative square root when it lies in the field
inline std::optional<Scalar> sqrt_exact(const Scalar& x) {
    int sg = x.sign();
    if (sg < 0) return std::nullopt;
    if (sg == 0) return Scalar(0);
    const mpq_class &a = x.rat(), &b = x.root3();
    mpq_class r;
    if (sgn(b) == 0) {
        if (detail::rational_sqrt(a, r)) return Scalar(r);
        if (detail::rational_sqrt(mpq_class(a / 3), r)) return Scalar(0, r);
        return std::nullopt;
    }
    // (p + q r3)^2 = a + b r3: p^2 + 3 q^2 = a, 2 p q = b
    mpq_class disc = a * a - 3 * b * b, root;
    if (!detail::rational_sqrt(disc, root)) return std::nullopt;
    for (int s : {1, -1}) {
        mpq_class p2 = (a + s * root) / 2, p;
        if (sgn(p2) <= 0 || !detail::rational_sqrt(p2, p)) continue;
        mpq_class q = b / (2 * p);
        Scalar cand(p, q);
        if (cand.sign() < 0) cand = -cand;
        if (cand * cand == x) return cand;
    }
    return std::nullopt;
}

// interval enclosure of a Scalar, used by winding counters
struct Interval {
    double lo, hi;
};

inline Interval enclose(const Scalar& x) {
    double v = x.to_double();
    double e = std::abs(v) * 1e-12 + 1e-300;
    return {v - e, v + e};
}

}  // namespace sigma
