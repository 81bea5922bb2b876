#ifndef SIMORTH_RATIONAL_HPP
#define SIMORTH_RATIONAL_HPP

#include <gmpxx.h>

#include <Eigen/Core>
#include <cstdint>
#include <ostream>
#include <string>

#include "simorth/error.hpp"

namespace simorth {

/**
 * Exact rational scalar backed by GMP.
 *
 * Values are always in canonical form: reduced fraction, positive
 * denominator. Operators return plain values, so none of gmpxx's
 * expression templates leak into Eigen's kernels. Values are immutable
 * once constructed as far as sharing is concerned; all operations
 * produce new values and are safe to use from concurrent readers.
 */
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(int n) : q_(n) {}
    Rational(long n) : q_(static_cast<signed long>(n)) {}
    explicit Rational(const mpz_class& n) : q_(n) {}

    Rational(long num, long den) : q_(static_cast<signed long>(num), static_cast<signed long>(den))
    {
        if (den == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
        q_.canonicalize();
    }

    Rational(const mpz_class& num, const mpz_class& den) : q_(num, den)
    {
        if (den == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
        q_.canonicalize();
    }

    /** Parses "a" or "a/b" with optional leading minus, base 10. */
    static Rational parse(const std::string& text)
    {
        if (!looks_like_rational(text))
            throw Error(ErrorCode::ParseError, "bad rational literal '" + text + "'");
        mpq_class q;
        if (q.set_str(text, 10) != 0)
            throw Error(ErrorCode::ParseError, "bad rational literal '" + text + "'");
        if (q.get_den() == 0)
            throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
        q.canonicalize();
        Rational r;
        r.q_ = q;
        return r;
    }

    std::string str() const { return q_.get_str(); }

    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    int sign() const { return sgn(q_); }

    Rational operator-() const
    {
        Rational r;
        r.q_ = -q_;
        return r;
    }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }

    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "rational division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) >= 0; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.q_; }

    friend Rational abs(const Rational& a)
    {
        Rational r;
        r.q_ = ::abs(a.q_);
        return r;
    }

  private:
    static bool looks_like_rational(const std::string& s)
    {
        std::size_t i = 0, n = s.size();
        auto digits = [&](std::size_t& j) {
            std::size_t start = j;
            while (j < n && s[j] >= '0' && s[j] <= '9') ++j;
            return j > start;
        };
        if (i < n && s[i] == '-') ++i;
        if (!digits(i)) return false;
        if (i == n) return true;
        if (s[i] != '/') return false;
        ++i;
        if (i < n && s[i] == '-') ++i;  // tolerated on input, canonicalized away
        if (!digits(i)) return false;
        return i == n;
    }

    mpq_class q_;
};

}  // namespace simorth

namespace Eigen {

template <>
struct NumTraits<simorth::Rational> : GenericNumTraits<simorth::Rational> {
    typedef simorth::Rational Real;
    typedef simorth::Rational NonInteger;
    typedef simorth::Rational Nested;

    static inline Real epsilon() { return simorth::Rational(0); }
    static inline Real dummy_precision() { return simorth::Rational(0); }
    static inline int digits10() { return 0; }

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 150,
        MulCost = 100
    };
};

}  // namespace Eigen

#endif
