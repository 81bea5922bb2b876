#ifndef SIMORTH_GFP_HPP
#define SIMORTH_GFP_HPP

#include <Eigen/Core>
#include <cstdint>
#include <ostream>
#include <string>

#include "simorth/error.hpp"

namespace simorth {

/**
 * Prime-field scalar with the modulus carried per value.
 *
 * A modulus of 0 marks an "unattached" integer constant: Eigen and
 * integer literals materialize Scalar(0)/Scalar(1) without field
 * context, and such constants adopt the other operand's modulus on
 * first contact. Two values with distinct nonzero moduli never mix
 * (FieldMismatch). Attached values are stored reduced to [0, p).
 *
 * Moduli are restricted to primes below 2^31 so that sums and products
 * fit comfortably in the intermediate types used here.
 */
class GFp {
  public:
    GFp() : v_(0), p_(0) {}
    GFp(int v) : v_(v), p_(0) {}
    GFp(long v) : v_(v), p_(0) {}
    GFp(long long v) : v_(v), p_(0) {}

    GFp(std::int64_t v, std::int64_t p) : v_(v), p_(p)
    {
        if (p_ < 0) throw Error(ErrorCode::InvalidArgument, "negative modulus");
        reduce();
    }

    /** Parses an optionally signed decimal residue, reduced mod p. */
    static GFp parse(const std::string& text, std::int64_t p)
    {
        if (text.empty()) throw Error(ErrorCode::ParseError, "empty residue literal");
        std::size_t i = text[0] == '-' ? 1 : 0;
        if (i == text.size()) throw Error(ErrorCode::ParseError, "bad residue literal '" + text + "'");
        std::int64_t v = 0;
        for (; i < text.size(); ++i) {
            if (text[i] < '0' || text[i] > '9')
                throw Error(ErrorCode::ParseError, "bad residue literal '" + text + "'");
            v = v * 10 + (text[i] - '0');
            if (v >= (std::int64_t(1) << 62)) v %= p;  // keep reading, stay reduced
        }
        if (text[0] == '-') v = -v;
        return GFp(v, p);
    }

    std::int64_t value() const { return v_; }
    std::int64_t modulus() const { return p_; }
    bool attached() const { return p_ != 0; }
    bool is_zero() const { return v_ == 0; }

    std::string str() const { return std::to_string(v_); }

    GFp operator-() const { return GFp(p_ ? (v_ ? p_ - v_ : 0) : -v_, p_); }

    friend GFp operator+(const GFp& a, const GFp& b)
    {
        std::int64_t p = joint_modulus(a, b);
        return GFp(a.v_ + b.v_, p);
    }

    friend GFp operator-(const GFp& a, const GFp& b)
    {
        std::int64_t p = joint_modulus(a, b);
        return GFp(a.v_ - b.v_, p);
    }

    friend GFp operator*(const GFp& a, const GFp& b)
    {
        std::int64_t p = joint_modulus(a, b);
        if (p == 0) return GFp(a.v_ * b.v_, 0);
        __int128 prod = static_cast<__int128>(a.v_) * b.v_;
        return GFp(static_cast<std::int64_t>(prod % p), p);
    }

    friend GFp operator/(const GFp& a, const GFp& b)
    {
        std::int64_t p = joint_modulus(a, b);
        if (b.reduced_value(p) == 0)
            throw Error(ErrorCode::DivisionByZero, "division by zero residue");
        if (p == 0) {
            // Both operands are unattached constants; only unit divisors
            // keep the result an exact integer.
            if (b.v_ == 1) return a;
            if (b.v_ == -1) return -a;
            throw Error(ErrorCode::FieldMismatch, "residue division without a modulus");
        }
        return GFp(a.v_, p) * GFp(inverse_mod(b.reduced_value(p), p), p);
    }

    GFp& operator+=(const GFp& o) { *this = *this + o; return *this; }
    GFp& operator-=(const GFp& o) { *this = *this - o; return *this; }
    GFp& operator*=(const GFp& o) { *this = *this * o; return *this; }
    GFp& operator/=(const GFp& o) { *this = *this / o; return *this; }

    friend bool operator==(const GFp& a, const GFp& b)
    {
        std::int64_t p = joint_modulus(a, b);
        if (p == 0) return a.v_ == b.v_;
        return a.reduced_value(p) == b.reduced_value(p);
    }

    friend bool operator!=(const GFp& a, const GFp& b) { return !(a == b); }

    /** Canonical residue order; used only to sort eigenvalues stably. */
    friend bool operator<(const GFp& a, const GFp& b)
    {
        std::int64_t p = joint_modulus(a, b);
        if (p == 0) return a.v_ < b.v_;
        return a.reduced_value(p) < b.reduced_value(p);
    }

    friend std::ostream& operator<<(std::ostream& os, const GFp& a) { return os << a.v_; }

    friend GFp abs(const GFp& a) { return a; }

    static std::int64_t inverse_mod(std::int64_t a, std::int64_t p)
    {
        // Extended Euclid; a is reduced and nonzero, p prime.
        std::int64_t t = 0, new_t = 1, r = p, new_r = a;
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            std::int64_t tmp = t - q * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - q * new_r;
            r = new_r;
            new_r = tmp;
        }
        if (r != 1) throw Error(ErrorCode::DivisionByZero, "residue not invertible");
        return t < 0 ? t + p : t;
    }

  private:
    static std::int64_t joint_modulus(const GFp& a, const GFp& b)
    {
        if (a.p_ == b.p_) return a.p_;
        if (a.p_ == 0) return b.p_;
        if (b.p_ == 0) return a.p_;
        throw Error(ErrorCode::FieldMismatch, "mixed residue moduli " + std::to_string(a.p_) +
                                                  " and " + std::to_string(b.p_));
    }

    std::int64_t reduced_value(std::int64_t p) const
    {
        if (p == 0) return v_;
        std::int64_t r = v_ % p;
        return r < 0 ? r + p : r;
    }

    void reduce()
    {
        if (p_ != 0) v_ = reduced_value(p_);
    }

    std::int64_t v_;
    std::int64_t p_;
};

}  // namespace simorth

namespace Eigen {

template <>
struct NumTraits<simorth::GFp> : GenericNumTraits<simorth::GFp> {
    typedef simorth::GFp Real;
    typedef simorth::GFp NonInteger;
    typedef simorth::GFp Nested;

    static inline Real epsilon() { return simorth::GFp(); }
    static inline Real dummy_precision() { return simorth::GFp(); }
    static inline int digits10() { return 0; }

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 0,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 3,
        MulCost = 6
    };
};

}  // namespace Eigen

#endif
