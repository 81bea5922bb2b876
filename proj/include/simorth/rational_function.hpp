#ifndef SIMORTH_RATIONAL_FUNCTION_HPP
#define SIMORTH_RATIONAL_FUNCTION_HPP

#include <Eigen/Core>
#include <ostream>
#include <string>
#include <utility>

#include "simorth/error.hpp"
#include "simorth/polynomial.hpp"
#include "simorth/rational.hpp"

namespace simorth {

/**
 * Element of Q(t) as a reduced fraction of integer polynomials.
 *
 * Canonical form: gcd(num, den) = 1 over Z[t] (contents included) and
 * the denominator has positive leading coefficient. Zero is 0/1.
 *
 * Only the field structure lives here. The order at infinity, finiteness
 * and standard parts are deliberately kept in the hyperreal layer, so the
 * field axioms stay independent of any choice of order.
 */
class RationalFunction {
  public:
    RationalFunction() : num_(), den_(1) {}
    RationalFunction(int c) : num_(static_cast<long>(c)), den_(1) {}
    RationalFunction(long c) : num_(c), den_(1) {}

    explicit RationalFunction(const Rational& r)
        : num_(r.numerator()), den_(r.denominator())
    {
    }

    RationalFunction(IntPoly num, IntPoly den) : num_(std::move(num)), den_(std::move(den))
    {
        if (den_.is_zero())
            throw Error(ErrorCode::DivisionByZero, "rational function with zero denominator");
        reduce();
    }

    static RationalFunction t()
    {
        return RationalFunction(IntPoly::monomial(mpz_class(1), 1), IntPoly(1));
    }

    const IntPoly& numerator() const { return num_; }
    const IntPoly& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }

    /** True when the value is a constant polynomial ratio (t-free). */
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() <= 0; }

    /** The value as an element of Q; only valid when is_constant(). */
    Rational constant_value() const
    {
        if (!is_constant())
            throw Error(ErrorCode::InvalidArgument, "rational function is not constant");
        return Rational(num_.coefficient(0), den_.coefficient(0));
    }

    RationalFunction operator-() const
    {
        RationalFunction r(*this);
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b)
    {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }

    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b)
    {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }

    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b)
    {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }

    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b)
    {
        if (b.is_zero())
            throw Error(ErrorCode::DivisionByZero, "rational function division by zero");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    RationalFunction& operator+=(const RationalFunction& o) { *this = *this + o; return *this; }
    RationalFunction& operator-=(const RationalFunction& o) { *this = *this - o; return *this; }
    RationalFunction& operator*=(const RationalFunction& o) { *this = *this * o; return *this; }
    RationalFunction& operator/=(const RationalFunction& o) { *this = *this / o; return *this; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend bool operator!=(const RationalFunction& a, const RationalFunction& b)
    {
        return !(a == b);
    }

    /** Canonical text form: "num" when den = 1, else "(num)/(den)". */
    std::string str() const
    {
        if (den_ == IntPoly(1)) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

    /**
     * Parses "poly", "num/den", "(num)/(den)" and mixtures; the fraction
     * slash is the single '/' at parenthesis depth zero.
     */
    static RationalFunction parse(const std::string& text)
    {
        std::string s;
        s.reserve(text.size());
        for (char ch : text)
            if (ch != ' ') s.push_back(ch);
        if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational function literal");

        int depth = 0;
        std::size_t slash = std::string::npos;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            else if (s[i] == ')') {
                --depth;
                if (depth < 0) throw Error(ErrorCode::ParseError, "unbalanced parentheses");
            } else if (s[i] == '/' && depth == 0) {
                if (slash != std::string::npos)
                    throw Error(ErrorCode::ParseError, "multiple top-level '/' in '" + text + "'");
                slash = i;
            }
        }
        if (depth != 0) throw Error(ErrorCode::ParseError, "unbalanced parentheses");

        if (slash == std::string::npos)
            return RationalFunction(IntPoly::parse(strip_parens(s)), IntPoly(1));
        IntPoly num = IntPoly::parse(strip_parens(s.substr(0, slash)));
        IntPoly den = IntPoly::parse(strip_parens(s.substr(slash + 1)));
        if (den.is_zero())
            throw Error(ErrorCode::DivisionByZero, "rational function with zero denominator");
        return RationalFunction(std::move(num), std::move(den));
    }

    friend std::ostream& operator<<(std::ostream& os, const RationalFunction& r)
    {
        return os << r.str();
    }

    friend RationalFunction abs(const RationalFunction& a) { return a; }

  private:
    static std::string strip_parens(std::string s)
    {
        while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
            // Strip only if the parens actually match each other.
            int depth = 0;
            bool wraps = true;
            for (std::size_t i = 0; i + 1 < s.size(); ++i) {
                if (s[i] == '(') ++depth;
                else if (s[i] == ')') --depth;
                if (depth == 0) {
                    wraps = false;
                    break;
                }
            }
            if (!wraps) break;
            s = s.substr(1, s.size() - 2);
        }
        return s;
    }

    void reduce()
    {
        if (num_.is_zero()) {
            den_ = IntPoly(1);
            return;
        }
        IntPoly g = IntPoly::gcd(num_, den_);
        if (g != IntPoly(1)) {
            num_ = IntPoly::divide_exact(num_, g);
            den_ = IntPoly::divide_exact(den_, g);
        }
        if (den_.leading_coefficient() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }

    IntPoly num_;
    IntPoly den_;
};

}  // namespace simorth

namespace Eigen {

template <>
struct NumTraits<simorth::RationalFunction> : GenericNumTraits<simorth::RationalFunction> {
    typedef simorth::RationalFunction Real;
    typedef simorth::RationalFunction NonInteger;
    typedef simorth::RationalFunction Nested;

    static inline Real epsilon() { return simorth::RationalFunction(0); }
    static inline Real dummy_precision() { return simorth::RationalFunction(0); }
    static inline int digits10() { return 0; }

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 300,
        MulCost = 200
    };
};

}  // namespace Eigen

#endif
