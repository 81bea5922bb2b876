#ifndef SIMORTH_POLYNOMIAL_HPP
#define SIMORTH_POLYNOMIAL_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "simorth/error.hpp"

namespace simorth {

/**
 * Dense univariate polynomial over Z in the variable t.
 *
 * Coefficients are stored in ascending degree with no trailing zeros;
 * the zero polynomial has an empty coefficient vector and degree -1.
 * This is the building block for the rational-function scalar; all the
 * gcd machinery below (content, primitive part, pseudo-remainder
 * sequence) exists so fractions can be kept reduced.
 */
class IntPoly {
  public:
    IntPoly() = default;
    IntPoly(long c)
    {
        if (c != 0) c_.push_back(mpz_class(static_cast<signed long>(c)));
    }
    explicit IntPoly(const mpz_class& c)
    {
        if (c != 0) c_.push_back(c);
    }
    explicit IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

    static IntPoly monomial(const mpz_class& coeff, std::size_t degree)
    {
        if (coeff == 0) return IntPoly();
        std::vector<mpz_class> c(degree + 1);
        c[degree] = coeff;
        return IntPoly(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    mpz_class leading_coefficient() const { return c_.empty() ? mpz_class(0) : c_.back(); }

    mpz_class coefficient(std::size_t k) const
    {
        return k < c_.size() ? c_[k] : mpz_class(0);
    }

    const std::vector<mpz_class>& coefficients() const { return c_; }

    bool operator==(const IntPoly& o) const { return c_ == o.c_; }
    bool operator!=(const IntPoly& o) const { return !(*this == o); }

    IntPoly operator-() const
    {
        IntPoly r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b)
    {
        std::vector<mpz_class> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coefficient(i) + b.coefficient(i);
        return IntPoly(std::move(c));
    }

    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return IntPoly();
        std::vector<mpz_class> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return IntPoly(std::move(c));
    }

    friend IntPoly operator*(const mpz_class& s, const IntPoly& a)
    {
        IntPoly r(a);
        for (auto& x : r.c_) x *= s;
        r.trim();
        return r;
    }

    /** Nonnegative gcd of all coefficients; 0 for the zero polynomial. */
    mpz_class content() const
    {
        mpz_class g = 0;
        for (const auto& x : c_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    IntPoly primitive_part() const
    {
        if (is_zero()) return IntPoly();
        mpz_class g = content();
        IntPoly r(*this);
        for (auto& x : r.c_) x /= g;
        return r;
    }

    /**
     * Pseudo-remainder of a by b: repeatedly cancels the leading term
     * after scaling by lc(b). Content-laden but exact over Z.
     */
    static IntPoly pseudo_remainder(IntPoly a, const IntPoly& b)
    {
        if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "pseudo-remainder by zero");
        const mpz_class bl = b.leading_coefficient();
        while (!a.is_zero() && a.degree() >= b.degree()) {
            IntPoly shifted = monomial(a.leading_coefficient(), a.degree() - b.degree());
            a = bl * a - shifted * b;
        }
        return a;
    }

    /** Full gcd over Z[t]: primitive PRS times the content gcd, lc > 0. */
    static IntPoly gcd(const IntPoly& a, const IntPoly& b)
    {
        if (a.is_zero()) return positive_lc(b);
        if (b.is_zero()) return positive_lc(a);
        mpz_class c;
        mpz_class ca = a.content(), cb = b.content();
        mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
        IntPoly A = a.primitive_part(), B = b.primitive_part();
        while (!B.is_zero()) {
            IntPoly R = pseudo_remainder(A, B);
            if (!R.is_zero()) R = R.primitive_part();
            A = B;
            B = R;
        }
        return c * positive_lc(A);
    }

    /** Exact division; the divisor must divide in Z[t]. */
    static IntPoly divide_exact(const IntPoly& a, const IntPoly& b)
    {
        if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
        if (a.is_zero()) return IntPoly();
        std::vector<mpq_class> rem(a.c_.size());
        for (std::size_t i = 0; i < a.c_.size(); ++i) rem[i] = a.c_[i];
        const int db = b.degree();
        const mpq_class bl(b.leading_coefficient());
        std::vector<mpq_class> q(a.c_.size() - db, mpq_class(0));
        for (int k = a.degree(); k >= db; --k) {
            mpq_class qk = rem[k] / bl;
            q[k - db] = qk;
            if (qk != 0)
                for (int j = 0; j <= db; ++j) rem[k - db + j] -= qk * mpq_class(b.c_[j]);
        }
        for (const auto& r : rem)
            if (r != 0) throw Error(ErrorCode::InvalidArgument, "inexact polynomial division");
        std::vector<mpz_class> qi(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i].get_den() != 1)
                throw Error(ErrorCode::InvalidArgument, "inexact polynomial division");
            qi[i] = q[i].get_num();
        }
        return IntPoly(std::move(qi));
    }

    /** Canonical text form, descending degree, e.g. "2*t^3-t+1". */
    std::string str() const
    {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            const mpz_class& c = c_[k];
            if (c == 0) continue;
            mpz_class m = ::abs(c);
            if (out.empty())
                out += (c < 0 ? "-" : "");
            else
                out += (c < 0 ? "-" : "+");
            if (k == 0) {
                out += m.get_str();
            } else {
                if (m != 1) out += m.get_str() + "*";
                out += "t";
                if (k >= 2) out += "^" + std::to_string(k);
            }
        }
        return out;
    }

    /** Parses the canonical text form; spaces are ignored. */
    static IntPoly parse(const std::string& text)
    {
        std::string s;
        s.reserve(text.size());
        for (char ch : text)
            if (ch != ' ') s.push_back(ch);
        if (s.empty()) throw Error(ErrorCode::ParseError, "empty polynomial literal");

        std::vector<mpz_class> coeffs;
        std::size_t i = 0;
        bool first = true;
        while (i < s.size()) {
            int sign = 1;
            if (s[i] == '+' || s[i] == '-') {
                sign = s[i] == '-' ? -1 : 1;
                ++i;
            } else if (!first) {
                throw Error(ErrorCode::ParseError, "missing operator in '" + text + "'");
            }
            first = false;
            if (i >= s.size()) throw Error(ErrorCode::ParseError, "dangling sign in '" + text + "'");

            mpz_class coeff = 1;
            bool saw_coeff = false;
            if (s[i] >= '0' && s[i] <= '9') {
                std::size_t start = i;
                while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
                coeff = mpz_class(s.substr(start, i - start));
                saw_coeff = true;
                if (i < s.size() && s[i] == '*') {
                    ++i;
                    if (i >= s.size() || s[i] != 't')
                        throw Error(ErrorCode::ParseError, "expected t after * in '" + text + "'");
                }
            }
            std::size_t deg = 0;
            if (i < s.size() && s[i] == 't') {
                ++i;
                deg = 1;
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    if (i >= s.size() || s[i] < '0' || s[i] > '9')
                        throw Error(ErrorCode::ParseError, "bad exponent in '" + text + "'");
                    std::size_t d = 0;
                    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
                        d = d * 10 + static_cast<std::size_t>(s[i] - '0');
                        if (d > 4096) throw Error(ErrorCode::ParseError, "exponent too large");
                        ++i;
                    }
                    deg = d;
                }
            } else if (!saw_coeff) {
                throw Error(ErrorCode::ParseError, "expected term in '" + text + "'");
            }
            if (coeffs.size() < deg + 1) coeffs.resize(deg + 1, mpz_class(0));
            coeffs[deg] += sign * coeff;
        }
        return IntPoly(std::move(coeffs));
    }

  private:
    static IntPoly positive_lc(const IntPoly& a)
    {
        if (!a.is_zero() && a.leading_coefficient() < 0) return -a;
        return a;
    }

    void trim()
    {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<mpz_class> c_;
};

}  // namespace simorth

#endif
