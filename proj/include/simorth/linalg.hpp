#ifndef SIMORTH_LINALG_HPP
#define SIMORTH_LINALG_HPP

#include <Eigen/Core>
#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "simorth/error.hpp"
#include "simorth/fields.hpp"

namespace simorth {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
bool matrices_equal(const Matrix<Scalar>& a, const Matrix<Scalar>& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (!(a(i, j) == b(i, j))) return false;
    return true;
}

template <typename Scalar>
bool is_zero_matrix(const Matrix<Scalar>& a)
{
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) return false;
    return true;
}

/**
 * In-place reduced row echelon form with exact field arithmetic.
 * Pivots are the first nonzero entry scanning down each column, so the
 * result is canonical: equal row spaces yield equal RREF matrices.
 *
 * @returns the pivot column indices, one per nonzero row, ascending.
 */
template <typename Scalar>
std::vector<Eigen::Index> rref_in_place(Matrix<Scalar>& m)
{
    std::vector<Eigen::Index> pivots;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
        Eigen::Index sel = -1;
        for (Eigen::Index r = row; r < m.rows(); ++r) {
            if (!m(r, col).is_zero()) {
                sel = r;
                break;
            }
        }
        if (sel < 0) continue;
        if (sel != row) m.row(sel).swap(m.row(row));
        Scalar inv = Scalar(1) / m(row, col);
        for (Eigen::Index c = col; c < m.cols(); ++c) m(row, c) = m(row, c) * inv;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col).is_zero()) continue;
            Scalar f = m(r, col);
            for (Eigen::Index c = col; c < m.cols(); ++c)
                m(r, c) = m(r, c) - f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <typename Scalar>
Eigen::Index rank(Matrix<Scalar> m)
{
    return static_cast<Eigen::Index>(rref_in_place(m).size());
}

/**
 * Canonical kernel basis: one column per free column of M, with that
 * free coordinate 1 and every other free coordinate 0.
 */
template <typename Scalar>
Matrix<Scalar> kernel(Matrix<Scalar> m)
{
    const Eigen::Index n = m.cols();
    std::vector<Eigen::Index> pivots = rref_in_place(m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (Eigen::Index p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;

    Eigen::Index k = n - static_cast<Eigen::Index>(pivots.size());
    Matrix<Scalar> basis = Matrix<Scalar>::Constant(n, k, Scalar(0));
    Eigen::Index out = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (is_pivot[static_cast<std::size_t>(j)]) continue;
        basis(j, out) = Scalar(1);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            basis(pivots[r], out) = -m(static_cast<Eigen::Index>(r), j);
        ++out;
    }
    return basis;
}

/**
 * Canonical solution of A X = B: RREF of the augmented matrix with all
 * free variables set to zero. Returns nothing when inconsistent.
 */
template <typename Scalar>
std::optional<Matrix<Scalar>> solve_matrix_equation(const Matrix<Scalar>& a,
                                                    const Matrix<Scalar>& b)
{
    if (a.rows() != b.rows())
        throw Error(ErrorCode::InvalidArgument, "solve: row counts differ");
    const Eigen::Index n = a.cols();
    Matrix<Scalar> aug(a.rows(), n + b.cols());
    aug << a, b;
    std::vector<Eigen::Index> pivots = rref_in_place(aug);
    // A pivot landing in the augmented block certifies inconsistency.
    if (!pivots.empty() && pivots.back() >= n) return std::nullopt;
    Matrix<Scalar> x = Matrix<Scalar>::Constant(n, b.cols(), Scalar(0));
    for (std::size_t r = 0; r < pivots.size(); ++r)
        for (Eigen::Index c = 0; c < b.cols(); ++c)
            x(pivots[r], c) = aug(static_cast<Eigen::Index>(r), n + c);
    return x;
}

template <typename Scalar>
Matrix<Scalar> inverse(const Matrix<Scalar>& m)
{
    if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "inverse of non-square");
    Matrix<Scalar> aug(m.rows(), 2 * m.cols());
    aug << m, Matrix<Scalar>::Identity(m.rows(), m.cols());
    std::vector<Eigen::Index> pivots = rref_in_place(aug);
    // A pivot in the identity block means the left block lost rank.
    if (static_cast<Eigen::Index>(pivots.size()) != m.rows() || pivots.back() >= m.cols())
        throw Error(ErrorCode::InvalidArgument, "matrix is singular");
    return aug.rightCols(m.cols());
}

template <typename Scalar>
bool is_invertible(const Matrix<Scalar>& m)
{
    return m.rows() == m.cols() && rank(m) == m.rows();
}

/**
 * Subspace of a fixed ambient coordinate space, stored with the
 * RREF-canonical basis (basis vectors as columns; transposed they form
 * an RREF matrix with no zero rows). Equal subspaces compare equal
 * entrywise. Immutable after construction.
 */
template <typename Scalar>
class Subspace {
  public:
    Subspace() : ambient_(0), basis_(0, 0) {}

    static Subspace zero(Eigen::Index ambient)
    {
        Subspace s;
        s.ambient_ = ambient;
        s.basis_ = Matrix<Scalar>(ambient, 0);
        return s;
    }

    static Subspace full(Eigen::Index ambient)
    {
        return from_columns(Matrix<Scalar>::Identity(ambient, ambient));
    }

    /** Span of the given columns, canonicalized. */
    static Subspace from_columns(const Matrix<Scalar>& cols)
    {
        Subspace s;
        s.ambient_ = cols.rows();
        Matrix<Scalar> rows = cols.transpose();
        std::vector<Eigen::Index> pivots = rref_in_place(rows);
        const Eigen::Index k = static_cast<Eigen::Index>(pivots.size());
        s.basis_ = Matrix<Scalar>(cols.rows(), k);
        for (Eigen::Index r = 0; r < k; ++r) s.basis_.col(r) = rows.row(r).transpose();
        s.pivots_ = std::move(pivots);
        return s;
    }

    Eigen::Index ambient_dimension() const { return ambient_; }
    Eigen::Index dimension() const { return basis_.cols(); }
    const Matrix<Scalar>& basis() const { return basis_; }

    /** Leading coordinate of each basis vector, ascending. */
    const std::vector<Eigen::Index>& pivot_coordinates() const { return pivots_; }

    bool contains(const Vector<Scalar>& v) const
    {
        if (v.size() != ambient_) return false;
        Vector<Scalar> r = v;
        for (Eigen::Index j = 0; j < basis_.cols(); ++j) {
            const Scalar& c = r(pivots_[static_cast<std::size_t>(j)]);
            if (!c.is_zero()) r -= c * basis_.col(j);
        }
        for (Eigen::Index i = 0; i < r.size(); ++i)
            if (!r(i).is_zero()) return false;
        return true;
    }

    bool contains(const Subspace& other) const
    {
        if (other.ambient_ != ambient_) return false;
        for (Eigen::Index j = 0; j < other.basis_.cols(); ++j)
            if (!contains(Vector<Scalar>(other.basis_.col(j)))) return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b)
    {
        return a.ambient_ == b.ambient_ && matrices_equal(a.basis_, b.basis_);
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  private:
    Eigen::Index ambient_;
    Matrix<Scalar> basis_;
    std::vector<Eigen::Index> pivots_;
};

/**
 * Dense univariate polynomial over the field, ascending coefficients.
 * Just enough structure for characteristic polynomials and root work.
 */
template <typename Scalar>
struct DensePoly {
    std::vector<Scalar> c;  // c[0] + c[1] x + ...; no trailing zeros

    DensePoly() = default;
    explicit DensePoly(std::vector<Scalar> coeffs) : c(std::move(coeffs)) { trim(); }

    static DensePoly constant(const Scalar& s) { return DensePoly(std::vector<Scalar>{s}); }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    Scalar coefficient(std::size_t k) const { return k < c.size() ? c[k] : Scalar(0); }

    Scalar evaluate(const Scalar& x) const
    {
        Scalar acc = Scalar(0);
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
        return acc;
    }

    void trim()
    {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    friend DensePoly operator+(const DensePoly& a, const DensePoly& b)
    {
        std::vector<Scalar> out(std::max(a.c.size(), b.c.size()), Scalar(0));
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = a.coefficient(i) + b.coefficient(i);
        return DensePoly(std::move(out));
    }

    friend DensePoly operator-(const DensePoly& a, const DensePoly& b)
    {
        std::vector<Scalar> out(std::max(a.c.size(), b.c.size()), Scalar(0));
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = a.coefficient(i) - b.coefficient(i);
        return DensePoly(std::move(out));
    }

    friend DensePoly operator*(const DensePoly& a, const DensePoly& b)
    {
        if (a.is_zero() || b.is_zero()) return DensePoly();
        std::vector<Scalar> out(a.c.size() + b.c.size() - 1, Scalar(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
        return DensePoly(std::move(out));
    }

    friend DensePoly operator*(const Scalar& s, const DensePoly& a)
    {
        std::vector<Scalar> out(a.c);
        for (auto& x : out) x = s * x;
        return DensePoly(std::move(out));
    }

    /** Multiplication by x. */
    DensePoly shifted() const
    {
        if (is_zero()) return DensePoly();
        std::vector<Scalar> out(c.size() + 1, Scalar(0));
        for (std::size_t i = 0; i < c.size(); ++i) out[i + 1] = c[i];
        return DensePoly(std::move(out));
    }

    /** Exact division by (x - r); the remainder must vanish. */
    std::optional<DensePoly> deflate(const Scalar& r) const
    {
        if (is_zero()) return std::nullopt;
        std::vector<Scalar> q(c.size() - 1, Scalar(0));
        Scalar carry = Scalar(0);
        for (std::size_t k = c.size(); k-- > 1;) {
            carry = c[k] + r * carry;
            q[k - 1] = carry;
        }
        Scalar rem = c[0] + r * carry;
        if (!rem.is_zero()) return std::nullopt;
        return DensePoly(std::move(q));
    }
};

/**
 * Characteristic polynomial det(xI - M) by exact Hessenberg reduction:
 * similarity transforms with field division, then the standard leading
 * minor recurrence. Monic of degree n, ascending coefficients.
 */
template <typename Scalar>
DensePoly<Scalar> char_poly(Matrix<Scalar> h)
{
    if (h.rows() != h.cols())
        throw Error(ErrorCode::InvalidArgument, "characteristic polynomial of non-square");
    const Eigen::Index n = h.rows();
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        Eigen::Index sel = -1;
        for (Eigen::Index r = k + 1; r < n; ++r) {
            if (!h(r, k).is_zero()) {
                sel = r;
                break;
            }
        }
        if (sel < 0) continue;
        if (sel != k + 1) {
            h.row(sel).swap(h.row(k + 1));
            h.col(sel).swap(h.col(k + 1));
        }
        for (Eigen::Index i = k + 2; i < n; ++i) {
            if (h(i, k).is_zero()) continue;
            Scalar m = h(i, k) / h(k + 1, k);
            h.row(i) -= m * h.row(k + 1);
            h.col(k + 1) += m * h.col(i);
        }
    }

    std::vector<DensePoly<Scalar>> chi(static_cast<std::size_t>(n) + 1);
    chi[0] = DensePoly<Scalar>::constant(Scalar(1));
    for (Eigen::Index k = 1; k <= n; ++k) {
        DensePoly<Scalar> p = chi[k - 1].shifted() - h(k - 1, k - 1) * chi[k - 1];
        Scalar prod = Scalar(1);
        for (Eigen::Index i = k - 2; i >= 0; --i) {
            prod = prod * h(i + 1, i);
            if (!h(i, k - 1).is_zero())
                p = p - (h(i, k - 1) * prod) * chi[i];
        }
        chi[k] = std::move(p);
    }
    return chi[static_cast<std::size_t>(n)];
}

namespace detail {

/** Positive divisors of |n|, ascending; n must be nonzero. */
inline std::vector<mpz_class> positive_divisors(mpz_class n)
{
    n = ::abs(n);
    std::vector<mpz_class> small, large;
    for (mpz_class i = 1; i * i <= n; ++i) {
        if (n % i == 0) {
            small.push_back(i);
            if (i * i != n) large.push_back(n / i);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

/**
 * Canonical rational root order: ascending absolute value, positive
 * before negative on ties, so roots come out as 0, 1, -1, 2, -2, ...
 * matching the field's element enumeration.
 */
inline bool rational_root_order(const std::pair<Rational, int>& a,
                                const std::pair<Rational, int>& b)
{
    const Rational ma = abs(a.first), mb = abs(b.first);
    if (ma != mb) return ma < mb;
    return b.first < a.first;
}

}  // namespace detail

/**
 * Roots of p lying in the coefficient field, with multiplicities, in
 * the field's canonical enumeration order (0, 1, -1, 2, -2, ... over Q;
 * residues ascending over GF(p)). Over Q: rational-root method on the
 * cleared-denominator integer polynomial. Over GF(p): exhaustive scan.
 * Over Q(t): unsupported (no root-finding for the order at infinity).
 */
template <typename Scalar>
std::vector<std::pair<Scalar, int>> roots_in_field(const DensePoly<Scalar>& p,
                                                   const FieldDescriptor& d);

template <>
inline std::vector<std::pair<Rational, int>> roots_in_field(const DensePoly<Rational>& p,
                                                            const FieldDescriptor& d)
{
    ScalarTraits<Rational>::check(d);
    if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "roots of the zero polynomial");
    std::vector<std::pair<Rational, int>> roots;

    DensePoly<Rational> q = p;
    int zero_mult = 0;
    while (!q.is_zero() && q.c[0].is_zero()) {
        auto next = q.deflate(Rational(0));
        q = *next;
        ++zero_mult;
    }
    if (zero_mult > 0) roots.emplace_back(Rational(0), zero_mult);
    if (q.degree() < 1) {
        std::sort(roots.begin(), roots.end(), detail::rational_root_order);
        return roots;
    }

    // Clear denominators to an integer polynomial.
    mpz_class lcm = 1;
    for (const auto& c : q.c) {
        mpz_class den = c.denominator();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        lcm = lcm / g * den;
    }
    std::vector<mpz_class> ic(q.c.size());
    for (std::size_t i = 0; i < q.c.size(); ++i) {
        Rational scaled = q.c[i] * Rational(lcm);
        ic[i] = scaled.numerator();
    }

    std::vector<mpz_class> ps = detail::positive_divisors(ic.front());
    std::vector<mpz_class> qs = detail::positive_divisors(ic.back());
    for (const mpz_class& num : ps) {
        for (const mpz_class& den : qs) {
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            if (g != 1) continue;
            for (int sign : {1, -1}) {
                Rational cand(sign * num, den);
                if (!q.evaluate(cand).is_zero()) continue;
                int mult = 0;
                DensePoly<Rational> rest = q;
                while (true) {
                    auto next = rest.deflate(cand);
                    if (!next) break;
                    rest = *next;
                    ++mult;
                    if (rest.is_zero() || !rest.evaluate(cand).is_zero()) break;
                }
                roots.emplace_back(cand, mult);
            }
        }
    }
    std::sort(roots.begin(), roots.end(), detail::rational_root_order);
    return roots;
}

template <>
inline std::vector<std::pair<GFp, int>> roots_in_field(const DensePoly<GFp>& p,
                                                       const FieldDescriptor& d)
{
    ScalarTraits<GFp>::check(d);
    if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "roots of the zero polynomial");
    std::vector<std::pair<GFp, int>> roots;
    for (std::int64_t v = 0; v < d.p; ++v) {
        GFp cand(v, d.p);
        if (!p.evaluate(cand).is_zero()) continue;
        int mult = 0;
        DensePoly<GFp> rest = p;
        while (true) {
            auto next = rest.deflate(cand);
            if (!next) break;
            rest = *next;
            ++mult;
            if (rest.is_zero() || !rest.evaluate(cand).is_zero()) break;
        }
        roots.emplace_back(cand, mult);
    }
    return roots;  // scan order is already ascending
}

template <>
inline std::vector<std::pair<RationalFunction, int>> roots_in_field(
    const DensePoly<RationalFunction>&, const FieldDescriptor&)
{
    throw Error(ErrorCode::UnsupportedField, "root extraction over Q(t) is not supported");
}

/** Kernel of (M - lambda I) as a canonical subspace. */
template <typename Scalar>
Subspace<Scalar> eigenspace(const Matrix<Scalar>& m, const Scalar& lambda)
{
    Matrix<Scalar> shifted = m;
    for (Eigen::Index i = 0; i < m.rows(); ++i) shifted(i, i) = shifted(i, i) - lambda;
    return Subspace<Scalar>::from_columns(kernel(shifted));
}

}  // namespace simorth

#endif
