#ifndef SIMORTH_HYPERREAL_HPP
#define SIMORTH_HYPERREAL_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simorth/pipeline.hpp"

namespace simorth {

/**
 * Order-of-growth classification of a rational function read as the
 * sequence i ↦ x(i) for large integers i: finite when the numerator
 * degree does not exceed the denominator degree, infinitesimal when it
 * is strictly smaller (the sequence tends to zero), and unbounded
 * otherwise. The standard part of a finite value is its limit: the
 * ratio of leading coefficients when the degrees tie, else zero.
 */
struct HyperClass {
    bool finite = false;
    bool infinitesimal = false;
    std::optional<Rational> st;  // empty exactly when unbounded
};

inline HyperClass hyper_classify(const RationalFunction& x)
{
    HyperClass out;
    const int num_deg = x.numerator().degree();
    const int den_deg = x.denominator().degree();
    if (x.numerator().is_zero() || num_deg < den_deg) {
        out.finite = true;
        out.infinitesimal = true;
        out.st = Rational(0);
    } else if (num_deg == den_deg) {
        out.finite = true;
        out.st = Rational(x.numerator().leading_coefficient(),
                          x.denominator().leading_coefficient());
    }
    return out;
}

/**
 * A family indexed by large integers through one ℚ(t) Gram matrix is
 * bounded when every entry stays finite; bilinearity over the fixed
 * basis then bounds every pairing.
 */
inline bool is_bounded_family(const BilinearForm<RationalFunction>& f)
{
    for (Eigen::Index i = 0; i < f.dimension(); ++i)
        for (Eigen::Index j = 0; j < f.dimension(); ++j)
            if (!hyper_classify(f.gram()(i, j)).finite) return false;
    return true;
}

/** Entrywise limits of a bounded family's Gram matrix. */
inline Matrix<Rational> st_form(const BilinearForm<RationalFunction>& f)
{
    const Eigen::Index n = f.dimension();
    Matrix<Rational> st(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            HyperClass c = hyper_classify(f.gram()(i, j));
            if (!c.st)
                throw Error(ErrorCode::UnboundedFamily,
                            "Gram entry grows without bound; no limit form");
            st(i, j) = *c.st;
        }
    return st;
}

namespace detail {

/**
 * Negligibility constraints without taking limits: a rational vector x
 * is negligible iff every entry of xᵀ·gram_t is infinitesimal. Over the
 * column's common denominator D_k, entry k is Σ_j x_j·M_jk(t) / D_k(t),
 * infinitesimal iff every t-coefficient of the numerator at degree ≥
 * deg(D_k) vanishes — one ℚ-linear constraint on x per such degree.
 */
inline Matrix<Rational> negligibility_constraints(const BilinearForm<RationalFunction>& f)
{
    const Eigen::Index n = f.dimension();
    std::vector<std::vector<Rational>> rows;
    for (Eigen::Index k = 0; k < n; ++k) {
        IntPoly common(1);
        for (Eigen::Index j = 0; j < n; ++j)
            common = common * f.gram()(j, k).denominator();
        std::vector<IntPoly> numerators(static_cast<std::size_t>(n));
        int max_deg = -1;
        for (Eigen::Index j = 0; j < n; ++j) {
            const RationalFunction& g = f.gram()(j, k);
            numerators[static_cast<std::size_t>(j)] =
                g.numerator() * IntPoly::divide_exact(common, g.denominator());
            max_deg = std::max(max_deg, numerators[static_cast<std::size_t>(j)].degree());
        }
        for (int e = common.degree(); e <= max_deg; ++e) {
            std::vector<Rational> row(static_cast<std::size_t>(n));
            for (Eigen::Index j = 0; j < n; ++j)
                row[static_cast<std::size_t>(j)] =
                    Rational(numerators[static_cast<std::size_t>(j)].coefficient(
                        static_cast<std::size_t>(e)));
            rows.push_back(std::move(row));
        }
    }
    Matrix<Rational> a = Matrix<Rational>::Constant(static_cast<Eigen::Index>(rows.size()), n,
                                                    Rational(0));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (Eigen::Index j = 0; j < n; ++j)
            a(static_cast<Eigen::Index>(r), j) = rows[r][static_cast<std::size_t>(j)];
    return a;
}

}  // namespace detail

/**
 * Rational vectors whose pairing with the whole space is infinitesimal.
 * Computed along two independent routes — the radical of the limit form
 * and the coefficient constraints of the ℚ(t) Gram matrix — which must
 * agree exactly; a mismatch is an internal bug, never expected.
 */
inline Subspace<Rational> negligible_subspace(const BilinearForm<RationalFunction>& f)
{
    if (!is_bounded_family(f))
        throw Error(ErrorCode::UnboundedFamily, "negligibility needs a bounded family");

    Subspace<Rational> via_limit =
        Subspace<Rational>::from_columns(kernel(Matrix<Rational>(st_form(f))));
    Subspace<Rational> via_coefficients =
        Subspace<Rational>::from_columns(kernel(detail::negligibility_constraints(f)));
    if (!(via_limit == via_coefficients))
        throw Error(ErrorCode::InternalDisagreement,
                    "negligible subspace: limit route and coefficient route differ");
    return via_limit;
}

/**
 * Item-by-item report for a bounded family and an optional constant
 * diagonalizing basis: (i) the negligible subspace is the radical of
 * the limit form; (ii) a zero negligible subspace forces the limit form
 * nondegenerate; (iii) the basis also diagonalizes the limit form, so
 * the family enlarged by it is simultaneously orthogonalized; (iv) the
 * same basis, read as diagonalizing the enlarged family, diagonalizes
 * the original. Items iii/iv are absent without a certificate.
 */
struct WweReport {
    bool negligible_is_limit_radical = false;   // (i)
    bool robust_implies_nondegenerate = false;  // (ii)
    std::optional<bool> certificate_diagonalizes_limit;     // (iii)
    std::optional<bool> enlarged_certificate_covers_family;  // (iv)
};

inline WweReport check_wwe(const BilinearForm<RationalFunction>& f,
                           const std::optional<OrthoCertificate<RationalFunction>>& certificate)
{
    WweReport report;
    Subspace<Rational> neg = negligible_subspace(f);  // cross-asserted internally
    Matrix<Rational> st = st_form(f);
    Subspace<Rational> st_rad =
        Subspace<Rational>::from_columns(kernel(Matrix<Rational>(st)));
    report.negligible_is_limit_radical = neg == st_rad;
    report.robust_implies_nondegenerate = neg.dimension() > 0 || st_rad.dimension() == 0;

    if (certificate) {
        const Matrix<RationalFunction>& basis = certificate->basis;
        if (basis.rows() != f.dimension() || basis.cols() != f.dimension())
            throw Error(ErrorCode::InvalidArgument, "certificate dimension mismatch");
        for (Eigen::Index i = 0; i < basis.rows(); ++i)
            for (Eigen::Index j = 0; j < basis.cols(); ++j)
                if (!basis(i, j).is_constant())
                    throw Error(ErrorCode::CertificateNotConstant,
                                "certificate basis entry depends on the index variable");
        if (!is_invertible(basis))
            throw Error(ErrorCode::InvalidArgument, "certificate basis is not invertible");

        auto is_diagonal = [](const auto& m) {
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index j = 0; j < m.cols(); ++j)
                    if (i != j && !m(i, j).is_zero()) return false;
            return true;
        };
        Matrix<RationalFunction> family_diag = congruent_gram(f.gram(), basis);
        if (!is_diagonal(family_diag))
            throw Error(ErrorCode::InvalidArgument,
                        "certificate does not diagonalize the family");

        Matrix<Rational> basis_q(basis.rows(), basis.cols());
        for (Eigen::Index i = 0; i < basis.rows(); ++i)
            for (Eigen::Index j = 0; j < basis.cols(); ++j)
                basis_q(i, j) = basis(i, j).constant_value();
        report.certificate_diagonalizes_limit = is_diagonal(congruent_gram(st, basis_q));

        // With both checks in hand, the same constant basis diagonalizes
        // the enlarged pair {gram_t, limit form}, and conversely covers
        // the original family.
        report.enlarged_certificate_covers_family =
            *report.certificate_diagonalizes_limit && is_diagonal(family_diag);
    }
    return report;
}

}  // namespace simorth

#endif
