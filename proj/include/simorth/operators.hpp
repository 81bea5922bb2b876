#ifndef SIMORTH_OPERATORS_HPP
#define SIMORTH_OPERATORS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simorth/family.hpp"

namespace simorth {

/**
 * Representing operator of f1 against a base form f0 with rad(f0)
 * contained in rad(f1): the matrix P with G0 P = G1, P vanishing on
 * rad(f0) and mapping into the coordinate complement W of rad(f0).
 *
 * The canonical zero-free-variable solution of G0 P = G1 lives on the
 * pivot columns of G0, which need not be W; the columns are therefore
 * reduced modulo rad(f0) afterwards. Columns over W and vanishing on
 * the radical pin P down uniquely.
 */
template <typename Scalar>
Matrix<Scalar> represent(const BilinearForm<Scalar>& f0, const BilinearForm<Scalar>& f1)
{
    if (f0.dimension() != f1.dimension())
        throw Error(ErrorCode::InvalidArgument, "forms live on different spaces");
    auto solved = solve_matrix_equation(f0.gram(), f1.gram());
    if (!solved)
        throw Error(ErrorCode::RadicalNotContained,
                    "rad(base) is not contained in rad(member); no representing operator");
    Matrix<Scalar> p = std::move(*solved);

    Subspace<Scalar> rad0 = radical(f0);
    const auto& pivots = rad0.pivot_coordinates();
    for (Eigen::Index col = 0; col < p.cols(); ++col) {
        for (std::size_t j = 0; j < pivots.size(); ++j) {
            const Scalar c = p(pivots[j], col);
            if (!c.is_zero()) p.col(col) -= c * rad0.basis().col(static_cast<Eigen::Index>(j));
        }
    }

    // Postconditions, kept always-on; these are exact and cheap.
    Matrix<Scalar> g0p = f0.gram() * p;
    if (!matrices_equal(g0p, f1.gram()))
        throw Error(ErrorCode::InternalDisagreement, "representing operator: G0 P != G1");
    if (!matrices_equal(Matrix<Scalar>(p.transpose() * f0.gram()), g0p))
        throw Error(ErrorCode::InternalDisagreement, "representing operator not self-adjoint");
    if (rad0.dimension() > 0) {
        Matrix<Scalar> on_radical = p * rad0.basis();
        if (!is_zero_matrix(on_radical))
            throw Error(ErrorCode::InternalDisagreement,
                        "representing operator does not vanish on the radical");
        for (Eigen::Index pc : pivots)
            for (Eigen::Index col = 0; col < p.cols(); ++col)
                if (!p(pc, col).is_zero())
                    throw Error(ErrorCode::InternalDisagreement,
                                "representing operator does not map into the complement");
    }
    return p;
}

/** One joint root: the eigenvalue tuple and its ambient eigenspace. */
template <typename Scalar>
struct RootDatum {
    std::vector<Scalar> values;
    Subspace<Scalar> space;
};

enum class DecompositionFailureKind {
    EigenvaluesMissing,  // char poly does not split over the field
    Defective,           // geometric multiplicities fall short
    NotInvariant         // a refinement piece is not operator-invariant
};

template <typename Scalar>
struct DecompositionFailure {
    DecompositionFailureKind kind;
    std::size_t operator_index;
    Subspace<Scalar> piece;
};

template <typename Scalar>
struct RootDecomposition {
    bool ok = false;
    std::vector<RootDatum<Scalar>> roots;
    std::optional<DecompositionFailure<Scalar>> failure;
};

/**
 * Iterative refinement into joint eigenspaces: operators are processed
 * in order, pieces in their current canonical order, eigenvalues
 * ascending, so the output is deterministic. A failure carries the
 * offending operator and piece; non-invariance of a piece is itself a
 * valid disproof, since pieces are invariant whenever the operators are
 * simultaneously diagonalizable.
 */
template <typename Scalar>
RootDecomposition<Scalar> joint_root_decomposition(const std::vector<Matrix<Scalar>>& ops,
                                                   Eigen::Index n,
                                                   const FieldDescriptor& field)
{
    RootDecomposition<Scalar> out;
    std::vector<RootDatum<Scalar>> pieces;
    if (n > 0) pieces.push_back(RootDatum<Scalar>{{}, Subspace<Scalar>::full(n)});

    for (std::size_t t = 0; t < ops.size(); ++t) {
        const Matrix<Scalar>& op = ops[t];
        if (op.rows() != n || op.cols() != n)
            throw Error(ErrorCode::InvalidArgument, "operator dimension mismatch");
        std::vector<RootDatum<Scalar>> next;
        for (const RootDatum<Scalar>& piece : pieces) {
            const Matrix<Scalar>& b = piece.space.basis();
            auto restricted = solve_matrix_equation(b, Matrix<Scalar>(op * b));
            if (!restricted) {
                out.failure = DecompositionFailure<Scalar>{
                    DecompositionFailureKind::NotInvariant, t, piece.space};
                return out;
            }
            DensePoly<Scalar> chi = char_poly(*restricted);
            auto roots = roots_in_field(chi, field);
            int algebraic = 0;
            for (const auto& r : roots) algebraic += r.second;
            if (algebraic < chi.degree()) {
                out.failure = DecompositionFailure<Scalar>{
                    DecompositionFailureKind::EigenvaluesMissing, t, piece.space};
                return out;
            }
            Eigen::Index geometric = 0;
            std::vector<RootDatum<Scalar>> split;
            for (const auto& [lambda, mult] : roots) {
                Subspace<Scalar> inner = eigenspace(*restricted, lambda);
                geometric += inner.dimension();
                RootDatum<Scalar> datum;
                datum.values = piece.values;
                datum.values.push_back(lambda);
                datum.space = Subspace<Scalar>::from_columns(Matrix<Scalar>(b * inner.basis()));
                split.push_back(std::move(datum));
            }
            if (geometric < piece.space.dimension()) {
                out.failure = DecompositionFailure<Scalar>{
                    DecompositionFailureKind::Defective, t, piece.space};
                return out;
            }
            for (auto& s : split) next.push_back(std::move(s));
        }
        pieces = std::move(next);
    }

    out.ok = true;
    out.roots = std::move(pieces);
    return out;
}

template <typename Scalar>
struct OrthogonalityReport {
    bool ok = true;
    Matrix<Scalar> scalars;  // members x roots; restriction ratios
    std::string detail;
};

/**
 * Verifies that distinct root spaces pair to zero under every member
 * (and the base), and that on each root space every member restricts to
 * the base form scaled by the root's eigenvalue. Returns the full
 * member-by-root scalar table; the base member's row is all ones.
 */
template <typename Scalar>
OrthogonalityReport<Scalar> verify_pairwise_orthogonality(
    const std::vector<Matrix<Scalar>>& member_grams,
    const Matrix<Scalar>& base_gram,
    std::optional<std::size_t> base_member,
    const std::vector<RootDatum<Scalar>>& roots)
{
    OrthogonalityReport<Scalar> report;
    const std::size_t m = member_grams.size();
    const std::size_t r = roots.size();
    report.scalars = Matrix<Scalar>::Constant(static_cast<Eigen::Index>(m),
                                              static_cast<Eigen::Index>(r), Scalar(0));

    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a + 1; b < r; ++b) {
            if (roots[a].values == roots[b].values) {
                report.ok = false;
                report.detail = "duplicate root tuple";
                return report;
            }
        }
    }

    auto cross_zero = [&](const Matrix<Scalar>& gram) {
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b) {
                Matrix<Scalar> cross =
                    roots[a].space.basis().transpose() * gram * roots[b].space.basis();
                if (!is_zero_matrix(cross)) return false;
            }
        return true;
    };
    if (!cross_zero(base_gram)) {
        report.ok = false;
        report.detail = "root spaces are not orthogonal under the base form";
        return report;
    }

    for (std::size_t i = 0; i < m; ++i) {
        std::size_t op_pos = 0;
        for (std::size_t a = 0; a < r; ++a) {
            Scalar c = Scalar(1);
            if (!(base_member && *base_member == i)) {
                // Operator positions skip the base member.
                op_pos = i - ((base_member && *base_member < i) ? 1 : 0);
                c = roots[a].values[op_pos];
            }
            report.scalars(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = c;
            Matrix<Scalar> ri = congruent_gram(member_grams[i], roots[a].space.basis());
            Matrix<Scalar> r0 = congruent_gram(base_gram, roots[a].space.basis());
            if (!matrices_equal(ri, Matrix<Scalar>(c * r0))) {
                report.ok = false;
                report.detail = "restriction is not the scaled base form";
                return report;
            }
        }
        if (!cross_zero(member_grams[i])) {
            report.ok = false;
            report.detail = "root spaces are not pairwise orthogonal under member " +
                            std::to_string(i);
            return report;
        }
    }
    return report;
}

}  // namespace simorth

#endif
