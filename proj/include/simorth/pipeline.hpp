#ifndef SIMORTH_PIPELINE_HPP
#define SIMORTH_PIPELINE_HPP

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "simorth/operators.hpp"

namespace simorth {

/**
 * Witness that a form is alternating and nonzero on the whole requested
 * space, which blocks any orthogonal basis there: alternating forms stay
 * alternating under congruence, so a nonzero one is never diagonal.
 */
template <typename Scalar>
struct AlternatingObstruction {
    Subspace<Scalar> residual;
    Vector<Scalar> u;
    Vector<Scalar> v;  // <u, v> != 0 while all squares vanish
};

/**
 * Orthogonal basis of f restricted to s, by Gram-style descent: pick an
 * anisotropic vector (first diagonal hit, else the polarized u+w pair
 * when the characteristic allows it), split off its orthogonal
 * complement, recurse. In characteristic 2 a residual can go alternating
 * mid-descent even though the restricted form is diagonalizable; the
 * descent then rewrites its last anisotropic pick against a hyperbolic
 * pair and continues, so an obstruction is reported exactly when f is
 * alternating and nonzero on s itself. Columns are ambient vectors
 * spanning s.
 */
template <typename Scalar>
std::variant<Matrix<Scalar>, AlternatingObstruction<Scalar>> orthogonal_basis_of_form(
    const BilinearForm<Scalar>& f, const Subspace<Scalar>& s, const FieldDescriptor& field)
{
    const Eigen::Index n = f.dimension();
    Subspace<Scalar> current = s;
    Matrix<Scalar> result(n, s.dimension());
    Eigen::Index filled = 0;

    while (current.dimension() > 0) {
        const Matrix<Scalar> b = current.basis();
        Matrix<Scalar> gram = congruent_gram(f.gram(), b);
        const Eigen::Index k = b.cols();

        Eigen::Index diag = -1;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (!gram(j, j).is_zero()) {
                diag = j;
                break;
            }
        }

        Vector<Scalar> chosen;
        if (diag >= 0) {
            chosen = b.col(diag);
        } else {
            Eigen::Index pu = -1, pv = -1;
            for (Eigen::Index a = 0; a < k && pu < 0; ++a)
                for (Eigen::Index c = a + 1; c < k; ++c)
                    if (!gram(a, c).is_zero()) {
                        pu = a;
                        pv = c;
                        break;
                    }
            if (pu < 0) {
                // The form vanishes on the residual; any basis finishes it.
                result.rightCols(k) = b;
                filled += k;
                break;
            }
            if (field.characteristic() == 2) {
                if (filled == 0) {
                    // All diagonal values vanish, so the form is alternating
                    // on s itself; a nonzero alternating form stays
                    // alternating under congruence and is never diagonal.
                    AlternatingObstruction<Scalar> obstruction;
                    obstruction.residual = current;
                    obstruction.u = b.col(pu);
                    obstruction.v = b.col(pv);
                    return obstruction;
                }
                // The residual went alternating after at least one split, so
                // the greedy choice was at fault, not the form.  Merge the
                // last split-off vector v (non-isotropic by construction)
                // with the hyperbolic pair (u, w): the three vectors
                // v+u, v+rw, v+u+rw with r = <v,v>/<u,w> are pairwise
                // orthogonal, non-isotropic, and still orthogonal to every
                // earlier choice, and the residual shrinks by the plane
                // spanned by u and w.
                const Vector<Scalar> v = result.col(filled - 1);
                const Vector<Scalar> u = b.col(pu);
                const Vector<Scalar> w = b.col(pv);
                const Scalar ratio = f.evaluate(v, v) / gram(pu, pv);
                result.col(filled - 1) = v + u;
                result.col(filled) = v + Vector<Scalar>(w * ratio);
                result.col(filled + 1) = v + u + Vector<Scalar>(w * ratio);
                filled += 2;
                Matrix<Scalar> pairing(2, k);
                pairing.row(0) = u.transpose() * f.gram() * b;
                pairing.row(1) = w.transpose() * f.gram() * b;
                Matrix<Scalar> coefficients = kernel(pairing);
                current = Subspace<Scalar>::from_columns(Matrix<Scalar>(b * coefficients));
                continue;
            }
            chosen = b.col(pu) + b.col(pv);  // <v,v> = 2<u,w> != 0
        }
        result.col(filled) = chosen;
        ++filled;

        // Residual = current ∩ chosen^⊥, in canonical coordinates; the
        // pairing against chosen is nonzero on current, so the dimension
        // drops by exactly one and chosen itself is excluded.
        Matrix<Scalar> pairing_row = chosen.transpose() * f.gram() * b;  // 1 x k
        Matrix<Scalar> coefficients = kernel(pairing_row);
        current = Subspace<Scalar>::from_columns(Matrix<Scalar>(b * coefficients));
    }
    return result;
}

/** Full diagonalization data for one family against one base form. */
template <typename Scalar>
struct OrthoCertificate {
    Matrix<Scalar> basis;                     // invertible, columns are the new basis
    std::vector<Vector<Scalar>> diagonals;    // per member, length dim
    std::vector<RootDatum<Scalar>> roots;     // ambient joint root spaces
    Matrix<Scalar> scalars;                   // members x roots restriction ratios
    Eigen::Index radical_tail = 0;            // trailing columns spanning the radical
    std::optional<std::vector<Scalar>> combination;  // base coefficients, if adjoined
    std::optional<std::size_t> base_index;           // base member, if one was used
};

enum class PipelineFailureKind {
    EigenvaluesMissing,
    Defective,
    NotInvariant,
    NotDiagonalizable  // alternating residual in characteristic 2
};

inline const char* pipeline_failure_name(PipelineFailureKind k)
{
    switch (k) {
        case PipelineFailureKind::EigenvaluesMissing: return "eigenvalues_missing";
        case PipelineFailureKind::Defective: return "defective_eigenspaces";
        case PipelineFailureKind::NotInvariant: return "piece_not_invariant";
        case PipelineFailureKind::NotDiagonalizable: return "alternating_residual";
    }
    return "unknown";
}

template <typename Scalar>
struct PipelineFailure {
    PipelineFailureKind kind;
    std::optional<std::size_t> member;  // family index of the offending operator
    Subspace<Scalar> piece;
    std::string detail;
};

template <typename Scalar>
struct PipelineResult {
    std::optional<OrthoCertificate<Scalar>> certificate;
    std::optional<PipelineFailure<Scalar>> failure;
    bool ok() const { return certificate.has_value(); }
};

namespace detail {

/**
 * Shared core: diagonalize every member against a nondegenerate base
 * form (a member or an adjoined combination) on the full space.
 */
template <typename Scalar>
PipelineResult<Scalar> orthogonalize_with_base(const FormFamily<Scalar>& family,
                                               const BilinearForm<Scalar>& base,
                                               std::optional<std::size_t> base_member)
{
    PipelineResult<Scalar> result;
    const Eigen::Index n = family.dimension();

    std::vector<Matrix<Scalar>> ops;
    std::vector<std::size_t> op_member;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (base_member && *base_member == i) continue;
        ops.push_back(represent(base, family.members[i]));
        op_member.push_back(i);
    }

    RootDecomposition<Scalar> decomposition = joint_root_decomposition(ops, n, family.field);
    if (!decomposition.ok) {
        const auto& f = *decomposition.failure;
        PipelineFailureKind kind;
        switch (f.kind) {
            case DecompositionFailureKind::EigenvaluesMissing:
                kind = PipelineFailureKind::EigenvaluesMissing;
                break;
            case DecompositionFailureKind::Defective:
                kind = PipelineFailureKind::Defective;
                break;
            default:
                kind = PipelineFailureKind::NotInvariant;
                break;
        }
        result.failure = PipelineFailure<Scalar>{kind, op_member[f.operator_index], f.piece,
                                                 "joint eigenspace refinement failed"};
        return result;
    }

    OrthoCertificate<Scalar> cert;
    cert.basis = Matrix<Scalar>(n, n);
    Eigen::Index filled = 0;
    for (const RootDatum<Scalar>& root : decomposition.roots) {
        auto basis_or = orthogonal_basis_of_form(base, root.space, family.field);
        if (std::holds_alternative<AlternatingObstruction<Scalar>>(basis_or)) {
            auto& obstruction = std::get<AlternatingObstruction<Scalar>>(basis_or);
            result.failure = PipelineFailure<Scalar>{
                PipelineFailureKind::NotDiagonalizable, base_member, obstruction.residual,
                "base form is alternating and nonzero on a root space"};
            return result;
        }
        const Matrix<Scalar>& cols = std::get<Matrix<Scalar>>(basis_or);
        cert.basis.middleCols(filled, cols.cols()) = cols;
        filled += cols.cols();
    }

    std::vector<Matrix<Scalar>> member_grams;
    for (const auto& member : family.members) member_grams.push_back(member.gram());
    OrthogonalityReport<Scalar> report = verify_pairwise_orthogonality(
        member_grams, base.gram(), base_member, decomposition.roots);
    if (!report.ok)
        throw Error(ErrorCode::InternalDisagreement,
                    "orthogonality cross-check failed: " + report.detail);

    for (const auto& gram : member_grams) {
        Matrix<Scalar> d = congruent_gram(gram, cert.basis);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (i != j && !d(i, j).is_zero())
                    throw Error(ErrorCode::InternalDisagreement,
                                "assembled basis is not diagonalizing");
        cert.diagonals.push_back(d.diagonal());
    }

    cert.roots = std::move(decomposition.roots);
    cert.scalars = std::move(report.scalars);
    cert.base_index = base_member;
    result.certificate = std::move(cert);
    return result;
}

}  // namespace detail

/**
 * Diagonalizes the family against the nondegenerate member at
 * base_index; every certificate field refers to the original family
 * order.
 */
template <typename Scalar>
PipelineResult<Scalar> orthogonalize_nondegenerate(const FormFamily<Scalar>& family,
                                                   std::size_t base_index)
{
    if (base_index >= family.size())
        throw Error(ErrorCode::InvalidArgument, "base index out of range");
    const BilinearForm<Scalar>& base = family.members[base_index];
    if (radical(base).dimension() != 0)
        throw Error(ErrorCode::InvalidArgument, "base form is degenerate");
    return detail::orthogonalize_with_base(family, base, base_index);
}

template <typename Scalar>
PipelineResult<Scalar> lift_through_radical(const FormFamily<Scalar>& family,
                                            OrthoCertificate<Scalar> inner,
                                            const Matrix<Scalar>& section,
                                            const Subspace<Scalar>& rad);

/**
 * Degenerate variant: quotient every member by rad(base), run the
 * nondegenerate core on the quotient, and lift the result through the
 * coordinate section with rad(base) appended as trailing basis columns.
 */
template <typename Scalar>
PipelineResult<Scalar> orthogonalize_degenerate(const FormFamily<Scalar>& family,
                                                std::size_t base_index)
{
    if (base_index >= family.size())
        throw Error(ErrorCode::InvalidArgument, "base index out of range");
    Subspace<Scalar> rad0 = radical(family.members[base_index]);
    for (std::size_t i = 0; i < family.size(); ++i)
        if (!radical(family.members[i]).contains(rad0))
            throw Error(ErrorCode::RadicalNotContained,
                        "rad(base) is not contained in rad(member " + std::to_string(i) + ")");

    Matrix<Scalar> section = coordinate_section(rad0);
    std::vector<BilinearForm<Scalar>> quotient_members;
    for (const auto& member : family.members)
        quotient_members.emplace_back(congruent_gram(member.gram(), section));
    FormFamily<Scalar> quotient(family.field, std::move(quotient_members));

    PipelineResult<Scalar> inner =
        detail::orthogonalize_with_base(quotient, quotient.members[base_index], base_index);
    if (!inner.ok()) {
        // Lift the witness piece back to ambient coordinates.
        inner.failure->piece = Subspace<Scalar>::from_columns(
            Matrix<Scalar>(section * inner.failure->piece.basis()));
        return inner;
    }
    return lift_through_radical(family, std::move(*inner.certificate), section, rad0);
}

/**
 * Reinstates a quotient certificate on the full space: quotient basis
 * vectors ride back along the section and the radical closes the basis
 * as trailing columns with zero diagonal entries.
 */
template <typename Scalar>
PipelineResult<Scalar> lift_through_radical(const FormFamily<Scalar>& family,
                                            OrthoCertificate<Scalar> inner,
                                            const Matrix<Scalar>& section,
                                            const Subspace<Scalar>& rad)
{
    const Eigen::Index n = family.dimension();
    const Eigen::Index q = section.cols();
    const Eigen::Index k = rad.dimension();

    OrthoCertificate<Scalar> cert;
    cert.basis = Matrix<Scalar>(n, n);
    if (q > 0) cert.basis.leftCols(q) = section * inner.basis;
    if (k > 0) cert.basis.rightCols(k) = rad.basis();

    for (std::size_t i = 0; i < family.size(); ++i) {
        Matrix<Scalar> d = congruent_gram(family.members[i].gram(), cert.basis);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
                if (a != b && !d(a, b).is_zero())
                    throw Error(ErrorCode::InternalDisagreement,
                                "lifted basis is not diagonalizing");
        for (Eigen::Index a = q; a < n; ++a)
            if (!d(a, a).is_zero())
                throw Error(ErrorCode::InternalDisagreement,
                            "radical tail has a nonzero diagonal entry");
        cert.diagonals.push_back(d.diagonal());
    }

    for (RootDatum<Scalar>& root : inner.roots)
        root.space =
            Subspace<Scalar>::from_columns(Matrix<Scalar>(section * root.space.basis()));
    cert.roots = std::move(inner.roots);
    cert.scalars = std::move(inner.scalars);
    cert.radical_tail = k;
    cert.combination = std::move(inner.combination);
    cert.base_index = inner.base_index;

    PipelineResult<Scalar> out;
    out.certificate = std::move(cert);
    return out;
}

enum class CheckVerdict { Certified, NotOrthogonalizable, Indeterminate };

template <typename Scalar>
struct CheckOutcome {
    CheckVerdict verdict = CheckVerdict::Indeterminate;
    std::optional<OrthoCertificate<Scalar>> certificate;
    std::optional<PipelineFailure<Scalar>> failure;
    std::string reason;  // set on Indeterminate
};

/**
 * Full decision procedure. Strategy: quotient by the family radical,
 * diagonalize against the first nondegenerate member, else against a
 * nondegenerate linear combination found within the search budget, then
 * lift everything back. A failed refinement disproves simultaneous
 * orthogonalizability; an exhausted search is reported Indeterminate,
 * never as a negative.
 */
template <typename Scalar>
CheckOutcome<Scalar> check_so(const FormFamily<Scalar>& family, std::size_t budget = 100000)
{
    CheckOutcome<Scalar> outcome;
    const Eigen::Index n = family.dimension();

    Subspace<Scalar> rad = family_radical(family);
    Matrix<Scalar> section = coordinate_section(rad);
    FormFamily<Scalar> reduced = [&] {
        if (rad.dimension() == 0) return family;
        std::vector<BilinearForm<Scalar>> members;
        for (const auto& member : family.members)
            members.emplace_back(congruent_gram(member.gram(), section));
        return FormFamily<Scalar>(family.field, std::move(members));
    }();

    // A nonzero alternating member disproves the family outright: any
    // congruent image keeps a zero diagonal, so its only diagonal form is
    // zero. Checked on the quotient (where rank is unchanged) so the
    // disproof also covers families with no nondegenerate combination at
    // all, which the base search below would report as indeterminate.
    if (family.field.characteristic() == 2) {
        for (std::size_t i = 0; i < reduced.size(); ++i) {
            if (is_zero_matrix(reduced.members[i].gram())) continue;
            if (!is_alternating(reduced.members[i], family.field)) continue;
            PipelineFailure<Scalar> failure;
            failure.kind = PipelineFailureKind::NotDiagonalizable;
            failure.member = i;
            failure.piece = Subspace<Scalar>::from_columns(section);
            failure.detail = "member is alternating and nonzero";
            outcome.verdict = CheckVerdict::NotOrthogonalizable;
            outcome.failure = std::move(failure);
            return outcome;
        }
    }

    std::optional<std::size_t> base_member;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (radical(reduced.members[i]).dimension() == 0) {
            base_member = i;
            break;
        }
    }

    PipelineResult<Scalar> inner;
    std::optional<std::vector<Scalar>> combination;
    try {
        if (base_member) {
            inner = detail::orthogonalize_with_base(reduced, reduced.members[*base_member],
                                                    base_member);
        } else {
            ComboResult<Scalar> combo = nondegenerate_combination(reduced, budget);
            if (!combo.found) {
                outcome.verdict = CheckVerdict::Indeterminate;
                outcome.reason = combo.failure == ComboFailure::IdenticallySingular
                                     ? "identically_singular"
                                     : "budget_exhausted";
                return outcome;
            }
            Matrix<Scalar> base_gram =
                Matrix<Scalar>::Constant(reduced.dimension(), reduced.dimension(), Scalar(0));
            for (std::size_t j = 0; j < reduced.size(); ++j)
                base_gram += combo.coefficients[j] * reduced.members[j].gram();
            combination = std::move(combo.coefficients);
            inner = detail::orthogonalize_with_base(reduced, BilinearForm<Scalar>(base_gram),
                                                    std::nullopt);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UnsupportedField) {
            outcome.verdict = CheckVerdict::Indeterminate;
            outcome.reason = "root_extraction_unsupported";
            return outcome;
        }
        throw;
    }

    if (!inner.ok()) {
        inner.failure->piece = Subspace<Scalar>::from_columns(
            Matrix<Scalar>(section * inner.failure->piece.basis()));
        outcome.verdict = CheckVerdict::NotOrthogonalizable;
        outcome.failure = std::move(inner.failure);
        return outcome;
    }

    inner.certificate->combination = std::move(combination);
    PipelineResult<Scalar> lifted =
        lift_through_radical(family, std::move(*inner.certificate), section, rad);
    outcome.verdict = CheckVerdict::Certified;
    outcome.certificate = std::move(lifted.certificate);
    return outcome;
}

}  // namespace simorth

#endif
