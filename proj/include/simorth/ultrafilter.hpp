#ifndef SIMORTH_ULTRAFILTER_HPP
#define SIMORTH_ULTRAFILTER_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simorth/pipeline.hpp"

namespace simorth {

/**
 * Countable family whose members stabilize: member i equals prefix[i]
 * for i < prefix.size() and equals tail from there on. Every pairwise
 * evaluation sequence is eventually constant, so its class modulo any
 * ultrafilter refining the cofinite filter is the tail value; this is
 * the maximal fragment of the index-averaged form that is computable
 * without choice.
 */
template <typename Scalar>
struct StableTailFamily {
    FieldDescriptor field;
    std::vector<BilinearForm<Scalar>> prefix;
    BilinearForm<Scalar> tail;

    StableTailFamily(FieldDescriptor d, std::vector<BilinearForm<Scalar>> p,
                     BilinearForm<Scalar> t)
        : field(d), prefix(std::move(p)), tail(std::move(t))
    {
        ScalarTraits<Scalar>::check(field);
        for (const auto& member : prefix)
            if (member.dimension() != tail.dimension())
                throw Error(ErrorCode::InvalidArgument,
                            "stable-tail members live on different spaces");
    }

    Eigen::Index dimension() const { return tail.dimension(); }

    /** The same infinite family with the prefix cut moved further out. */
    StableTailFamily extend_prefix(std::size_t copies) const
    {
        StableTailFamily out = *this;
        for (std::size_t i = 0; i < copies; ++i) out.prefix.push_back(tail);
        return out;
    }
};

/** Finite view {prefix members..., tail} for the form-family pipeline. */
template <typename Scalar>
FormFamily<Scalar> to_form_family(const StableTailFamily<Scalar>& f)
{
    std::vector<BilinearForm<Scalar>> members = f.prefix;
    members.push_back(f.tail);
    return FormFamily<Scalar>(f.field, std::move(members));
}

enum class BracketProvenance { Finite, StableTail };

/**
 * The index-averaged form: the class of the evaluation sequence
 * (⟨x,y⟩_i)_i modulo the chosen ultrafilter, represented exactly by a
 * single Gram matrix over the ground field.
 */
template <typename Scalar>
struct DoubleBracketForm {
    Matrix<Scalar> gram;
    BracketProvenance provenance;
};

/**
 * Finite index set: the principal ultrafilter at the maximum index
 * makes the class of every sequence its last value.
 */
template <typename Scalar>
DoubleBracketForm<Scalar> double_bracket(const FormFamily<Scalar>& family)
{
    return DoubleBracketForm<Scalar>{family.members.back().gram(), BracketProvenance::Finite};
}

/**
 * Stable tail: every evaluation sequence is eventually the tail value,
 * so the class is the tail value under any ultrafilter refining the
 * cofinite filter — the result does not depend on the ultrafilter.
 */
template <typename Scalar>
DoubleBracketForm<Scalar> double_bracket(const StableTailFamily<Scalar>& family)
{
    return DoubleBracketForm<Scalar>{family.tail.gram(), BracketProvenance::StableTail};
}

/**
 * Vectors pairing to zero with the whole space under the index-averaged
 * form; computed as the radical of the double-bracket Gram matrix.
 */
template <typename Scalar>
Subspace<Scalar> pathological_subspace(const FormFamily<Scalar>& family)
{
    return radical(BilinearForm<Scalar>(double_bracket(family).gram));
}

template <typename Scalar>
Subspace<Scalar> pathological_subspace(const StableTailFamily<Scalar>& family)
{
    return radical(BilinearForm<Scalar>(double_bracket(family).gram));
}

struct PajaroReport {
    bool nonpathological = false;            // (a) pathological subspace is zero
    bool double_bracket_nondegenerate = false;  // (b)
    bool orthogonalizable = false;           // (c) a verified certificate was supplied
};

/**
 * Checks the implication structure tying (a) a zero pathological
 * subspace, (b) nondegeneracy of the index-averaged form, and (c)
 * simultaneous orthogonalizability: (a)∧(c)⇒(b) and (b)⇒(a) must hold
 * on every instance; a violation indicates an implementation bug. A
 * supplied certificate must diagonalize every prefix member and the
 * tail, and is re-verified against the enlarged family that adjoins the
 * index-averaged form.
 */
template <typename Scalar>
PajaroReport check_pajaro(const StableTailFamily<Scalar>& family,
                          const std::optional<OrthoCertificate<Scalar>>& certificate)
{
    PajaroReport report;
    DoubleBracketForm<Scalar> db = double_bracket(family);
    report.nonpathological = pathological_subspace(family).dimension() == 0;
    report.double_bracket_nondegenerate =
        radical(BilinearForm<Scalar>(db.gram)).dimension() == 0;

    if (certificate) {
        const Matrix<Scalar>& basis = certificate->basis;
        if (basis.rows() != family.dimension() || basis.cols() != family.dimension() ||
            !is_invertible(basis))
            throw Error(ErrorCode::InvalidArgument, "certificate basis is not invertible");
        auto diagonalizes = [&](const Matrix<Scalar>& gram) {
            Matrix<Scalar> d = congruent_gram(gram, basis);
            for (Eigen::Index i = 0; i < d.rows(); ++i)
                for (Eigen::Index j = 0; j < d.cols(); ++j)
                    if (i != j && !d(i, j).is_zero()) return false;
            return true;
        };
        for (const auto& member : family.prefix)
            if (!diagonalizes(member.gram()))
                throw Error(ErrorCode::InvalidArgument,
                            "certificate does not diagonalize a prefix member");
        if (!diagonalizes(family.tail.gram()))
            throw Error(ErrorCode::InvalidArgument,
                        "certificate does not diagonalize the tail");
        // Enlarging by the index-averaged form keeps the same basis
        // diagonalizing, because that form is the tail form.
        if (!diagonalizes(db.gram))
            throw Error(ErrorCode::ImplicationViolated,
                        "enlarged family is not diagonalized by the certificate");
        report.orthogonalizable = true;
    }

    if (report.nonpathological && report.orthogonalizable &&
        !report.double_bracket_nondegenerate)
        throw Error(ErrorCode::ImplicationViolated,
                    "nonpathological + orthogonalizable but index-averaged form degenerate");
    if (report.double_bracket_nondegenerate && !report.nonpathological)
        throw Error(ErrorCode::ImplicationViolated,
                    "index-averaged form nondegenerate but pathological subspace nonzero");
    return report;
}

/**
 * Stable-tail model of the nonpathological example family: member i is
 * the identity form with the (i,i) entry zeroed, for i up to dim, and
 * the identity from there on. Its pathological subspace is zero.
 */
template <typename Scalar>
StableTailFamily<Scalar> nonpathological_example(Eigen::Index dim, const FieldDescriptor& field)
{
    ScalarTraits<Scalar>::check(field);
    std::vector<BilinearForm<Scalar>> prefix;
    for (Eigen::Index i = 0; i < dim; ++i) {
        Matrix<Scalar> g = Matrix<Scalar>::Identity(dim, dim);
        g(i, i) = Scalar(0);
        prefix.emplace_back(g);
    }
    return StableTailFamily<Scalar>(field, std::move(prefix),
                                    BilinearForm<Scalar>(
                                        Matrix<Scalar>(Matrix<Scalar>::Identity(dim, dim))));
}

/**
 * Truncation of the strictly-descending-radicals family: member i has
 * ⟨v_j,v_j⟩ = 1 exactly for j ≤ i (so radicals shrink one coordinate at
 * a time), with the identity as tail. Radical chains like this are what
 * forces the minimal-support search to look past any fixed prefix.
 */
template <typename Scalar>
StableTailFamily<Scalar> descending_radicals_truncation(Eigen::Index dim,
                                                        const FieldDescriptor& field)
{
    ScalarTraits<Scalar>::check(field);
    std::vector<BilinearForm<Scalar>> prefix;
    for (Eigen::Index i = 1; i <= dim; ++i) {
        Matrix<Scalar> g = Matrix<Scalar>::Constant(dim, dim, Scalar(0));
        for (Eigen::Index j = 0; j < i; ++j) g(j, j) = Scalar(1);
        prefix.emplace_back(g);
    }
    return StableTailFamily<Scalar>(field, std::move(prefix),
                                    BilinearForm<Scalar>(
                                        Matrix<Scalar>(Matrix<Scalar>::Identity(dim, dim))));
}

}  // namespace simorth

#endif
