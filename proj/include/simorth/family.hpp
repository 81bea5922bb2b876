#ifndef SIMORTH_FAMILY_HPP
#define SIMORTH_FAMILY_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "simorth/bilinear.hpp"

namespace simorth {

/**
 * Finite nonempty family of symmetric bilinear forms on one space over
 * one field. Order matters: pipelines and certificates refer to members
 * by index.
 */
template <typename Scalar>
struct FormFamily {
    FieldDescriptor field;
    std::vector<BilinearForm<Scalar>> members;

    FormFamily(FieldDescriptor d, std::vector<BilinearForm<Scalar>> f)
        : field(std::move(d)), members(std::move(f))
    {
        ScalarTraits<Scalar>::check(field);
        if (members.empty())
            throw Error(ErrorCode::InvalidArgument, "family must have at least one member");
        for (const auto& m : members)
            if (m.dimension() != members.front().dimension())
                throw Error(ErrorCode::InvalidArgument, "family members differ in dimension");
    }

    Eigen::Index dimension() const { return members.front().dimension(); }
    std::size_t size() const { return members.size(); }
};

/**
 * rad(F) = intersection of the member radicals, computed in one pass as
 * the kernel of the stacked Gram matrices.
 */
template <typename Scalar>
Subspace<Scalar> family_radical(const FormFamily<Scalar>& f)
{
    const Eigen::Index n = f.dimension();
    Matrix<Scalar> stacked(n * static_cast<Eigen::Index>(f.size()), n);
    for (std::size_t i = 0; i < f.size(); ++i)
        stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = f.members[i].gram();
    return Subspace<Scalar>::from_columns(kernel(std::move(stacked)));
}

/**
 * Greedy support: scan members in order, keep an index exactly when it
 * strictly shrinks the running radical intersection. When nothing
 * shrinks (all-zero family) the convention is the singleton {0}.
 */
template <typename Scalar>
std::vector<std::size_t> minimal_radical_support(const FormFamily<Scalar>& f)
{
    const Eigen::Index n = f.dimension();
    std::vector<std::size_t> kept;
    Eigen::Index current_dim = n;
    std::vector<Eigen::Index> kept_rows;
    Matrix<Scalar> stacked(0, n);
    for (std::size_t i = 0; i < f.size(); ++i) {
        Matrix<Scalar> trial(stacked.rows() + n, n);
        if (stacked.rows() > 0) trial.topRows(stacked.rows()) = stacked;
        trial.bottomRows(n) = f.members[i].gram();
        Eigen::Index dim = n - rank(trial);
        if (dim < current_dim) {
            kept.push_back(i);
            stacked = std::move(trial);
            current_dim = dim;
        }
    }
    if (kept.empty()) kept.push_back(0);
    return kept;
}

enum class ComboFailure { None, BudgetExhausted, IdenticallySingular };

template <typename Scalar>
struct ComboResult {
    bool found = false;
    std::vector<Scalar> coefficients;
    ComboFailure failure = ComboFailure::None;
    std::size_t evaluations = 0;
};

/**
 * Searches for coefficients making the linear combination of the family
 * nondegenerate. The grid per coordinate is enumerate(dim+1) (for prime
 * fields: the whole field); tuples are visited odometer-style with the
 * FIRST coordinate cycling fastest, so combinations supported on a
 * prefix of the family are exhausted before any later member is used.
 *
 * det of the combination is a polynomial of total degree dim, so a full
 * grid with more than dim distinct values per coordinate certifies that
 * every combination over the field is degenerate; over a prime field
 * exhausting GF(p)^m certifies the same thing directly. The certified
 * case reports IdenticallySingular, anything else BudgetExhausted.
 */
template <typename Scalar>
ComboResult<Scalar> nondegenerate_combination(const FormFamily<Scalar>& f,
                                              std::size_t budget = 100000)
{
    const Eigen::Index n = f.dimension();
    const std::size_t m = f.size();
    std::vector<Scalar> values =
        ScalarTraits<Scalar>::enumerate(f.field, static_cast<std::size_t>(n) + 1);

    ComboResult<Scalar> result;
    std::vector<std::size_t> idx(m, 0);
    bool exhausted = false;
    while (true) {
        bool all_zero = true;
        for (std::size_t j = 0; j < m; ++j)
            if (idx[j] != 0) {
                all_zero = false;
                break;
            }
        if (!all_zero || n == 0) {
            if (result.evaluations >= budget) break;
            ++result.evaluations;
            Matrix<Scalar> g = Matrix<Scalar>::Constant(n, n, Scalar(0));
            for (std::size_t j = 0; j < m; ++j)
                if (idx[j] != 0) g += values[idx[j]] * f.members[j].gram();
            if (rank(std::move(g)) == n) {
                result.found = true;
                result.coefficients.resize(m);
                for (std::size_t j = 0; j < m; ++j) result.coefficients[j] = values[idx[j]];
                return result;
            }
        }
        std::size_t j = 0;
        while (j < m && ++idx[j] == values.size()) {
            idx[j] = 0;
            ++j;
        }
        if (j == m) {
            exhausted = true;
            break;
        }
    }

    const bool finite_field = f.field.kind == FieldKind::PrimeField;
    const bool small_certifiable = n <= 3 && m <= 3 &&
                                   values.size() >= static_cast<std::size_t>(n) + 1;
    if (exhausted && (finite_field || small_certifiable))
        result.failure = ComboFailure::IdenticallySingular;
    else
        result.failure = ComboFailure::BudgetExhausted;
    return result;
}

/** Legal scalar extensions: identity, and constants Q -> Q(t). */
inline void ensure_embeddable(const FieldDescriptor& from, const FieldDescriptor& to)
{
    if (from == to) return;
    if (from.kind == FieldKind::Rationals && to.kind == FieldKind::RationalFunctions) return;
    throw Error(ErrorCode::NoCanonicalEmbedding,
                "no canonical embedding of " + from.name() + " into " + to.name());
}

template <typename To, typename From>
struct ScalarEmbedding;

template <typename S>
struct ScalarEmbedding<S, S> {
    static S convert(const S& x) { return x; }
};

template <>
struct ScalarEmbedding<RationalFunction, Rational> {
    static RationalFunction convert(const Rational& x) { return RationalFunction(x); }
};

/**
 * Scalar extension of a family along a canonical embedding. The radical
 * dimension is preserved: rank is computed by the same eliminations and
 * field maps are injective on the entries.
 */
template <typename To, typename From>
FormFamily<To> base_change(const FormFamily<From>& f, const FieldDescriptor& target)
{
    ensure_embeddable(f.field, target);
    std::vector<BilinearForm<To>> members;
    members.reserve(f.size());
    for (const auto& member : f.members) {
        Matrix<To> g(member.dimension(), member.dimension());
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                g(i, j) = ScalarEmbedding<To, From>::convert(member.gram()(i, j));
        members.emplace_back(std::move(g));
    }
    return FormFamily<To>(target, std::move(members));
}

}  // namespace simorth

#endif
