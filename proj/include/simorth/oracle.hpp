#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "simorth/error.hpp"
#include "simorth/family.hpp"
#include "simorth/fields.hpp"
#include "simorth/gfp.hpp"
#include "simorth/linalg.hpp"

namespace simorth {

namespace detail {

/**
 * True when every off-diagonal entry of a square matrix vanishes.
 */
template <typename Scalar>
bool is_diagonal_matrix(const Matrix<Scalar>& m)
{
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && !is_zero(m(i, j)))
                return false;
    return true;
}

template <typename Visit>
bool invertible_descend(Matrix<GFp>& rows, Eigen::Index k, std::int64_t p,
                        std::int64_t row_count, Visit& visit)
{
    const Eigen::Index n = rows.rows();
    for (std::int64_t c = 0; c < row_count; ++c) {
        std::int64_t digits = c;
        for (Eigen::Index j = 0; j < n; ++j) {
            rows(k, j) = GFp(digits % p, p);
            digits /= p;
        }
        if (rank(Matrix<GFp>(rows.topRows(k + 1))) != k + 1)
            continue;
        if (k + 1 == n) {
            if (visit(rows))
                return true;
        } else if (invertible_descend(rows, k + 1, p, row_count, visit)) {
            return true;
        }
    }
    return false;
}

} // namespace detail

/**
 * Visits every invertible n-by-n matrix over GF(p) exactly once, in a fixed
 * deterministic order, until the visitor returns true.  Matrices are built
 * row by row; candidate rows ascend as base-p counters with coordinate 0 as
 * the least-significant digit (the same convention the scalar enumeration
 * and the combination odometer use), and rows that are linearly dependent
 * on the ones already placed are pruned before descending.  Under this
 * order the identity matrix is always the first matrix visited.
 *
 * The visitor receives each completed invertible matrix and returns true to
 * stop the walk; the function returns whether the walk was stopped.
 */
template <typename Visit>
bool for_each_invertible(Eigen::Index n, std::int64_t p, Visit&& visit)
{
    Matrix<GFp> rows = Matrix<GFp>::Constant(n, n, GFp(0, p));
    if (n == 0)
        return visit(rows);
    std::int64_t row_count = 1;
    for (Eigen::Index j = 0; j < n; ++j)
        row_count *= p;
    return detail::invertible_descend(rows, 0, p, row_count, visit);
}

/**
 * Exhaustive ground truth for simultaneous orthogonalizability over small
 * prime fields: walks every invertible matrix P in the deterministic order
 * of for_each_invertible and returns the first P whose congruences P^T G_i P
 * are simultaneously diagonal, or an empty optional when no such P exists.
 *
 * The search is definitional, shares no machinery with the structured
 * decision procedure, and is therefore usable as an independent referee for
 * it.  Because the walk is exhaustive the instance size must stay small:
 * the field must be GF(p) with p in {2, 3, 5} and the dimension at most 3
 * (|GL(3,5)| = 372000 matrices); anything larger raises OutOfBudget.
 */
inline std::optional<Matrix<GFp>> oracle_so(const FormFamily<GFp>& family)
{
    const std::int64_t p = family.field.p;
    if (family.field.kind != FieldKind::PrimeField ||
        (p != 2 && p != 3 && p != 5))
        throw Error(ErrorCode::OutOfBudget,
                    "exhaustive search supports GF(2), GF(3) and GF(5) only");
    if (family.dimension() > 3)
        throw Error(ErrorCode::OutOfBudget,
                    "exhaustive search supports dimension at most 3");

    std::optional<Matrix<GFp>> witness;
    for_each_invertible(family.dimension(), p, [&](const Matrix<GFp>& candidate) {
        for (const auto& member : family.members) {
            Matrix<GFp> congruence =
                candidate.transpose() * member.gram() * candidate;
            if (!detail::is_diagonal_matrix(congruence))
                return false;
        }
        witness = candidate;
        return true;
    });
    return witness;
}

/**
 * One generated test family together with whatever ground truth its
 * construction guarantees.  `orthogonalizable` is set when the stratum
 * decides the answer by construction (positives built as P^T D P, negatives
 * built around a known obstruction) and empty for unconstrained samples;
 * `family_radical_dim` is set when the construction pins the dimension of
 * the family radical.
 */
template <typename Scalar>
struct CorpusFamily {
    std::string stratum;
    FormFamily<Scalar> family;
    std::optional<bool> orthogonalizable;
    std::optional<Eigen::Index> family_radical_dim;
};

namespace detail {

template <typename Scalar>
Scalar corpus_pick(std::mt19937_64& rng, const std::vector<Scalar>& pool)
{
    return pool[static_cast<std::size_t>(rng() % pool.size())];
}

template <typename Scalar>
Scalar corpus_pick_nonzero(std::mt19937_64& rng, const std::vector<Scalar>& pool)
{
    for (;;) {
        Scalar s = corpus_pick(rng, pool);
        if (!is_zero(s))
            return s;
    }
}

template <typename Scalar>
Matrix<Scalar> corpus_invertible(std::mt19937_64& rng, Eigen::Index n,
                                 const std::vector<Scalar>& pool)
{
    for (;;) {
        Matrix<Scalar> m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                m(i, j) = corpus_pick(rng, pool);
        if (is_invertible(m))
            return m;
    }
}

template <typename Scalar>
Matrix<Scalar> corpus_symmetric(std::mt19937_64& rng, Eigen::Index n,
                                const std::vector<Scalar>& pool)
{
    Matrix<Scalar> m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            m(i, j) = corpus_pick(rng, pool);
            m(j, i) = m(i, j);
        }
    return m;
}

} // namespace detail

/**
 * Reproducible stream of stratified pseudo-random families for testing the
 * decision procedure against known answers.  The stream cycles through five
 * strata:
 *
 *   "known-orthogonalizable"  -- members P^T D_i P for one random invertible
 *       P and random diagonal D_i, with D_0 kept nonsingular; the family is
 *       simultaneously orthogonalizable by construction, contains a
 *       nondegenerate member, and has zero family radical.
 *   "common-radical"          -- the same shape but every D_i vanishes on a
 *       shared block of trailing coordinates and no member is
 *       nondegenerate; the family radical has exactly the block's
 *       dimension and the family is still orthogonalizable.
 *   "incomparable-radicals"   -- two members whose diagonal models vanish
 *       at one coordinate each (different coordinates), giving distinct
 *       one-dimensional radicals neither of which contains the other.
 *   "char2-alternating" / "defective-pair" -- a known negative: over GF(2)
 *       a nonzero alternating member (no congruence can make it diagonal);
 *       over the other fields a pair whose representing operator has a
 *       defective eigenvalue.
 *   "unconstrained"           -- random symmetric matrices with no promised
 *       answer.
 *
 * All randomness flows through a seeded std::mt19937_64 consumed only via
 * modular reduction, so a given (seed, count, field, bounds) tuple yields
 * the same families on every platform.
 */
template <typename Scalar>
std::vector<CorpusFamily<Scalar>>
generate_corpus(std::uint64_t seed, std::size_t count, const FieldDescriptor& field,
                Eigen::Index max_dim = 5, std::size_t max_forms = 4)
{
    ScalarTraits<Scalar>::check(field);
    if (max_dim < 2 || max_forms < 1)
        throw Error(ErrorCode::InvalidArgument,
                    "corpus needs max_dim >= 2 and max_forms >= 1");

    std::mt19937_64 rng(seed);
    const std::vector<Scalar> pool = ScalarTraits<Scalar>::enumerate(field, 7);
    const bool char2 = field.kind == FieldKind::PrimeField && field.p == 2;
    const Scalar zero = ScalarTraits<Scalar>::from_integer(field, 0);
    const Scalar one = ScalarTraits<Scalar>::from_integer(field, 1);

    std::vector<CorpusFamily<Scalar>> out;
    out.reserve(count);
    for (std::size_t entry = 0; entry < count; ++entry) {
        const std::size_t stratum = entry % 5;
        Eigen::Index dim = 1 + static_cast<Eigen::Index>(
                                   rng() % static_cast<std::uint64_t>(max_dim));
        std::size_t forms = 1 + static_cast<std::size_t>(rng() % max_forms);
        if (stratum != 0 && stratum != 4 && dim < 2)
            dim = 2;
        if ((stratum == 2 || stratum == 3) && forms < 2)
            forms = 2;
        if (stratum == 2 && field.kind == FieldKind::PrimeField &&
            dim > static_cast<Eigen::Index>(field.p))
            dim = static_cast<Eigen::Index>(field.p);

        std::vector<BilinearForm<Scalar>> members;
        std::string name;
        std::optional<bool> answer;
        std::optional<Eigen::Index> radical_dim;

        if (stratum == 0) {
            name = "known-orthogonalizable";
            Matrix<Scalar> p = detail::corpus_invertible(rng, dim, pool);
            for (std::size_t i = 0; i < forms; ++i) {
                Matrix<Scalar> d = Matrix<Scalar>::Constant(dim, dim, zero);
                for (Eigen::Index j = 0; j < dim; ++j)
                    d(j, j) = i == 0 ? detail::corpus_pick_nonzero(rng, pool)
                                     : detail::corpus_pick(rng, pool);
                members.emplace_back(Matrix<Scalar>(p.transpose() * d * p));
            }
            answer = true;
            radical_dim = 0;
        } else if (stratum == 1) {
            name = "common-radical";
            const Eigen::Index shared =
                1 + static_cast<Eigen::Index>(
                        rng() % static_cast<std::uint64_t>(dim - 1));
            Matrix<Scalar> p = detail::corpus_invertible(rng, dim, pool);
            for (std::size_t i = 0; i < forms; ++i) {
                Matrix<Scalar> d = Matrix<Scalar>::Constant(dim, dim, zero);
                for (Eigen::Index j = 0; j < dim - shared; ++j)
                    d(j, j) = i == 0 ? detail::corpus_pick_nonzero(rng, pool)
                                     : detail::corpus_pick(rng, pool);
                members.emplace_back(Matrix<Scalar>(p.transpose() * d * p));
            }
            answer = true;
            radical_dim = shared;
        } else if (stratum == 2) {
            name = "incomparable-radicals";
            Matrix<Scalar> p = detail::corpus_invertible(rng, dim, pool);
            for (std::size_t i = 0; i < forms; ++i) {
                const Eigen::Index hole =
                    i < 2 ? static_cast<Eigen::Index>(i)
                          : static_cast<Eigen::Index>(rng() %
                                                      static_cast<std::uint64_t>(dim));
                Matrix<Scalar> d = Matrix<Scalar>::Constant(dim, dim, zero);
                for (Eigen::Index j = 0; j < dim; ++j)
                    if (j != hole)
                        d(j, j) = detail::corpus_pick_nonzero(rng, pool);
                members.emplace_back(Matrix<Scalar>(p.transpose() * d * p));
            }
            answer = true;
            radical_dim = 0;
        } else if (stratum == 3 && char2) {
            name = "char2-alternating";
            Matrix<Scalar> g = Matrix<Scalar>::Constant(dim, dim, zero);
            g(0, 1) = one;
            g(1, 0) = one;
            members.emplace_back(g);
            for (std::size_t i = 1; i < forms; ++i)
                members.emplace_back(detail::corpus_symmetric(rng, dim, pool));
            answer = false;
        } else if (stratum == 3) {
            name = "defective-pair";
            Matrix<Scalar> g0 = Matrix<Scalar>::Constant(dim, dim, zero);
            Matrix<Scalar> g1 = Matrix<Scalar>::Constant(dim, dim, zero);
            g0(0, 0) = one;
            g1(0, 1) = one;
            g1(1, 0) = one;
            for (Eigen::Index j = 2; j < dim; ++j) {
                g0(j, j) = one;
                g1(j, j) = one;
            }
            members.emplace_back(g0);
            members.emplace_back(g1);
            for (std::size_t i = 2; i < forms; ++i)
                members.emplace_back(g1);
            answer = false;
            radical_dim = 0;
        } else {
            name = "unconstrained";
            for (std::size_t i = 0; i < forms; ++i)
                members.emplace_back(detail::corpus_symmetric(rng, dim, pool));
        }

        out.push_back(CorpusFamily<Scalar>{std::move(name),
                                           FormFamily<Scalar>(field, std::move(members)),
                                           answer, radical_dim});
    }
    return out;
}

} // namespace simorth
