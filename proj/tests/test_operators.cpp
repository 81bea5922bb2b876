#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <simorth/operators.hpp>

#include "test_support.hpp"

using namespace simorth;
using namespace simorth::testing;

namespace {

template <typename Scalar>
Matrix<Scalar> mat2(Scalar a, Scalar b, Scalar c, Scalar d)
{
    Matrix<Scalar> m(2, 2);
    m << a, b, c, d;
    return m;
}

Matrix<Rational> qmat2(long a, long b, long c, long d)
{
    return mat2(Rational(a), Rational(b), Rational(c), Rational(d));
}

Matrix<GFp> pmat2(long p, long a, long b, long c, long d)
{
    return mat2(GFp(a, p), GFp(b, p), GFp(c, p), GFp(d, p));
}

}  // namespace

TEST_CASE("represent: identity family member against a nondegenerate base")
{
    BilinearForm<Rational> base(qmat2(1, 0, 0, 1));
    BilinearForm<Rational> member(qmat2(2, 1, 1, 3));
    Matrix<Rational> p = represent(base, member);
    CHECK(matrices_equal(p, member.gram()));  // G0 = I means P = G1
}

TEST_CASE("represent: columns are reduced into the coordinate complement of the radical")
{
    // G0 = [[1,1],[1,1]] has radical span{(1,-1)}; the canonical solve of
    // G0 P = 2*G0 puts weight on the pivot row, so the reduction must move
    // it onto the complement coordinate.
    BilinearForm<Rational> base(qmat2(1, 1, 1, 1));
    BilinearForm<Rational> member(qmat2(2, 2, 2, 2));
    Matrix<Rational> p = represent(base, member);
    CHECK(matrices_equal(p, qmat2(0, 0, 2, 2)));
}

TEST_CASE("represent: throws when the base radical is not contained in the member radical")
{
    BilinearForm<Rational> base(qmat2(1, 0, 0, 0));
    BilinearForm<Rational> member(qmat2(0, 0, 0, 1));
    CHECK_THROWS_AS((void)represent(base, member), Error);
    try {
        (void)represent(base, member);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RadicalNotContained);
    }
}

TEST_CASE("represent: postconditions hold on random simultaneously diagonalizable pairs")
{
    Rng rng(20260819);
    FieldDescriptor qq = FieldDescriptor::rationals();
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 4);
        Matrix<Rational> q;
        do {
            q = random_matrix<Rational>(rng, qq, n, n);
        } while (!is_invertible(q));
        Matrix<Rational> d0 = Matrix<Rational>::Constant(n, n, Rational(0));
        Matrix<Rational> d1 = Matrix<Rational>::Constant(n, n, Rational(0));
        for (Eigen::Index i = 0; i < n; ++i) {
            Rational v;
            do {
                v = random_rational(rng);
            } while (v.is_zero());
            d0(i, i) = v;
            d1(i, i) = random_rational(rng);
        }
        BilinearForm<Rational> base(congruent_gram(d0, q));
        BilinearForm<Rational> member(congruent_gram(d1, q));
        Matrix<Rational> p = represent(base, member);
        CHECK(matrices_equal(Matrix<Rational>(base.gram() * p), member.gram()));
        CHECK(matrices_equal(Matrix<Rational>(p.transpose() * base.gram()),
                             Matrix<Rational>(base.gram() * p)));

        auto decomposition = joint_root_decomposition(std::vector<Matrix<Rational>>{p},
                                                      n, qq);
        CHECK(decomposition.ok);
    }
}

TEST_CASE("joint root decomposition: swap form over GF(3) splits into the two lines")
{
    FieldDescriptor f3 = FieldDescriptor::prime_field(3);
    std::vector<Matrix<GFp>> ops{pmat2(3, 0, 1, 1, 0)};
    auto d = joint_root_decomposition(ops, 2, f3);
    REQUIRE(d.ok);
    REQUIRE(d.roots.size() == 2);
    CHECK(d.roots[0].values == std::vector<GFp>{GFp(1, 3)});
    CHECK(d.roots[1].values == std::vector<GFp>{GFp(2, 3)});

    Vector<GFp> v1(2), v2(2);
    v1 << GFp(1, 3), GFp(1, 3);
    v2 << GFp(1, 3), GFp(2, 3);
    CHECK(d.roots[0].space.contains(v1));
    CHECK(d.roots[0].space.dimension() == 1);
    CHECK(d.roots[1].space.contains(v2));
    CHECK(d.roots[1].space.dimension() == 1);
}

TEST_CASE("joint root decomposition: eigenvalues listed ascending per piece")
{
    FieldDescriptor qq = FieldDescriptor::rationals();
    Matrix<Rational> op = qmat2(3, 0, 0, 2);
    auto d = joint_root_decomposition(std::vector<Matrix<Rational>>{op}, 2, qq);
    REQUIRE(d.ok);
    REQUIRE(d.roots.size() == 2);
    CHECK(d.roots[0].values == std::vector<Rational>{Rational(2)});
    CHECK(d.roots[1].values == std::vector<Rational>{Rational(3)});
    CHECK(d.roots[0].space.contains(Vector<Rational>(Vector<Rational>::Unit(2, 1))));
    CHECK(d.roots[1].space.contains(Vector<Rational>(Vector<Rational>::Unit(2, 0))));
}

TEST_CASE("joint root decomposition: irrational spectrum is EigenvaluesMissing")
{
    FieldDescriptor qq = FieldDescriptor::rationals();
    // x^2 - x - 1 has no rational roots.
    Matrix<Rational> op = qmat2(0, 1, 1, 1);
    auto d = joint_root_decomposition(std::vector<Matrix<Rational>>{op}, 2, qq);
    REQUIRE(!d.ok);
    CHECK(d.failure->kind == DecompositionFailureKind::EigenvaluesMissing);
    CHECK(d.failure->operator_index == 0);
    CHECK(d.failure->piece.dimension() == 2);
}

TEST_CASE("joint root decomposition: nilpotent operator is Defective")
{
    FieldDescriptor qq = FieldDescriptor::rationals();
    Matrix<Rational> op = qmat2(0, 1, 0, 0);
    auto d = joint_root_decomposition(std::vector<Matrix<Rational>>{op}, 2, qq);
    REQUIRE(!d.ok);
    CHECK(d.failure->kind == DecompositionFailureKind::Defective);
}

TEST_CASE("joint root decomposition: non-invariant piece is reported against the right operator")
{
    FieldDescriptor qq = FieldDescriptor::rationals();
    std::vector<Matrix<Rational>> ops{qmat2(1, 0, 0, 2), qmat2(0, 1, 1, 0)};
    auto d = joint_root_decomposition(ops, 2, qq);
    REQUIRE(!d.ok);
    CHECK(d.failure->kind == DecompositionFailureKind::NotInvariant);
    CHECK(d.failure->operator_index == 1);
    CHECK(d.failure->piece.dimension() == 1);
    CHECK(d.failure->piece.contains(Vector<Rational>(Vector<Rational>::Unit(2, 0))));
}

TEST_CASE("pairwise orthogonality report: scalar table for {I, swap} over GF(3)")
{
    FieldDescriptor f3 = FieldDescriptor::prime_field(3);
    Matrix<GFp> identity = pmat2(3, 1, 0, 0, 1);
    Matrix<GFp> swap = pmat2(3, 0, 1, 1, 0);
    auto d = joint_root_decomposition(std::vector<Matrix<GFp>>{swap}, 2, f3);
    REQUIRE(d.ok);
    auto report = verify_pairwise_orthogonality(std::vector<Matrix<GFp>>{identity, swap},
                                                identity, std::size_t{0}, d.roots);
    REQUIRE(report.ok);
    REQUIRE(report.scalars.rows() == 2);
    REQUIRE(report.scalars.cols() == 2);
    CHECK(report.scalars(0, 0) == GFp(1, 3));
    CHECK(report.scalars(0, 1) == GFp(1, 3));
    CHECK(report.scalars(1, 0) == GFp(1, 3));
    CHECK(report.scalars(1, 1) == GFp(2, 3));
}

TEST_CASE("pairwise orthogonality report: duplicate root tuples are rejected")
{
    std::vector<RootDatum<Rational>> roots(2);
    roots[0].values = {Rational(1)};
    roots[0].space = Subspace<Rational>::from_columns(
        Matrix<Rational>(Vector<Rational>::Unit(2, 0)));
    roots[1].values = {Rational(1)};
    roots[1].space = Subspace<Rational>::from_columns(
        Matrix<Rational>(Vector<Rational>::Unit(2, 1)));
    Matrix<Rational> identity = qmat2(1, 0, 0, 1);
    auto report = verify_pairwise_orthogonality(std::vector<Matrix<Rational>>{identity},
                                                identity, std::size_t{0}, roots);
    CHECK(!report.ok);
    CHECK(report.detail == "duplicate root tuple");
}

TEST_CASE("pairwise orthogonality report: non-orthogonal spaces are rejected")
{
    std::vector<RootDatum<Rational>> roots(2);
    roots[0].values = {Rational(1)};
    roots[0].space = Subspace<Rational>::from_columns(
        Matrix<Rational>(Vector<Rational>::Unit(2, 0)));
    Vector<Rational> diag(2);
    diag << Rational(1), Rational(1);
    roots[1].values = {Rational(2)};
    roots[1].space = Subspace<Rational>::from_columns(Matrix<Rational>(diag));
    Matrix<Rational> identity = qmat2(1, 0, 0, 1);
    auto report = verify_pairwise_orthogonality(std::vector<Matrix<Rational>>{identity},
                                                identity, std::size_t{0}, roots);
    CHECK(!report.ok);
}
