#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "simorth/linalg.hpp"
#include "test_support.hpp"

using namespace simorth;
using simorth::testing::Rng;

namespace {

// Independent oracle: det(xI - M) by Laplace expansion over DensePoly.
template <typename S>
DensePoly<S> laplace_char_poly(const Matrix<S>& m)
{
    const Eigen::Index n = m.rows();
    std::vector<std::vector<DensePoly<S>>> a(
        static_cast<std::size_t>(n), std::vector<DensePoly<S>>(static_cast<std::size_t>(n)));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            std::vector<S> c{S(0) - m(i, j)};
            if (i == j) c.push_back(S(1));
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                DensePoly<S>(std::move(c));
        }
    std::vector<Eigen::Index> cols(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) cols[static_cast<std::size_t>(j)] = j;

    std::function<DensePoly<S>(Eigen::Index, std::vector<Eigen::Index>)> det =
        [&](Eigen::Index row, std::vector<Eigen::Index> cs) -> DensePoly<S> {
        if (cs.empty()) return DensePoly<S>::constant(S(1));
        DensePoly<S> acc;
        for (std::size_t k = 0; k < cs.size(); ++k) {
            std::vector<Eigen::Index> rest;
            for (std::size_t j = 0; j < cs.size(); ++j)
                if (j != k) rest.push_back(cs[j]);
            DensePoly<S> sub = det(row + 1, rest);
            DensePoly<S> term =
                a[static_cast<std::size_t>(row)][static_cast<std::size_t>(cs[k])] * sub;
            acc = (k % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };
    return det(0, cols);
}

template <typename S>
bool poly_equal(const DensePoly<S>& a, const DensePoly<S>& b)
{
    if (a.c.size() != b.c.size()) return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!(a.c[i] == b.c[i])) return false;
    return true;
}

template <typename S>
void check_rank_nullity(const FieldDescriptor& d, Rng& rng, int count)
{
    std::uniform_int_distribution<int> dims(1, 5);
    for (int k = 0; k < count; ++k) {
        Eigen::Index rows = dims(rng), cols = dims(rng);
        Matrix<S> m = testing::random_matrix<S>(rng, d, rows, cols);
        Matrix<S> ker = kernel(m);
        CHECK(rank(m) + ker.cols() == cols);
        if (ker.cols() > 0) {
            Matrix<S> image = m * ker;
            CHECK(is_zero_matrix(image));
        }
    }
}

}  // namespace

TEST_CASE("rref canonical form and pivots")
{
    Matrix<Rational> m(2, 2);
    m << Rational(1), Rational(1), Rational(1), Rational(1);
    auto pivots = rref_in_place(m);
    REQUIRE(pivots.size() == 1);
    CHECK(pivots[0] == 0);
    CHECK(m(0, 0) == Rational(1));
    CHECK(m(0, 1) == Rational(1));
    CHECK(m(1, 0) == Rational(0));
    CHECK(m(1, 1) == Rational(0));
}

TEST_CASE("kernel uses the free-column convention")
{
    // ker [[1,1],[1,1]]: free column 1, so the basis vector is (-1, 1).
    Matrix<Rational> m(2, 2);
    m << Rational(1), Rational(1), Rational(1), Rational(1);
    Matrix<Rational> ker = kernel(m);
    REQUIRE(ker.cols() == 1);
    CHECK(ker(0, 0) == Rational(-1));
    CHECK(ker(1, 0) == Rational(1));

    // The canonical subspace form rescales to a leading one.
    auto s = Subspace<Rational>::from_columns(ker);
    CHECK(s.basis()(0, 0) == Rational(1));
    CHECK(s.basis()(1, 0) == Rational(-1));
    REQUIRE(s.pivot_coordinates().size() == 1);
    CHECK(s.pivot_coordinates()[0] == 0);
}

TEST_CASE("rank-nullity on random matrices")
{
    Rng rng(31337);
    check_rank_nullity<Rational>(FieldDescriptor::rationals(), rng, 400);
    check_rank_nullity<GFp>(FieldDescriptor::prime_field(2), rng, 300);
    check_rank_nullity<GFp>(FieldDescriptor::prime_field(5), rng, 300);
    check_rank_nullity<RationalFunction>(FieldDescriptor::rational_functions(), rng, 60);
}

TEST_CASE("canonical solve zeroes free variables")
{
    Matrix<Rational> a(2, 2), b(2, 1);
    a << Rational(1), Rational(1), Rational(1), Rational(1);
    b << Rational(2), Rational(2);
    auto x = solve_matrix_equation(a, b);
    REQUIRE(x.has_value());
    CHECK((*x)(0, 0) == Rational(2));  // pivot variable takes the value
    CHECK((*x)(1, 0) == Rational(0));  // free variable pinned to zero
    CHECK(matrices_equal(Matrix<Rational>(a * *x), b));

    b(1, 0) = Rational(3);
    CHECK(!solve_matrix_equation(a, b).has_value());
}

TEST_CASE("inverse on random invertible matrices")
{
    Rng rng(4242);
    FieldDescriptor q = FieldDescriptor::rationals();
    FieldDescriptor f3 = FieldDescriptor::prime_field(3);
    std::uniform_int_distribution<int> dims(1, 5);
    int done = 0;
    while (done < 200) {
        Eigen::Index n = dims(rng);
        Matrix<Rational> m = testing::random_matrix<Rational>(rng, q, n, n);
        if (!is_invertible(m)) continue;
        Matrix<Rational> mi = inverse(m);
        CHECK(matrices_equal(Matrix<Rational>(m * mi),
                             Matrix<Rational>(Matrix<Rational>::Identity(n, n))));
        ++done;
    }
    done = 0;
    while (done < 200) {
        Eigen::Index n = dims(rng);
        Matrix<GFp> m = testing::random_matrix<GFp>(rng, f3, n, n);
        if (!is_invertible(m)) continue;
        Matrix<GFp> mi = inverse(m);
        CHECK(matrices_equal(Matrix<GFp>(m * mi), Matrix<GFp>(Matrix<GFp>::Identity(n, n))));
        ++done;
    }
    Matrix<Rational> sing(2, 2);
    sing << Rational(1), Rational(1), Rational(1), Rational(1);
    CHECK_THROWS_AS(inverse(sing), Error);
}

TEST_CASE("characteristic polynomial matches the Laplace oracle")
{
    Rng rng(777);
    FieldDescriptor q = FieldDescriptor::rationals();
    std::uniform_int_distribution<int> dims(1, 4);
    for (int k = 0; k < 120; ++k) {
        Eigen::Index n = dims(rng);
        Matrix<Rational> m = testing::random_matrix<Rational>(rng, q, n, n);
        CHECK(poly_equal(char_poly(m), laplace_char_poly(m)));
    }
    for (std::int64_t p : {2, 3, 5}) {
        FieldDescriptor d = FieldDescriptor::prime_field(p);
        for (int k = 0; k < 80; ++k) {
            Eigen::Index n = dims(rng);
            Matrix<GFp> m = testing::random_matrix<GFp>(rng, d, n, n);
            CHECK(poly_equal(char_poly(m), laplace_char_poly(m)));
        }
    }
}

TEST_CASE("characteristic polynomial pinned values")
{
    // diag(2,3): (x-2)(x-3) = x^2 - 5x + 6.
    Matrix<Rational> m(2, 2);
    m << Rational(2), Rational(0), Rational(0), Rational(3);
    DensePoly<Rational> p = char_poly(m);
    REQUIRE(p.degree() == 2);
    CHECK(p.c[0] == Rational(6));
    CHECK(p.c[1] == Rational(-5));
    CHECK(p.c[2] == Rational(1));

    // Companion matrix of x^3 - 1 over GF(5).
    Matrix<GFp> c(3, 3);
    c << GFp(0, 5), GFp(0, 5), GFp(1, 5),
         GFp(1, 5), GFp(0, 5), GFp(0, 5),
         GFp(0, 5), GFp(1, 5), GFp(0, 5);
    DensePoly<GFp> pc = char_poly(c);
    REQUIRE(pc.degree() == 3);
    CHECK(pc.c[0] == GFp(4, 5));
    CHECK(pc.c[1] == GFp(0, 5));
    CHECK(pc.c[2] == GFp(0, 5));
    CHECK(pc.c[3] == GFp(1, 5));
}

TEST_CASE("rational roots with multiplicities")
{
    // x^2 (x - 1/2) (x + 3), expanded via DensePoly arithmetic.
    DensePoly<Rational> x(std::vector<Rational>{Rational(0), Rational(1)});
    DensePoly<Rational> f =
        x * x * (x - DensePoly<Rational>::constant(Rational(1, 2))) *
        (x + DensePoly<Rational>::constant(Rational(3)));
    auto roots = roots_in_field(f, FieldDescriptor::rationals());
    REQUIRE(roots.size() == 3);
    // Canonical enumeration order: 0, then 1/2, then -3.
    CHECK(roots[0].first == Rational(0));
    CHECK(roots[0].second == 2);
    CHECK(roots[1].first == Rational(1, 2));
    CHECK(roots[1].second == 1);
    CHECK(roots[2].first == Rational(-3));
    CHECK(roots[2].second == 1);

    // x^2 - 1: positive root precedes the negative one of equal magnitude.
    DensePoly<Rational> pm = (x - DensePoly<Rational>::constant(Rational(1))) *
                             (x + DensePoly<Rational>::constant(Rational(1)));
    auto pmroots = roots_in_field(pm, FieldDescriptor::rationals());
    REQUIRE(pmroots.size() == 2);
    CHECK(pmroots[0].first == Rational(1));
    CHECK(pmroots[1].first == Rational(-1));

    // x^2 + 1 has no rational roots.
    DensePoly<Rational> g(std::vector<Rational>{Rational(1), Rational(0), Rational(1)});
    CHECK(roots_in_field(g, FieldDescriptor::rationals()).empty());
}

TEST_CASE("prime-field roots exhaust the field")
{
    // x^2 + 1 over GF(5): roots 2 and 3.
    DensePoly<GFp> g(std::vector<GFp>{GFp(1, 5), GFp(0, 5), GFp(1, 5)});
    auto roots = roots_in_field(g, FieldDescriptor::prime_field(5));
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].first == GFp(2, 5));
    CHECK(roots[1].first == GFp(3, 5));

    // (x - 1)^2 over GF(2): root 1 with multiplicity 2.
    DensePoly<GFp> h(std::vector<GFp>{GFp(1, 2), GFp(0, 2), GFp(1, 2)});
    auto r2 = roots_in_field(h, FieldDescriptor::prime_field(2));
    REQUIRE(r2.size() == 1);
    CHECK(r2[0].first == GFp(1, 2));
    CHECK(r2[0].second == 2);
}

TEST_CASE("root extraction over the function field is rejected")
{
    DensePoly<RationalFunction> p(
        std::vector<RationalFunction>{RationalFunction(-1), RationalFunction(1)});
    CHECK_THROWS_AS(roots_in_field(p, FieldDescriptor::rational_functions()), Error);
    try {
        roots_in_field(p, FieldDescriptor::rational_functions());
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedField);
    }
}

TEST_CASE("eigenspaces")
{
    // Swap form over GF(3): eigenvalues 1 and 2 with one-dimensional spaces.
    Matrix<GFp> m(2, 2);
    m << GFp(0, 3), GFp(1, 3), GFp(1, 3), GFp(0, 3);
    auto e1 = eigenspace(m, GFp(1, 3));
    REQUIRE(e1.dimension() == 1);
    CHECK(e1.basis()(0, 0) == GFp(1, 3));
    CHECK(e1.basis()(1, 0) == GFp(1, 3));
    auto e2 = eigenspace(m, GFp(2, 3));
    REQUIRE(e2.dimension() == 1);
    CHECK(e2.basis()(0, 0) == GFp(1, 3));
    CHECK(e2.basis()(1, 0) == GFp(2, 3));
    CHECK(eigenspace(m, GFp(0, 3)).dimension() == 0);
}

TEST_CASE("subspace canonicalization and membership")
{
    Rng rng(5);
    FieldDescriptor q = FieldDescriptor::rationals();
    for (int k = 0; k < 100; ++k) {
        Matrix<Rational> cols = testing::random_matrix<Rational>(rng, q, 4, 2);
        auto s = Subspace<Rational>::from_columns(cols);
        // Mixing the generators leaves the canonical form unchanged.
        Matrix<Rational> mixed(4, 3);
        mixed.col(0) = cols.col(0) + cols.col(1);
        mixed.col(1) = cols.col(1);
        mixed.col(2) = cols.col(0) - cols.col(1);
        CHECK(Subspace<Rational>::from_columns(mixed) == s);
        for (Eigen::Index j = 0; j < cols.cols(); ++j)
            CHECK(s.contains(Vector<Rational>(cols.col(j))));
    }

    auto z = Subspace<Rational>::zero(3);
    CHECK(z.dimension() == 0);
    CHECK(Subspace<Rational>::full(3).dimension() == 3);
    CHECK(Subspace<Rational>::full(3).contains(z));
}
