#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <simorth/hyperreal.hpp>

#include "test_support.hpp"

using namespace simorth;
using namespace simorth::testing;

namespace {

RationalFunction inv_t() { return RationalFunction(IntPoly(1), IntPoly::monomial(1, 1)); }

/** Random finite value: numerator degree bounded by the denominator's. */
RationalFunction random_finite(Rng& rng)
{
    const int d = static_cast<int>(rng() % 4);
    IntPoly den;
    do {
        den = random_int_poly(rng, d, 5);
    } while (den.degree() < d);  // force exact degree d
    IntPoly num = random_int_poly(rng, d, 5);
    return RationalFunction(num, den);
}

Matrix<RationalFunction> diag_t(RationalFunction a, RationalFunction b)
{
    Matrix<RationalFunction> g = Matrix<RationalFunction>::Constant(2, 2, RationalFunction(0));
    g(0, 0) = a;
    g(1, 1) = b;
    return g;
}

}  // namespace

TEST_CASE("growth classification of rational functions")
{
    auto inf = hyper_classify(inv_t());
    CHECK(inf.finite);
    CHECK(inf.infinitesimal);
    CHECK(*inf.st == Rational(0));

    // (2t+1)/t tends to 2.
    RationalFunction x(IntPoly(std::vector<mpz_class>{1, 2}), IntPoly::monomial(1, 1));
    auto fin = hyper_classify(x);
    CHECK(fin.finite);
    CHECK(!fin.infinitesimal);
    CHECK(*fin.st == Rational(2));

    auto unb = hyper_classify(RationalFunction::t() * RationalFunction::t());
    CHECK(!unb.finite);
    CHECK(!unb.infinitesimal);
    CHECK(!unb.st.has_value());

    auto zero = hyper_classify(RationalFunction(0));
    CHECK(zero.infinitesimal);
    CHECK(*zero.st == Rational(0));
}

TEST_CASE("standard part is a ring morphism on finite values")
{
    Rng rng(88001);
    for (int trial = 0; trial < 10000; ++trial) {
        RationalFunction x = random_finite(rng);
        RationalFunction y = random_finite(rng);
        Rational sx = *hyper_classify(x).st;
        Rational sy = *hyper_classify(y).st;
        CHECK(*hyper_classify(x + y).st == sx + sy);
        CHECK(*hyper_classify(x * y).st == sx * sy);
    }
}

TEST_CASE("bounded families are exactly those with finite Gram entries")
{
    CHECK(is_bounded_family(BilinearForm<RationalFunction>(
        diag_t(RationalFunction(1), inv_t()))));
    CHECK(!is_bounded_family(BilinearForm<RationalFunction>(
        diag_t(RationalFunction::t(), RationalFunction(1)))));

    // (t+1)/t is degree-balanced.
    RationalFunction balanced(IntPoly(std::vector<mpz_class>{1, 1}), IntPoly::monomial(1, 1));
    Matrix<RationalFunction> g(2, 2);
    g << RationalFunction(1), balanced, balanced, RationalFunction(3);
    CHECK(is_bounded_family(BilinearForm<RationalFunction>(g)));
}

TEST_CASE("limit form: entrywise standard parts")
{
    Matrix<Rational> st = st_form(BilinearForm<RationalFunction>(
        diag_t(RationalFunction(1), inv_t())));
    CHECK(st(0, 0) == Rational(1));
    CHECK(st(1, 1) == Rational(0));
    CHECK(st(0, 1) == Rational(0));

    RationalFunction x(IntPoly(std::vector<mpz_class>{1, 2}), IntPoly::monomial(1, 1));
    Matrix<RationalFunction> g(2, 2);
    g << RationalFunction(1), x, x, RationalFunction(1);
    Matrix<Rational> st2 = st_form(BilinearForm<RationalFunction>(g));
    CHECK(st2(0, 1) == Rational(2));
    CHECK(st2(1, 0) == Rational(2));

    CHECK_THROWS_AS((void)st_form(BilinearForm<RationalFunction>(
                        diag_t(RationalFunction::t(), RationalFunction(1)))),
                    Error);
}

TEST_CASE("negligible subspace: pinned families")
{
    Subspace<Rational> neg = negligible_subspace(BilinearForm<RationalFunction>(
        diag_t(RationalFunction(1), inv_t())));
    CHECK(neg.dimension() == 1);
    CHECK(neg.contains(Vector<Rational>(Vector<Rational>::Unit(2, 1))));

    Matrix<RationalFunction> identity = Matrix<RationalFunction>::Identity(2, 2);
    CHECK(negligible_subspace(BilinearForm<RationalFunction>(identity)).dimension() == 0);

    Matrix<RationalFunction> shrinking =
        Matrix<RationalFunction>::Constant(2, 2, RationalFunction(0));
    shrinking(0, 0) = inv_t();
    shrinking(1, 1) = inv_t();
    CHECK(negligible_subspace(BilinearForm<RationalFunction>(shrinking)).dimension() == 2);

    CHECK_THROWS_AS((void)negligible_subspace(BilinearForm<RationalFunction>(
                        diag_t(RationalFunction::t(), RationalFunction(1)))),
                    Error);
}

TEST_CASE("negligible subspace: both routes agree on random bounded families")
{
    Rng rng(88002);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 4);
        Matrix<RationalFunction> g =
            Matrix<RationalFunction>::Constant(n, n, RationalFunction(0));
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j) {
                g(i, j) = random_finite(rng);
                g(j, i) = g(i, j);
            }
        BilinearForm<RationalFunction> f(g);
        // negligible_subspace cross-asserts the two routes internally and
        // throws InternalDisagreement if they ever differ.
        Subspace<Rational> neg = negligible_subspace(f);
        Subspace<Rational> st_rad =
            Subspace<Rational>::from_columns(kernel(Matrix<Rational>(st_form(f))));
        CHECK(neg == st_rad);
    }
}

TEST_CASE("four-item report: shrinking second axis with the standard basis")
{
    BilinearForm<RationalFunction> f(diag_t(RationalFunction(1), inv_t()));
    OrthoCertificate<RationalFunction> cert;
    cert.basis = Matrix<RationalFunction>::Identity(2, 2);
    auto report = check_wwe(f, std::optional<OrthoCertificate<RationalFunction>>(cert));
    CHECK(report.negligible_is_limit_radical);
    CHECK(report.robust_implies_nondegenerate);
    REQUIRE(report.certificate_diagonalizes_limit.has_value());
    CHECK(*report.certificate_diagonalizes_limit);
    REQUIRE(report.enlarged_certificate_covers_family.has_value());
    CHECK(*report.enlarged_certificate_covers_family);
}

TEST_CASE("four-item report: constant hyperbolic form with the polarizing basis")
{
    Matrix<RationalFunction> g(2, 2);
    g << RationalFunction(0), RationalFunction(1), RationalFunction(1), RationalFunction(0);
    BilinearForm<RationalFunction> f(g);
    OrthoCertificate<RationalFunction> cert;
    cert.basis = Matrix<RationalFunction>(2, 2);
    cert.basis << RationalFunction(1), RationalFunction(1),
                  RationalFunction(1), RationalFunction(-1);
    auto report = check_wwe(f, std::optional<OrthoCertificate<RationalFunction>>(cert));
    CHECK(report.negligible_is_limit_radical);
    CHECK(*report.certificate_diagonalizes_limit);
    CHECK(*report.enlarged_certificate_covers_family);

    // The limit form is the constant form itself.
    Matrix<Rational> st = st_form(f);
    CHECK(st(0, 1) == Rational(1));
    CHECK(st(0, 0) == Rational(0));
}

TEST_CASE("four-item report: robust family needs no certificate")
{
    Matrix<RationalFunction> g(2, 2);
    g << RationalFunction(1), inv_t(), inv_t(), RationalFunction(1);
    BilinearForm<RationalFunction> f(g);
    auto report = check_wwe(f, std::optional<OrthoCertificate<RationalFunction>>{});
    CHECK(report.negligible_is_limit_radical);
    CHECK(report.robust_implies_nondegenerate);
    CHECK(!report.certificate_diagonalizes_limit.has_value());
    CHECK(!report.enlarged_certificate_covers_family.has_value());
    CHECK(negligible_subspace(f).dimension() == 0);
}

TEST_CASE("four-item report: index-dependent bases are outside the fragment")
{
    BilinearForm<RationalFunction> f(diag_t(RationalFunction(1), inv_t()));
    OrthoCertificate<RationalFunction> cert;
    cert.basis = Matrix<RationalFunction>::Identity(2, 2);
    cert.basis(1, 1) = RationalFunction::t();  // still diagonalizes, but t-dependent
    try {
        (void)check_wwe(f, std::optional<OrthoCertificate<RationalFunction>>(cert));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CertificateNotConstant);
    }
}

TEST_CASE("four-item report: a non-diagonalizing certificate is rejected")
{
    Matrix<RationalFunction> g(2, 2);
    g << RationalFunction(0), RationalFunction(1), RationalFunction(1), RationalFunction(0);
    BilinearForm<RationalFunction> f(g);
    OrthoCertificate<RationalFunction> cert;
    cert.basis = Matrix<RationalFunction>::Identity(2, 2);
    CHECK_THROWS_AS((void)check_wwe(f, std::optional<OrthoCertificate<RationalFunction>>(cert)),
                    Error);
}

TEST_CASE("pipeline certificates over Q(t) feed the four-item report")
{
    // A single nondegenerate member avoids root extraction entirely.
    BilinearForm<RationalFunction> f(diag_t(RationalFunction(1), inv_t()));
    FormFamily<RationalFunction> family(FieldDescriptor::rational_functions(), {f});
    auto outcome = check_so(family);
    REQUIRE(outcome.verdict == CheckVerdict::Certified);
    auto report = check_wwe(f, outcome.certificate);
    CHECK(report.negligible_is_limit_radical);
    CHECK(*report.certificate_diagonalizes_limit);
}
