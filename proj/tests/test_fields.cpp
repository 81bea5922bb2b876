#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "simorth/fields.hpp"
#include "test_support.hpp"

using namespace simorth;
using simorth::testing::Rng;

namespace {

template <typename Scalar>
void check_field_axioms(const FieldDescriptor& d, Rng& rng, int pairs)
{
    const Scalar zero = ScalarTraits<Scalar>::from_integer(d, 0);
    const Scalar one = ScalarTraits<Scalar>::from_integer(d, 1);
    for (int k = 0; k < pairs; ++k) {
        Scalar a = testing::random_scalar<Scalar>(rng, d);
        Scalar b = testing::random_scalar<Scalar>(rng, d);
        Scalar c = testing::random_scalar<Scalar>(rng, d);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + zero == a);
        CHECK(a * one == a);
        CHECK(a - a == zero);
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}

template <typename Scalar>
void check_roundtrip(const FieldDescriptor& d, Rng& rng, int count)
{
    for (int k = 0; k < count; ++k) {
        Scalar a = testing::random_scalar<Scalar>(rng, d);
        std::string s = ScalarTraits<Scalar>::print(a);
        Scalar back = ScalarTraits<Scalar>::parse(d, s);
        CHECK(back == a);
        // Printing is canonical: a second round trip yields the same text.
        CHECK(ScalarTraits<Scalar>::print(back) == s);
    }
}

}  // namespace

TEST_CASE("rational arithmetic basics")
{
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2).str() == "1/2");
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK(Rational(3, -6).str() == "-1/2");
    CHECK(Rational(0, 5).str() == "0");
    CHECK(Rational::parse("-7/3") == Rational(-7, 3));
    CHECK(Rational::parse("42") == Rational(42));
    CHECK_THROWS_AS(Rational::parse("1/0"), Error);
    CHECK_THROWS_AS(Rational::parse("x"), Error);
    CHECK_THROWS_AS(Rational::parse("1.5"), Error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
}

TEST_CASE("prime field arithmetic basics")
{
    GFp two(2, 7), four(4, 7);
    CHECK(two * four == GFp(1, 7));
    CHECK((GFp(3, 7) / GFp(5, 7)) * GFp(5, 7) == GFp(3, 7));
    CHECK(GFp::parse("-1", 7) == GFp(6, 7));
    CHECK(GFp(6, 7).str() == "6");
    CHECK_THROWS_AS(GFp(1, 5) + GFp(1, 7), Error);
    CHECK_THROWS_AS(GFp(1, 7) / GFp(0, 7), Error);

    // Unattached constants (Eigen's Scalar(0)/Scalar(1)) adopt a modulus.
    GFp unattached(1);
    CHECK(unattached + GFp(6, 7) == GFp(0, 7));
    CHECK(GFp(0) == GFp(0, 5));
}

TEST_CASE("fermat little theorem over small prime fields")
{
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
        for (std::int64_t v = 0; v < p; ++v) {
            GFp a(v, p);
            GFp acc(1, p);
            for (std::int64_t e = 0; e < p; ++e) acc = acc * a;
            CHECK(acc == a);
        }
    }
}

TEST_CASE("rational function reduction and canonical form")
{
    // (t+1)/(t^2-1) reduces to 1/(t-1).
    RationalFunction x(IntPoly::parse("t+1"), IntPoly::parse("t^2-1"));
    CHECK(x.numerator() == IntPoly(1));
    CHECK(x.denominator() == IntPoly::parse("t-1"));
    CHECK(x.str() == "(1)/(t-1)");

    // Negative leading denominator coefficient is normalized away.
    RationalFunction y(IntPoly::parse("t"), IntPoly::parse("-t+1"));
    CHECK(y.denominator().leading_coefficient() > 0);
    CHECK(y == RationalFunction(IntPoly::parse("-t"), IntPoly::parse("t-1")));

    // Contents are cancelled too.
    RationalFunction z(IntPoly::parse("2*t+2"), IntPoly::parse("4"));
    CHECK(z.numerator() == IntPoly::parse("t+1"));
    CHECK(z.denominator() == IntPoly(2));
}

TEST_CASE("rational function parsing")
{
    RationalFunction a = RationalFunction::parse("(2*t+1)/(t^2)");
    CHECK(a.numerator() == IntPoly::parse("2*t+1"));
    CHECK(a.denominator() == IntPoly::parse("t^2"));
    CHECK(a.str() == "(2*t+1)/(t^2)");
    CHECK(RationalFunction::parse(a.str()) == a);

    CHECK(RationalFunction::parse("t") == RationalFunction::t());
    CHECK(RationalFunction::parse("-t^3+2") ==
          RationalFunction(IntPoly::parse("-t^3+2"), IntPoly(1)));
    CHECK(RationalFunction::parse("1/2") ==
          RationalFunction(IntPoly(1), IntPoly(2)));
    CHECK(RationalFunction::parse("t/2") ==
          RationalFunction(IntPoly::parse("t"), IntPoly(2)));
    CHECK_THROWS_AS(RationalFunction::parse("1/0"), Error);
    CHECK_THROWS_AS(RationalFunction::parse("(t"), Error);
    CHECK_THROWS_AS(RationalFunction::parse("1/2/3"), Error);
    CHECK_THROWS_AS(RationalFunction::parse("t^"), Error);
    CHECK_THROWS_AS(RationalFunction::parse(""), Error);
}

TEST_CASE("field axioms on random values")
{
    Rng rng(20260819);
    check_field_axioms<Rational>(FieldDescriptor::rationals(), rng, 10000);
    check_field_axioms<GFp>(FieldDescriptor::prime_field(2), rng, 2500);
    check_field_axioms<GFp>(FieldDescriptor::prime_field(3), rng, 2500);
    check_field_axioms<GFp>(FieldDescriptor::prime_field(31), rng, 2500);
    check_field_axioms<GFp>(FieldDescriptor::prime_field(2147483647), rng, 2500);
    check_field_axioms<RationalFunction>(FieldDescriptor::rational_functions(), rng, 400);
}

TEST_CASE("parse-print round trips are the identity")
{
    Rng rng(99);
    check_roundtrip<Rational>(FieldDescriptor::rationals(), rng, 500);
    check_roundtrip<GFp>(FieldDescriptor::prime_field(13), rng, 500);
    check_roundtrip<RationalFunction>(FieldDescriptor::rational_functions(), rng, 300);
}

TEST_CASE("field descriptors")
{
    CHECK(FieldDescriptor::rationals().characteristic() == 0);
    CHECK(FieldDescriptor::prime_field(7).characteristic() == 7);
    CHECK(FieldDescriptor::rational_functions().characteristic() == 0);
    CHECK(FieldDescriptor::prime_field(2).name() == "GF(2)");
    CHECK_THROWS_AS(FieldDescriptor::prime_field(6), Error);
    CHECK_THROWS_AS(FieldDescriptor::prime_field(1), Error);
    CHECK_THROWS_AS(FieldDescriptor::prime_field(-3), Error);
    CHECK(is_prime(2147483647));
    CHECK(!is_prime(2147483649));
}

TEST_CASE("element enumeration order")
{
    auto q = ScalarTraits<Rational>::enumerate(FieldDescriptor::rationals(), 5);
    REQUIRE(q.size() == 5);
    CHECK(q[0] == Rational(0));
    CHECK(q[1] == Rational(1));
    CHECK(q[2] == Rational(-1));
    CHECK(q[3] == Rational(2));
    CHECK(q[4] == Rational(-2));

    auto f5 = ScalarTraits<GFp>::enumerate(FieldDescriptor::prime_field(5), 3);
    REQUIRE(f5.size() == 5);  // whole field, regardless of the limit
    for (std::int64_t v = 0; v < 5; ++v) CHECK(f5[static_cast<std::size_t>(v)] == GFp(v, 5));

    auto qt = ScalarTraits<RationalFunction>::enumerate(FieldDescriptor::rational_functions(), 3);
    REQUIRE(qt.size() == 3);
    CHECK(qt[0] == RationalFunction(0));
    CHECK(qt[1] == RationalFunction(1));
    CHECK(qt[2] == RationalFunction(-1));
}

TEST_CASE("polynomial gcd machinery")
{
    IntPoly a = IntPoly::parse("t^2-1");
    IntPoly b = IntPoly::parse("t^2+2*t+1");
    CHECK(IntPoly::gcd(a, b) == IntPoly::parse("t+1"));
    CHECK(IntPoly::gcd(IntPoly::parse("6*t"), IntPoly::parse("4")) == IntPoly(2));
    CHECK(IntPoly::gcd(IntPoly(), IntPoly::parse("-2*t")) == IntPoly::parse("2*t"));
    CHECK(IntPoly::divide_exact(IntPoly::parse("t^2-1"), IntPoly::parse("t-1")) ==
          IntPoly::parse("t+1"));
    CHECK_THROWS_AS(IntPoly::divide_exact(IntPoly::parse("t^2"), IntPoly::parse("t-1")), Error);

    Rng rng(7);
    for (int k = 0; k < 200; ++k) {
        IntPoly x = testing::random_int_poly(rng, 4, 6);
        IntPoly y = testing::random_int_poly(rng, 4, 6);
        if (y.is_zero()) continue;
        IntPoly g = IntPoly::gcd(x, y);
        if (x.is_zero()) continue;
        // gcd divides both arguments exactly.
        CHECK(IntPoly::divide_exact(x, g) * g == x);
        CHECK(IntPoly::divide_exact(y, g) * g == y);
    }
}

TEST_CASE("scalars behave as Eigen matrix entries")
{
    using M = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
    M a(2, 2), b(2, 2);
    a << Rational(1, 2), Rational(1), Rational(0), Rational(2);
    b << Rational(2), Rational(0), Rational(1, 3), Rational(1);
    M c = a * b;
    CHECK(c(0, 0) == Rational(4, 3));
    CHECK(c(1, 0) == Rational(2, 3));

    using G = Eigen::Matrix<GFp, Eigen::Dynamic, Eigen::Dynamic>;
    G i = G::Identity(2, 2);  // unattached constants
    G m(2, 2);
    m << GFp(2, 5), GFp(3, 5), GFp(4, 5), GFp(1, 5);
    G prod = i * m;
    CHECK(testing::exact_equal(prod, m));

    using T = Eigen::Matrix<RationalFunction, Eigen::Dynamic, Eigen::Dynamic>;
    T s(1, 2), u(2, 1);
    s << RationalFunction::t(), RationalFunction(1);
    u << RationalFunction(1), RationalFunction::t();
    T v = s * u;
    CHECK(v(0, 0) == RationalFunction::parse("2*t"));
}
