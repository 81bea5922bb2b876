#ifndef SIMORTH_FIELDS_HPP
#define SIMORTH_FIELDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "simorth/error.hpp"
#include "simorth/gfp.hpp"
#include "simorth/rational.hpp"
#include "simorth/rational_function.hpp"

namespace simorth {

enum class FieldKind { Rationals, PrimeField, RationalFunctions };

/** Deterministic Miller-Rabin, valid for all 64-bit inputs. */
inline bool is_prime(std::int64_t n)
{
    if (n < 2) return false;
    for (std::int64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = static_cast<std::uint64_t>(n - 1);
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
    };
    auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) {
        std::uint64_t acc = 1 % m;
        while (e) {
            if (e & 1) acc = mulmod(acc, a, m);
            a = mulmod(a, a, m);
            e >>= 1;
        }
        return acc;
    };
    const std::uint64_t m = static_cast<std::uint64_t>(n);
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a % m, d, m);
        if (x == 1 || x == m - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, m);
            if (x == m - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

/**
 * Runtime tag naming one of the supported exact fields: Q, GF(p) for an
 * odd or even prime p, and Q(t) ordered at infinity (ordering handled in
 * the hyperreal layer). Immutable; equality is structural.
 */
struct FieldDescriptor {
    FieldKind kind = FieldKind::Rationals;
    std::int64_t p = 0;

    static FieldDescriptor rationals() { return {FieldKind::Rationals, 0}; }

    static FieldDescriptor prime_field(std::int64_t p)
    {
        if (p < 2 || p >= (std::int64_t(1) << 31) || !is_prime(p))
            throw Error(ErrorCode::InvalidArgument,
                        "modulus " + std::to_string(p) + " is not a supported prime");
        return {FieldKind::PrimeField, p};
    }

    static FieldDescriptor rational_functions() { return {FieldKind::RationalFunctions, 0}; }

    std::int64_t characteristic() const { return kind == FieldKind::PrimeField ? p : 0; }

    std::string name() const
    {
        switch (kind) {
            case FieldKind::Rationals: return "Q";
            case FieldKind::PrimeField: return "GF(" + std::to_string(p) + ")";
            case FieldKind::RationalFunctions: return "Q(t)";
        }
        return "?";
    }

    friend bool operator==(const FieldDescriptor& a, const FieldDescriptor& b)
    {
        return a.kind == b.kind && a.p == b.p;
    }
    friend bool operator!=(const FieldDescriptor& a, const FieldDescriptor& b)
    {
        return !(a == b);
    }
};

/**
 * Per-scalar glue between the runtime descriptor and the scalar type:
 * literal embedding, parsing, printing and element enumeration.
 */
template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr FieldKind kind = FieldKind::Rationals;

    static void check(const FieldDescriptor& d)
    {
        if (d.kind != kind) throw Error(ErrorCode::FieldMismatch, "descriptor is not Q");
    }
    static Rational from_integer(const FieldDescriptor& d, long n)
    {
        check(d);
        return Rational(n);
    }
    static Rational parse(const FieldDescriptor& d, const std::string& s)
    {
        check(d);
        return Rational::parse(s);
    }
    static std::string print(const Rational& x) { return x.str(); }

    /** 0, 1, -1, 2, -2, ... so small combinations are tried first. */
    static std::vector<Rational> enumerate(const FieldDescriptor& d, std::size_t limit)
    {
        check(d);
        std::vector<Rational> out;
        long k = 0;
        while (out.size() < limit) {
            if (k == 0) {
                out.emplace_back(0);
            } else {
                out.emplace_back(k);
                if (out.size() < limit) out.emplace_back(-k);
            }
            ++k;
        }
        return out;
    }
};

template <>
struct ScalarTraits<GFp> {
    static constexpr FieldKind kind = FieldKind::PrimeField;

    static void check(const FieldDescriptor& d)
    {
        if (d.kind != kind) throw Error(ErrorCode::FieldMismatch, "descriptor is not GF(p)");
    }
    static GFp from_integer(const FieldDescriptor& d, long n)
    {
        check(d);
        return GFp(n, d.p);
    }
    static GFp parse(const FieldDescriptor& d, const std::string& s)
    {
        check(d);
        return GFp::parse(s, d.p);
    }
    static std::string print(const GFp& x) { return x.str(); }

    /** All p residues in ascending order, whatever the requested limit. */
    static std::vector<GFp> enumerate(const FieldDescriptor& d, std::size_t /*limit*/)
    {
        check(d);
        std::vector<GFp> out;
        out.reserve(static_cast<std::size_t>(d.p));
        for (std::int64_t v = 0; v < d.p; ++v) out.emplace_back(v, d.p);
        return out;
    }
};

template <>
struct ScalarTraits<RationalFunction> {
    static constexpr FieldKind kind = FieldKind::RationalFunctions;

    static void check(const FieldDescriptor& d)
    {
        if (d.kind != kind) throw Error(ErrorCode::FieldMismatch, "descriptor is not Q(t)");
    }
    static RationalFunction from_integer(const FieldDescriptor& d, long n)
    {
        check(d);
        return RationalFunction(n);
    }
    static RationalFunction parse(const FieldDescriptor& d, const std::string& s)
    {
        check(d);
        return RationalFunction::parse(s);
    }
    static std::string print(const RationalFunction& x) { return x.str(); }

    /** Constant section of Q(t), same order as the rationals. */
    static std::vector<RationalFunction> enumerate(const FieldDescriptor& d, std::size_t limit)
    {
        check(d);
        std::vector<RationalFunction> out;
        long k = 0;
        while (out.size() < limit) {
            if (k == 0) {
                out.emplace_back(0);
            } else {
                out.emplace_back(k);
                if (out.size() < limit) out.emplace_back(-static_cast<long>(k));
            }
            ++k;
        }
        return out;
    }
};

template <typename Scalar>
bool is_zero(const Scalar& x)
{
    return x.is_zero();
}

/** Characteristic seen by a scalar type under a given descriptor. */
template <typename Scalar>
std::int64_t characteristic(const FieldDescriptor& d)
{
    ScalarTraits<Scalar>::check(d);
    return d.characteristic();
}

}  // namespace simorth

#endif
