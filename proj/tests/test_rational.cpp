#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "cfhm/rational.hpp"

using cfhm::BigUint;
using cfhm::Rational;

TEST_CASE("big integer arithmetic basics") {
    BigUint a(0xffffffffffffffffULL);
    BigUint b = a + BigUint(1);
    CHECK(b.to_string() == "18446744073709551616");
    CHECK((b - BigUint(1)) == a);
    BigUint c = a * a;
    CHECK(c.to_string() == "340282366920938463426481119284349108225");
    BigUint t = c;
    CHECK(t.divmod_small(10) == 5);
}

TEST_CASE("gcd and normalization") {
    CHECK(BigUint::gcd(BigUint(48), BigUint(36)) == BigUint(12));
    CHECK(BigUint::gcd(BigUint(0), BigUint(7)) == BigUint(7));
    Rational r(6, 8);
    CHECK(r.to_string() == "3/4");
    Rational z(0, 5);
    CHECK(z.is_zero());
    CHECK(z.to_string() == "0/1");
}

TEST_CASE("rational sums and products reduce exactly") {
    Rational third = Rational::reciprocal(3);
    Rational sixth = Rational::reciprocal(6);
    CHECK((third + sixth).to_string() == "1/2");
    CHECK((third * sixth).to_string() == "1/18");
    Rational sum;
    for (int i = 0; i < 7; ++i) sum += Rational::reciprocal(7);
    CHECK(sum == Rational(1));
}

TEST_CASE("sums are order independent") {
    Rational a = Rational(1, 3) + Rational(1, 7) + Rational(1, 11);
    Rational b = Rational(1, 11) + Rational(1, 3) + Rational(1, 7);
    CHECK(a == b);
}

TEST_CASE("products of many reciprocals stay exact") {
    Rational p(1);
    for (std::uint64_t d = 999983; d < 999983 + 12; ++d) p = p * Rational::reciprocal(d);
    Rational q(1);
    for (std::uint64_t d = 999983 + 11;; --d) {
        q = q * Rational::reciprocal(d);
        if (d == 999983) break;
    }
    CHECK(p == q);
    CHECK(p.to_double() == doctest::Approx(1.0 / std::pow(999988.5, 12)).epsilon(1e-4));
}

TEST_CASE("comparisons") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(2, 4) <= Rational(1, 2));
    CHECK(Rational(5, 10) == Rational(1, 2));
    CHECK(Rational(7, 8).to_double() == doctest::Approx(0.875));
}
