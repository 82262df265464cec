#include "dtcalc/rational.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace dtcalc;

namespace {

std::mt19937_64 rng(20240917);

ExtRat random_rational(long long span = 50) {
    std::uniform_int_distribution<long long> num(-span, span);
    std::uniform_int_distribution<long long> den(1, span);
    return ExtRat(num(rng), den(rng));
}

}  // namespace

TEST_CASE("construction reduces to lowest terms with positive denominator") {
    ExtRat v(10, 4);
    CHECK(v.numerator() == 5);
    CHECK(v.denominator() == 2);
    ExtRat w(6, -4);
    CHECK(w.numerator() == -3);
    CHECK(w.denominator() == 2);
    CHECK(ExtRat(0, 7) == ExtRat(0));
    CHECK_THROWS_AS(ExtRat(1, 0), division_by_zero);
}

TEST_CASE("total order places infinities at the ends") {
    CHECK(ExtRat::neg_inf() < ExtRat(-1000000));
    CHECK(ExtRat(1000000) < ExtRat::pos_inf());
    CHECK(ExtRat::neg_inf() < ExtRat::pos_inf());
    CHECK(ExtRat(1, 3) < ExtRat(1, 2));
    CHECK(ExtRat(-1, 2) < ExtRat(-1, 3));
    CHECK(ExtRat::pos_inf() == ExtRat::pos_inf());
}

TEST_CASE("arithmetic with infinities follows the determinate rules") {
    CHECK(ExtRat::pos_inf() + ExtRat(5) == ExtRat::pos_inf());
    CHECK(ExtRat::neg_inf() + ExtRat(5) == ExtRat::neg_inf());
    CHECK(ExtRat::pos_inf() + ExtRat::pos_inf() == ExtRat::pos_inf());
    CHECK(ExtRat::pos_inf() * ExtRat(-2) == ExtRat::neg_inf());
    CHECK(ExtRat::pos_inf() * ExtRat::neg_inf() == ExtRat::neg_inf());
    CHECK(ExtRat::pos_inf() / ExtRat(-3) == ExtRat::neg_inf());

    CHECK_THROWS_AS(ExtRat::pos_inf() - ExtRat::pos_inf(), indeterminate_form);
    CHECK_THROWS_AS(ExtRat::pos_inf() + ExtRat::neg_inf(), indeterminate_form);
    CHECK_THROWS_AS(ExtRat(0) * ExtRat::pos_inf(), indeterminate_form);
    CHECK_THROWS_AS(ExtRat::pos_inf() / ExtRat::pos_inf(), indeterminate_form);
    CHECK_THROWS_AS(ExtRat(1) / ExtRat::pos_inf(), indeterminate_form);
    CHECK_THROWS_AS(ExtRat(1) / ExtRat(0), division_by_zero);
}

TEST_CASE("reciprocal implements the two diagram conventions") {
    CHECK(ExtRat::pos_inf().reciprocal() == ExtRat(0));
    CHECK(ExtRat(0).reciprocal() == ExtRat::pos_inf());
    CHECK(ExtRat(3, 4).reciprocal() == ExtRat(4, 3));
    CHECK(ExtRat(-2).reciprocal() == ExtRat(-1, 2));
    CHECK_THROWS_AS(ExtRat::neg_inf().reciprocal(), indeterminate_form);
}

TEST_CASE("parse and print round trip") {
    for (const char* text : {"0", "7", "-3", "3/2", "-22/7", "inf", "-inf", "1000000007/999999937"}) {
        ExtRat v = ExtRat::parse(text);
        CHECK(v.str() == text);
        CHECK(ExtRat::parse(v.str()) == v);
    }
    CHECK(ExtRat::parse("10/4").str() == "5/2");
    CHECK(ExtRat::parse(" 1/2 ") == ExtRat(1, 2));
    CHECK_THROWS_AS(ExtRat::parse("1/0"), parse_error);
    CHECK_THROWS_AS(ExtRat::parse("1/"), parse_error);
    CHECK_THROWS_AS(ExtRat::parse("a/b"), parse_error);
    CHECK_THROWS_AS(ExtRat::parse("1.5"), parse_error);
    CHECK_THROWS_AS(ExtRat::parse(""), parse_error);

    try {
        ExtRat::parse("3/x");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.position == 2);
    }
}

TEST_CASE("order and arithmetic stay consistent over random triples") {
    for (int i = 0; i < 10000; ++i) {
        ExtRat a = random_rational(), b = random_rational(), c = random_rational();
        if (a < b) {
            CHECK(a + c < b + c);
        } else if (b < a) {
            CHECK(b + c < a + c);
        } else {
            CHECK(a + c == b + c);
        }
        ExtRat product = a * (b + c);
        CHECK(product == a * b + a * c);
        BigInt n = product.numerator();
        if (n < 0) n = -n;
        if (n != 0) CHECK(gcd(n, product.denominator()) == 1);
    }
}

TEST_CASE("random parse-print round trip") {
    for (int i = 0; i < 1000; ++i) {
        ExtRat v = random_rational(100000);
        CHECK(ExtRat::parse(v.str()) == v);
    }
}
