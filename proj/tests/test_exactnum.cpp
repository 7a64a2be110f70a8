#include <supercong/exactnum.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace supercong;

TEST_CASE("binomial small values", "[exactnum]") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(7, 0) == 1);
    CHECK(binomial(4, 7) == 0);
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(10, -1) == 0);
    CHECK(binomial(-1, -1) == 0);
}

TEST_CASE("binomial negative upper index", "[exactnum]") {
    // C(-n, k) = (-1)^k C(n+k-1, k)
    CHECK(binomial(-3, 2) == 6);
    CHECK(binomial(-1, 0) == 1);
    CHECK(binomial(-1, 1) == -1);
    CHECK(binomial(-2, 3) == -4);
    for (long n = 1; n <= 12; ++n)
        for (long k = 0; k <= 12; ++k) {
            Integer expected = binomial(n + k - 1, k);
            if (k % 2) expected = -expected;
            CHECK(binomial(-n, k) == expected);
        }
}

TEST_CASE("binomial symmetry and Pascal recurrence", "[exactnum]") {
    for (long n = 1; n <= 64; ++n)
        for (long k = 1; k <= n; ++k) {
            CHECK(binomial(n, k) == binomial(n, n - k));
            CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
        }
}

TEST_CASE("Apery summand identity", "[exactnum]") {
    // C(n,k) C(n+k,k) = C(n+k,2k) C(2k,k) termwise
    for (long n = 0; n <= 64; ++n)
        for (long k = 0; k <= n; ++k)
            CHECK(binomial(n, k) * binomial(n + k, k) ==
                  binomial(n + k, 2 * k) * binomial(2 * k, k));
}

TEST_CASE("nu_p basics", "[exactnum]") {
    const Prime p5{5}, p7{7};
    CHECK(nu_p(Integer(50), p5) == ValuationResult::of(2));
    CHECK(nu_p(Rational(49, 6), p5) == ValuationResult::of(0));
    CHECK(nu_p(Rational(0), p7) == ValuationResult::infinite());
    CHECK(nu_p(Rational(1, 25), p5) == ValuationResult::of(-2));
    CHECK(!ValuationResult::infinite().finite);
    CHECK(ValuationResult::infinite().at_least(1000000));
    CHECK(ValuationResult::of(3).at_least(3));
    CHECK_FALSE(ValuationResult::of(3).at_least(4));
    CHECK(ValuationResult::infinite().str() == "inf");
}

TEST_CASE("congruent examples", "[exactnum]") {
    const Prime p5{5};
    // 4 - 49/6 = -25/6, nu_5 = 2
    CHECK(congruent(Rational(4), Rational(49, 6), {p5, 2}));
    CHECK_FALSE(congruent(Rational(4), Rational(49, 6), {p5, 3}));
    CHECK(congruent(Rational(7, 3), Rational(7, 3), {p5, 100}));
    CHECK_FALSE(congruent(Rational(1), Rational(2), {p5, 1}));
    CHECK(congruent(Rational(1), Rational(2), {p5, 0}));
    CHECK_THROWS_AS(congruent(Rational(1, 5), Rational(0), {p5, 1}),
                    DenominatorNotCoprime);
}

TEST_CASE("congruent is an equivalence relation and restricts monotonely",
          "[exactnum]") {
    const Prime p{7};
    std::mt19937 rng(20240818);
    std::uniform_int_distribution<long> num(-500, 500);
    std::uniform_int_distribution<long> den(1, 60);
    auto draw = [&]() {
        Rational r;
        do {
            r = Rational(num(rng), den(rng));
            r.canonicalize();
        } while (p.divides(Integer(mpq_denref(r.get_mpq_t()))));
        return r;
    };
    for (int trial = 0; trial < 200; ++trial) {
        const Rational a = draw(), b = draw(), c = draw();
        for (long e = 0; e <= 3; ++e) {
            const PAdicModulus m{p, e};
            CHECK(congruent(a, a, m));
            CHECK(congruent(a, b, m) == congruent(b, a, m));
            if (congruent(a, b, m) && congruent(b, c, m))
                CHECK(congruent(a, c, m));
            // a case holding at e also holds at every smaller exponent
            if (congruent(a, b, m))
                for (long smaller = 0; smaller <= e; ++smaller)
                    CHECK(congruent(a, b, {p, smaller}));
        }
    }
}

TEST_CASE("valuation is multiplicative and ultrametric", "[exactnum]") {
    const Prime p{5};
    std::mt19937 rng(77);
    std::uniform_int_distribution<long> num(-4000, 4000);
    std::uniform_int_distribution<long> den(1, 200);
    auto draw = [&]() {
        Rational r;
        do {
            r = Rational(num(rng), den(rng));
            r.canonicalize();
        } while (sgn(r) == 0 ||
                 p.divides(Integer(mpq_denref(r.get_mpq_t()))));
        return r;
    };
    for (int trial = 0; trial < 300; ++trial) {
        const Rational x = draw(), y = draw();
        const long vx = nu_p(x, p).value, vy = nu_p(y, p).value;
        CHECK(nu_p(Rational(x * y), p) == ValuationResult::of(vx + vy));
        const ValuationResult vsum = nu_p(Rational(x + y), p);
        CHECK(vsum.at_least(std::min(vx, vy)));
    }
}

TEST_CASE("is_prime is deterministic and correct", "[exactnum]") {
    CHECK(is_prime(Integer(2)));
    CHECK(is_prime(Integer(5)));
    CHECK_FALSE(is_prime(Integer(1)));
    CHECK_FALSE(is_prime(Integer(0)));
    CHECK_FALSE(is_prime(Integer(91)));   // 7 * 13
    CHECK_FALSE(is_prime(Integer(561)));  // Carmichael
    // strong pseudoprime to bases 2, 3, 5 and 7
    CHECK_FALSE(is_prime(Integer("3215031751")));
    CHECK(is_prime(Integer("2305843009213693951")));  // 2^61 - 1
    CHECK_FALSE(is_prime((Integer(1) << 67) - 1));    // 2^67 - 1 factors
    long count = 0;
    for (long n = 2; n < 1000; ++n)
        if (is_prime(Integer(n))) ++count;
    CHECK(count == 168);
}

TEST_CASE("Prime certification", "[exactnum]") {
    const Prime p{13};
    CHECK(p.certified());
    CHECK(p.value() == 13);
    CHECK(p.divides(26u));
    CHECK_FALSE(p.divides(27u));
    CHECK_THROWS_AS(Prime{91}, std::invalid_argument);
}

TEST_CASE("restricted_harmonic_sum examples", "[exactnum]") {
    const Prime p3{3}, p5{5};
    CHECK(restricted_harmonic_sum(1, 8, p3, 1) == 27);
    CHECK(restricted_harmonic_sum(1, 0, p5, -2) == 0);
    CHECK(restricted_harmonic_sum(1, 4, p5, -1) == Rational(25, 12));
    CHECK_THROWS_AS(restricted_harmonic_sum(0, 4, p5, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(restricted_harmonic_sum(1, 4, p5, 0),
                    std::invalid_argument);
}

TEST_CASE("restricted_harmonic_sum agrees with the naive oracle",
          "[exactnum]") {
    // Term-by-term oracle, written independently of the implementation.
    auto oracle = [](long lo, long hi, long p, long t) {
        Rational acc(0);
        for (long k = lo; k <= hi; ++k) {
            if (k % p == 0) continue;
            Rational kk(k);
            Rational power(1);
            for (long i = 0; i < (t > 0 ? t : -t); ++i) power *= kk;
            if (t > 0)
                acc += power;
            else
                acc += Rational(1) / power;
        }
        return acc;
    };
    for (long p : {2L, 3L, 5L, 13L}) {
        const Prime prime{p};
        for (long t : {1L, 2L, -1L, -2L, -3L}) {
            CHECK(restricted_harmonic_sum(1, 2000, prime, t) ==
                  oracle(1, 2000, p, t));
            CHECK(restricted_harmonic_sum(17, 400, prime, t) ==
                  oracle(17, 400, p, t));
        }
    }
}

TEST_CASE("iverson bracket", "[exactnum]") {
    CHECK(iverson(true) == 1);
    CHECK(iverson(false) == 0);
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            CHECK(iverson(m == n) == (m == n ? 1 : 0));
}

TEST_CASE("mod_prime_power", "[exactnum]") {
    const Prime p5{5};
    // 49/6 mod 25: inverse of 6 is 21, 49*21 = 1029 = 41*25 + 4
    CHECK(mod_prime_power(Rational(49, 6), {p5, 2}) == 4);
    CHECK(mod_prime_power(Rational(4), {p5, 2}) == 4);
    CHECK(mod_prime_power(Rational(-1), {p5, 1}) == 4);
    CHECK(mod_prime_power(Rational(7), {p5, 0}) == 0);
    CHECK_THROWS_AS(mod_prime_power(Rational(1, 5), {p5, 2}),
                    DenominatorNotCoprime);
}

TEST_CASE("to_long guards overflow", "[exactnum]") {
    CHECK(to_long(Integer(-42)) == -42);
    CHECK_THROWS_AS(to_long(Integer(1) << 80), std::overflow_error);
}
