#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace supercong {

/// Arbitrary-precision signed integer. All arithmetic is exact.
using Integer = mpz_class;

/// Exact fraction, kept normalized (denominator > 0, gcd = 1).
using Rational = mpq_class;

/// A congruence was requested for a rational whose denominator is divisible
/// by p. Such a value is not a p-adic integer and the comparison is
/// undefined; this always signals caller misuse.
class DenominatorNotCoprime : public std::domain_error {
public:
    explicit DenominatorNotCoprime(const std::string& what)
        : std::domain_error(what) {}
};

/// Deterministic primality test. Trial division by the first few primes,
/// then Miller-Rabin with the fixed witness set {2,...,37}, which decides
/// primality for every n < 3.3e24 (in particular for all n < 2^64).
inline bool is_prime(const Integer& n) {
    static constexpr unsigned long witnesses[] = {2,  3,  5,  7,  11, 13,
                                                  17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (unsigned long q : witnesses) {
        if (n == q) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), q)) return false;
    }
    const Integer n1 = n - 1;
    Integer d = n1;
    const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    Integer x, base;
    for (unsigned long a : witnesses) {
        base = a;
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n1) continue;
        bool witness_found = true;
        for (unsigned long i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == n1) {
                witness_found = false;
                break;
            }
        }
        if (witness_found) return false;
    }
    return true;
}

/// A certified prime: the constructor runs the deterministic primality test
/// and rejects composites, so a live Prime is a proof of primality.
class Prime {
public:
    explicit Prime(Integer v) : value_(std::move(v)) {
        if (!is_prime(value_))
            throw std::invalid_argument("Prime: " + value_.get_str() +
                                        " is not prime");
        certified_ = true;
    }
    explicit Prime(long v) : Prime(Integer(v)) {}

    const Integer& value() const { return value_; }
    bool certified() const { return certified_; }

    /// True iff p divides k. Nonnegative k only.
    bool divides(unsigned long k) const {
        if (!value_.fits_ulong_p()) return k == 0;
        return k % value_.get_ui() == 0;
    }
    bool divides(const Integer& k) const {
        return mpz_divisible_p(k.get_mpz_t(), value_.get_mpz_t()) != 0;
    }

    bool operator==(const Prime& o) const { return value_ == o.value_; }

private:
    Integer value_;
    bool certified_ = false;
};

/// The modulus p^e. e = 0 makes every congruence trivially true.
struct PAdicModulus {
    Prime p;
    long e;

    PAdicModulus(Prime prime, long exponent) : p(std::move(prime)), e(exponent) {
        if (e < 0) throw std::invalid_argument("PAdicModulus: negative exponent");
    }

    Integer modulus() const {
        Integer m;
        mpz_pow_ui(m.get_mpz_t(), p.value().get_mpz_t(),
                   static_cast<unsigned long>(e));
        return m;
    }
};

/// p-adic valuation, with ν_p(0) = +infinity carried as an explicit marker
/// rather than a sentinel integer.
struct ValuationResult {
    bool finite = true;
    long value = 0;  // meaningful only when finite

    static ValuationResult infinite() { return {false, 0}; }
    static ValuationResult of(long v) { return {true, v}; }

    /// Does the valuation meet the exponent requirement e? The infinite
    /// case satisfies every requirement.
    bool at_least(long e) const { return !finite || value >= e; }

    bool operator==(const ValuationResult& o) const {
        return finite == o.finite && (!finite || value == o.value);
    }

    std::string str() const { return finite ? std::to_string(value) : "inf"; }
};

inline ValuationResult nu_p(const Integer& x, const Prime& p) {
    if (sgn(x) == 0) return ValuationResult::infinite();
    Integer rest;
    const auto v = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(),
                              p.value().get_mpz_t());
    return ValuationResult::of(static_cast<long>(v));
}

/// ν_p(num) - ν_p(den); ν_p(0) = +infinity.
inline ValuationResult nu_p(const Rational& x, const Prime& p) {
    if (sgn(x) == 0) return ValuationResult::infinite();
    Integer rest;
    const auto vn = mpz_remove(rest.get_mpz_t(), mpq_numref(x.get_mpq_t()),
                               p.value().get_mpz_t());
    const auto vd = mpz_remove(rest.get_mpz_t(), mpq_denref(x.get_mpq_t()),
                               p.value().get_mpz_t());
    return ValuationResult::of(static_cast<long>(vn) - static_cast<long>(vd));
}

/// Binomial coefficient, extended to negative upper index by the
/// rising-product convention C(n,k) = (-1)^k C(-n+k-1, k). k < 0 yields 0.
inline Integer binomial(const Integer& n, const Integer& k) {
    if (sgn(k) < 0) return 0;
    Integer kk = k;
    if (sgn(n) >= 0) {
        if (k > n) return 0;
        if (!kk.fits_ulong_p()) kk = n - k;  // symmetry keeps the index small
    }
    if (!kk.fits_ulong_p())
        throw std::overflow_error("binomial: lower index out of range");
    Integer r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), kk.get_ui());
    return r;
}

inline Integer binomial(long n, long k) { return binomial(Integer(n), Integer(k)); }

/// b^e for e >= 0.
inline Integer pow_int(const Integer& b, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Integer pow_int(unsigned long b, unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), b, e);
    return r;
}

/// True iff ν_p(a - b) >= e. Both operands must be p-adic integers
/// (denominators coprime to p); anything else throws.
inline bool congruent(const Rational& a, const Rational& b,
                      const PAdicModulus& m) {
    const Integer& p = m.p.value();
    if (mpz_divisible_p(mpq_denref(a.get_mpq_t()), p.get_mpz_t()) ||
        mpz_divisible_p(mpq_denref(b.get_mpq_t()), p.get_mpz_t()))
        throw DenominatorNotCoprime(
            "congruent: operand denominator divisible by " + p.get_str());
    if (m.e == 0) return true;
    return nu_p(Rational(a - b), m.p).at_least(m.e);
}

/// Residue in [0, p^e) of a p-integral rational: num * den^{-1} mod p^e.
inline Integer mod_prime_power(const Rational& x, const PAdicModulus& m) {
    const Integer mod = m.modulus();
    if (mod == 1) return 0;
    Integer den(mpq_denref(x.get_mpq_t()));
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw DenominatorNotCoprime(
            "mod_prime_power: denominator not invertible mod " + mod.get_str());
    Integer r = Integer(mpq_numref(x.get_mpq_t())) * inv;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
    return r;
}

/// Sum of k^t over lo <= k <= hi with p not dividing k, as an exact
/// rational. t may be negative (harmonic-type sums); t = 0 is rejected.
/// An empty range gives 0.
inline Rational restricted_harmonic_sum(long lo, long hi, const Prime& p,
                                        long t) {
    if (lo < 1) throw std::invalid_argument("restricted_harmonic_sum: lo < 1");
    if (t == 0) throw std::invalid_argument("restricted_harmonic_sum: t = 0");
    Rational acc(0);
    const unsigned long e =
        static_cast<unsigned long>(t > 0 ? t : -t);
    for (long k = lo; k <= hi; ++k) {
        if (p.divides(static_cast<unsigned long>(k))) continue;
        Integer kp = pow_int(static_cast<unsigned long>(k), e);
        if (t > 0)
            acc += Rational(kp);
        else
            acc += Rational(Integer(1), kp);
    }
    return acc;
}

/// Iverson bracket: [A] = 1 if A holds, else 0. [m = n] is the Kronecker
/// delta.
inline Integer iverson(bool assertion) { return assertion ? 1 : 0; }

/// Narrowing conversion that refuses to lose bits.
inline long to_long(const Integer& x) {
    if (!x.fits_slong_p())
        throw std::overflow_error("to_long: " + x.get_str() + " out of range");
    return x.get_si();
}

}  // namespace supercong
