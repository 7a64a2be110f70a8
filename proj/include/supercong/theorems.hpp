#pragma once

#include <supercong/exactnum.hpp>
#include <supercong/lemmas.hpp>
#include <supercong/sequences.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace supercong {

/// A checker that requires p >= 5 was given a smaller prime.
class PrimeTooSmall : public std::invalid_argument {
public:
    explicit PrimeTooSmall(const std::string& what)
        : std::invalid_argument(what) {}
};

/// One verified congruence instance. required_exponent is always recomputed
/// from (p, n); achieved is the p-adic valuation of the exact difference
/// after the statement's 1/n^j factor is accounted for p-adically. witness
/// is the undivided exact difference.
struct CongruenceCase {
    std::string check_id;
    CaseParams params;
    long required_exponent = 0;
    ValuationResult achieved;
    bool integrality_ok = true;
    bool holds = false;
    CaseStatus status = CaseStatus::Fail;
    Integer witness;
};

namespace detail {

inline long nu_long(const Integer& n, const Prime& p) {
    const ValuationResult v = nu_p(n, p);
    return v.finite ? v.value : 0;
}

// Largest j with n^j dividing value; infinite for n = 1 or value = 0.
inline ValuationResult nadic_valuation(const Integer& value, const Integer& n) {
    if (value == 0 || n == 1) return ValuationResult::infinite();
    long j = 0;
    Integer rest = value;
    while (mpz_divisible_p(rest.get_mpz_t(), n.get_mpz_t())) {
        rest /= n;
        ++j;
    }
    return ValuationResult::of(j);
}

inline CongruenceCase settle_congruence(std::string check_id, CaseParams params,
                                        long required, ValuationResult achieved,
                                        bool integrality_ok, Integer witness) {
    CongruenceCase c;
    c.check_id = std::move(check_id);
    c.params = std::move(params);
    c.required_exponent = required;
    c.achieved = achieved;
    c.integrality_ok = integrality_ok;
    c.holds = achieved.at_least(required) && integrality_ok;
    c.status = c.holds ? CaseStatus::Pass : CaseStatus::Fail;
    c.witness = std::move(witness);
    return c;
}

inline long checked_index(const Integer& i) {
    if (!i.fits_slong_p())
        throw BudgetExceeded("sequence index " + i.get_str() +
                             " is far past any configured budget");
    return i.get_si();
}

inline void require_p5(const Prime& p, const char* check) {
    if (p.value() < 5)
        throw PrimeTooSmall(std::string(check) + ": requires p >= 5, got " +
                            p.value().get_str());
}

}  // namespace detail

/// Theorem: (1/n)(S1(pn) - p S1(n)) ≡ 0 (mod p^{4+3ν_p(n)}) for p >= 5,
/// where S1(n) = sum_{k<n} (2k+1) A_k. n | S1(n) makes the divided quantity
/// an integer; the division is nonetheless handled p-adically.
inline CongruenceCase check_thm1_first(SequenceStore& store, const Prime& p,
                                       long n) {
    detail::require_p5(p, "thm1a");
    if (n < 1) throw std::invalid_argument("thm1a: n < 1");
    const long pn = detail::checked_index(Integer(p.value() * n));
    const Integer diff = store.s1(pn) - p.value() * store.s1(n);
    const long nun = detail::nu_long(Integer(n), p);
    ValuationResult achieved = ValuationResult::infinite();
    if (diff != 0) achieved = ValuationResult::of(detail::nu_long(diff, p) - nun);
    const bool integral = mpz_divisible_p(diff.get_mpz_t(), Integer(n).get_mpz_t());
    return detail::settle_congruence("thm1a", {{"p", p.value()}, {"n", n}},
                                     4 + 3 * nun, achieved, integral, diff);
}

/// Theorem: (1/n^3)(S3(pn) - p^3 S3(n)) ≡ 0 (mod p^{6+3ν_p(n)}) for p >= 5,
/// where S3(n) = sum_{k<n} (2k+1)^3 A_k.
inline CongruenceCase check_thm1_second(SequenceStore& store, const Prime& p,
                                        long n) {
    detail::require_p5(p, "thm1b");
    if (n < 1) throw std::invalid_argument("thm1b: n < 1");
    const long pn = detail::checked_index(Integer(p.value() * n));
    const Integer diff = store.s3(pn) - pow_int(p.value(), 3) * store.s3(n);
    const long nun = detail::nu_long(Integer(n), p);
    ValuationResult achieved = ValuationResult::infinite();
    if (diff != 0)
        achieved = ValuationResult::of(detail::nu_long(diff, p) - 3 * nun);
    const bool integral =
        mpz_divisible_p(diff.get_mpz_t(), pow_int(Integer(n), 3).get_mpz_t());
    return detail::settle_congruence("thm1b", {{"p", p.value()}, {"n", n}},
                                     6 + 3 * nun, achieved, integral, diff);
}

/// Theorem: (1/n^3)(T(pn) - p^2 T(n)) ≡ 0 (mod p^3) for every prime,
/// where T(n) = sum_{k<n} (3k+2)(-1)^k f_k. The modulus does not grow with
/// ν_p(n). Integrality asserts only n^2 | T-difference (Guo's mod-n^2
/// result); n^3-divisibility over the integers is not claimed.
inline CongruenceCase check_thm2(SequenceStore& store, const Prime& p, long n) {
    if (n < 1) throw std::invalid_argument("thm2: n < 1");
    const long pn = detail::checked_index(Integer(p.value() * n));
    const Integer diff = store.t(pn) - pow_int(p.value(), 2) * store.t(n);
    const long nun = detail::nu_long(Integer(n), p);
    ValuationResult achieved = ValuationResult::infinite();
    if (diff != 0)
        achieved = ValuationResult::of(detail::nu_long(diff, p) - 3 * nun);
    const bool integral =
        mpz_divisible_p(diff.get_mpz_t(), pow_int(Integer(n), 2).get_mpz_t());
    return detail::settle_congruence("thm2", {{"p", p.value()}, {"n", n}}, 3,
                                     achieved, integral, diff);
}

/// Prior result (Sun): sum_{k<n} (2k+1) A_k(x) ≡ 0 (mod n) for every
/// positive n and integer x. Reported with the n-adic valuation of the sum.
inline CongruenceCase check_sun_mod_n(SequenceStore& store, long n,
                                      const Integer& x) {
    if (n < 1) throw std::invalid_argument("sun-mod-n: n < 1");
    const Integer value = store.s1(n, x);
    const ValuationResult achieved = detail::nadic_valuation(value, Integer(n));
    return detail::settle_congruence("sun-mod-n", {{"n", n}, {"x", x}}, 1,
                                     achieved, achieved.at_least(1), value);
}

/// Prior result (Sun): sum_{k<p} (2k+1) A_k ≡ p + (7/6) p^4 B_{p-3}
/// (mod p^5) for p >= 5.
inline CongruenceCase check_sun_p5(SequenceStore& store, const Prime& p) {
    detail::require_p5(p, "sun-p5");
    const long pl = detail::checked_index(p.value());
    const Rational lhs{store.s1(pl)};
    const Rational b = store.bernoulli_at(pl - 3);
    Rational rhs = Rational(p.value()) +
                   Rational(7, 6) * Rational(pow_int(p.value(), 4)) * b;
    const bool integral = !p.divides(Integer(mpq_denref(b.get_mpq_t())));
    const Rational diff = lhs - rhs;
    return detail::settle_congruence(
        "sun-p5", {{"p", p.value()}}, 5, nu_p(diff, p), integral,
        Integer(mpq_numref(diff.get_mpq_t())));
}

/// Prior result (Guo-Zeng): sum_{k<n} (2k+1)^3 A_k ≡ 0 (mod n^3).
inline CongruenceCase check_guozeng_mod_n3(SequenceStore& store, long n) {
    if (n < 1) throw std::invalid_argument("guozeng-n3: n < 1");
    const Integer value = store.s3(n);
    const ValuationResult achieved = detail::nadic_valuation(value, Integer(n));
    return detail::settle_congruence("guozeng-n3", {{"n", n}}, 3, achieved,
                                     achieved.at_least(3), value);
}

/// Prior result (Guo-Zeng): sum_{k<p} (2k+1)^3 A_k ≡ p^3 (mod p^6), p >= 5.
inline CongruenceCase check_guozeng_p6(SequenceStore& store, const Prime& p) {
    detail::require_p5(p, "guozeng-p6");
    const long pl = detail::checked_index(p.value());
    const Integer diff = store.s3(pl) - pow_int(p.value(), 3);
    ValuationResult achieved = ValuationResult::infinite();
    if (diff != 0) achieved = ValuationResult::of(detail::nu_long(diff, p));
    return detail::settle_congruence("guozeng-p6", {{"p", p.value()}}, 6,
                                     achieved, true, diff);
}

/// Prior result (Guo): sum_{k<n} (3k+2)(-1)^k f_k ≡ 0 (mod n^2).
inline CongruenceCase check_guo_franel_mod_n2(SequenceStore& store, long n) {
    if (n < 1) throw std::invalid_argument("guo-n2: n < 1");
    const Integer value = store.t(n);
    const ValuationResult achieved = detail::nadic_valuation(value, Integer(n));
    return detail::settle_congruence("guo-n2", {{"n", n}}, 2, achieved,
                                     achieved.at_least(2), value);
}

/// Prior result (Guo): sum_{k<p} (3k+2)(-1)^k f_k ≡ 2 p^2 (2^p - 1)^2
/// (mod p^5) for p >= 5.
inline CongruenceCase check_guo_franel_p5(SequenceStore& store, const Prime& p) {
    detail::require_p5(p, "guo-p5");
    const long pl = detail::checked_index(p.value());
    const Integer q = pow_int(Integer(2), static_cast<unsigned long>(pl)) - 1;
    const Integer diff = store.t(pl) - 2 * pow_int(p.value(), 2) * q * q;
    ValuationResult achieved = ValuationResult::infinite();
    if (diff != 0) achieved = ValuationResult::of(detail::nu_long(diff, p));
    return detail::settle_congruence("guo-p5", {{"p", p.value()}}, 5, achieved,
                                     true, diff);
}

/// Sequence accessor for the generic Dwork-type checker.
using SequenceAccessor = std::function<Rational(long)>;

/// Generic Dwork / Atkin-Swinnerton-Dyer shape:
/// a(np) ≡ γ_p a(n) (mod p^{k ν_p(n) + c}). γ_p is caller-supplied; the
/// achieved valuation is of the raw difference a(np) - γ a(n).
inline CongruenceCase dwork_check(const SequenceAccessor& a, const Prime& p,
                                  const Rational& gamma, long k, long c,
                                  long n) {
    if (n < 1) throw std::invalid_argument("dwork_check: n < 1");
    if (k < 0 || c < 0)
        throw std::invalid_argument("dwork_check: k, c must be >= 0");
    const long pn = detail::checked_index(Integer(p.value() * n));
    const Rational diff = a(pn) - gamma * a(n);
    const long nun = detail::nu_long(Integer(n), p);
    return detail::settle_congruence(
        "dwork", {{"p", p.value()}, {"n", n}, {"k", k}, {"c", c}},
        k * nun + c, nu_p(diff, p), true,
        Integer(mpq_numref(diff.get_mpq_t())));
}

/// Empirical profile of achieved valuation against ν_p(n) for one theorem
/// checker, with the minimal affine lower bound attained by the rows.
struct ValuationProfile {
    struct Row {
        Integer n;
        long nu_n = 0;
        ValuationResult achieved;
    };
    std::string check_id;
    Integer p;
    std::vector<Row> rows;
    bool has_fit = false;
    long slope = 0;
    long intercept = 0;
};

namespace detail {

inline CongruenceCase run_theorem_check(SequenceStore& store,
                                        const std::string& check_id,
                                        const Prime& p, long n) {
    if (check_id == "thm1a") return check_thm1_first(store, p, n);
    if (check_id == "thm1b") return check_thm1_second(store, p, n);
    if (check_id == "thm2") return check_thm2(store, p, n);
    throw std::invalid_argument("estimate: unknown check id " + check_id);
}

}  // namespace detail

/// Evaluates the check at n = m p^j for m in base_n (p ∤ m) and
/// 0 <= j <= max_r, recording the achieved valuation per row. The fitted
/// (slope, intercept) is the tightest affine bound achieved >= slope ν + c
/// that the finite rows admit, anchored at the lowest ν level.
inline ValuationProfile estimate_exponent(SequenceStore& store,
                                          const std::string& check_id,
                                          const Prime& p,
                                          const std::vector<Integer>& base_n,
                                          long max_r) {
    if (max_r < 0) throw std::invalid_argument("estimate: max_r < 0");
    ValuationProfile prof;
    prof.check_id = check_id;
    prof.p = p.value();
    for (long j = 0; j <= max_r; ++j) {
        const Integer pj = pow_int(p.value(), static_cast<unsigned long>(j));
        for (const Integer& m : base_n) {
            if (m < 1) throw std::invalid_argument("estimate: base n < 1");
            if (p.divides(m)) continue;
            const long n = detail::checked_index(Integer(m * pj));
            const CongruenceCase cc =
                detail::run_theorem_check(store, check_id, p, n);
            prof.rows.push_back({Integer(n), j, cc.achieved});
        }
    }
    std::sort(prof.rows.begin(), prof.rows.end(),
              [](const auto& a, const auto& b) { return a.n < b.n; });

    std::map<long, long> floor_by_nu;
    for (const auto& row : prof.rows) {
        if (!row.achieved.finite) continue;
        auto it = floor_by_nu.find(row.nu_n);
        if (it == floor_by_nu.end())
            floor_by_nu.emplace(row.nu_n, row.achieved.value);
        else
            it->second = std::min(it->second, row.achieved.value);
    }
    if (floor_by_nu.empty()) return prof;
    const auto [nu0, m0] = *floor_by_nu.begin();
    const auto floor_div = [](long a, long b) {
        long q = a / b;
        if (a % b != 0 && (a < 0) != (b < 0)) --q;
        return q;
    };
    long slope = 0;
    bool first = true;
    for (const auto& [nu, mv] : floor_by_nu) {
        if (nu == nu0) continue;
        const long s = floor_div(mv - m0, nu - nu0);
        slope = first ? s : std::min(slope, s);
        first = false;
    }
    prof.has_fit = true;
    prof.slope = slope;
    prof.intercept = m0 - slope * nu0;
    return prof;
}

}  // namespace supercong
