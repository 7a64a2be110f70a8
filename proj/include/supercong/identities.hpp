#pragma once

#include <supercong/exactnum.hpp>
#include <supercong/sequences.hpp>

#include <optional>
#include <string>
#include <vector>

namespace supercong {

enum class IdentityId { SunWeighted, GuoZengCubic, GuoFranel };

inline std::string identity_name(IdentityId id) {
    switch (id) {
        case IdentityId::SunWeighted: return "sun";
        case IdentityId::GuoZengCubic: return "guozeng";
        case IdentityId::GuoFranel: return "guofranel";
    }
    return "?";
}

/// Result of evaluating one closed-form identity exactly. holds is true iff
/// every stated form equals the lhs; lhs_integral carries the divisibility
/// side condition where one applies (true otherwise). These checks never
/// consult modular arithmetic: a failure here points at a sequences or
/// arithmetic bug, not at a congruence.
struct IdentityCheck {
    IdentityId identity_id;
    long n;
    std::optional<Integer> x;
    bool holds;
    bool lhs_integral;
    Rational lhs;
    std::vector<Rational> rhs_values;
};

namespace detail {

inline bool is_integral(const Rational& r) {
    return mpz_cmp_ui(mpq_denref(r.get_mpq_t()), 1) == 0;
}

}  // namespace detail

/// (1/n) sum_{k<n} (2k+1) A_k(x)
///   = sum_{k<n} C(n-1,k) C(n+k,k) C(n+k,2k+1) C(2k,k) x^k
///   = sum_{k<n} (n/(2k+1)) C(n-1,k)^2 C(n+k,k)^2 x^k.
/// The first member must additionally be an integer.
inline IdentityCheck check_sun_identity(long n, const Integer& x) {
    if (n < 1) throw std::invalid_argument("check_sun_identity: n < 1");
    Rational lhs{weighted_sum_S1(n, x), Integer(n)};
    lhs.canonicalize();

    Integer mid(0);
    Rational right(0);
    Integer xpow(1);
    const Integer nn(n);
    for (long k = 0; k < n; ++k) {
        if (k > 0) xpow *= x;
        const Integer c1 = binomial(n - 1, k);
        const Integer c2 = binomial(n + k, k);
        mid += c1 * c2 * binomial(n + k, 2 * k + 1) * binomial(2 * k, k) * xpow;
        Rational term{Integer(nn * c1 * c1 * c2 * c2 * xpow), Integer(2 * k + 1)};
        term.canonicalize();
        right += term;
    }

    IdentityCheck out{IdentityId::SunWeighted, n, x, false, false, lhs,
                      {Rational(mid), right}};
    out.holds = lhs == Rational(mid) && lhs == right;
    out.lhs_integral = detail::is_integral(lhs);
    return out;
}

/// sum_{k<n} (2k+1)^3 A_k
///   = n^2 sum_{k<n} C(n+k,k) C(n-1,k)^2 (2n C(n+k,k+1) - C(n+k,k))
///   = n^2 sum_{k<n} C(n+k,k)^2 C(n-1,k)^2 (2n^2/(k+1) - 1).
inline IdentityCheck check_guo_zeng_identity(long n) {
    if (n < 1) throw std::invalid_argument("check_guo_zeng_identity: n < 1");
    const Rational lhs{weighted_sum_S3(n)};

    Integer mid(0);
    Rational right(0);
    const Integer nn(n);
    const Integer n2 = nn * nn;
    for (long k = 0; k < n; ++k) {
        const Integer c1 = binomial(n + k, k);
        const Integer c2 = binomial(n - 1, k);
        mid += c1 * c2 * c2 *
               (2 * nn * binomial(n + k, k + 1) - c1);
        Rational frac{Integer(2 * n2), Integer(k + 1)};
        frac.canonicalize();
        right += Rational(Integer(c1 * c1 * c2 * c2)) * (frac - 1);
    }
    mid *= n2;
    right *= Rational(n2);

    IdentityCheck out{IdentityId::GuoZengCubic, n, std::nullopt, false, true,
                      lhs,          {Rational(mid), right}};
    out.holds = lhs == Rational(mid) && lhs == right;
    return out;
}

/// ((-1)^n / n^2) sum_{k<n} (3k+2)(-1)^k f_k
///   = n sum_{k=1}^{n} C(n-1,k-1)^3 (n^2 - 4k^2)/k^3 + 1.
inline IdentityCheck check_guo_franel_identity(long n) {
    if (n < 1) throw std::invalid_argument("check_guo_franel_identity: n < 1");
    Integer tn = weighted_sum_T(n);
    if (n % 2) tn = -tn;
    Rational lhs{tn, Integer(n) * Integer(n)};
    lhs.canonicalize();

    Rational sum(0);
    const Integer n2 = Integer(n) * Integer(n);
    for (long k = 1; k <= n; ++k) {
        const Integer c = binomial(n - 1, k - 1);
        Rational term{Integer(c * c * c * (n2 - Integer(4 * k) * k)),
                      pow_int(Integer(k), 3)};
        term.canonicalize();
        sum += term;
    }
    Rational rhs = Rational(Integer(n)) * sum + 1;

    IdentityCheck out{IdentityId::GuoFranel, n, std::nullopt, false, true, lhs,
                      {rhs}};
    out.holds = lhs == rhs;
    return out;
}

}  // namespace supercong
