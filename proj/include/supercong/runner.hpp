#pragma once

#include <supercong/report.hpp>

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace supercong {

struct RunConfig {
    std::filesystem::path cache_dir;
    int jobs = 1;
    enum class Format { Json, Csv, Table } format = Format::Json;
    long budget_max_index = 5000;
    bool verify_cache = false;
    bool with_timestamp = true;
};

/// Inclusive integer range selector.
struct Range {
    long lo = 0;
    long hi = 0;
};

/// Per-target grid overrides; absent selectors fall back to the target's
/// default grid.
struct Selectors {
    std::optional<Range> primes;
    std::optional<Range> n;
    std::optional<Range> x;
    std::optional<Range> r;
    std::optional<Range> s;
    std::optional<Range> l;
    std::optional<Range> a;
    std::optional<Range> b;
    std::optional<Range> m;
    std::optional<Range> k;
    std::optional<long> include_ppowers;
};

/// The work of one verify invocation: independent tasks plus the sequence
/// prefixes they will read, extended serially before any fan-out.
struct VerifyPlan {
    std::vector<std::function<ReportCase(SequenceStore&)>> tasks;
    std::vector<std::pair<SequenceKind, long>> preextend;
};

inline const std::vector<std::string>& verify_target_names() {
    static const std::vector<std::string> names = {
        "thm1a",
        "thm1b",
        "thm2",
        "sun-mod-n",
        "sun-p5",
        "guozeng-n3",
        "guozeng-p6",
        "guo-n2",
        "guo-p5",
        "identity:sun",
        "identity:guozeng",
        "identity:guofranel",
        "lemma:beukers",
        "lemma:jacobsthal",
        "lemma:power-sum",
        "lemma:half-power-sum",
        "lemma:block-odd",
        "lemma:block-shift",
        "lemma:block-double",
        "lemma:block-beukers",
        "lemma:binom-product-lift",
        "lemma:half-range-harmonic",
        "lemma:full-block-harmonic",
    };
    return names;
}

namespace detail {

inline std::vector<Prime> primes_in(const Range& range) {
    std::vector<Prime> out;
    for (long v = std::max<long>(range.lo, 2); v <= range.hi; ++v)
        if (is_prime(Integer(v))) out.emplace_back(Integer(v));
    return out;
}

// Primes for a target whose statement needs p >= pmin. An explicitly
// selected target rejects out-of-domain primes; under "all" they are
// filtered so one range can serve every target.
inline std::vector<Prime> primes_for(const Range& range, long pmin,
                                     const char* target, bool strict) {
    std::vector<Prime> primes = primes_in(range);
    std::vector<Prime> kept;
    for (Prime& p : primes) {
        if (p.value() >= pmin) {
            kept.push_back(std::move(p));
        } else if (strict) {
            throw PrimeTooSmall(std::string(target) + ": requires p >= " +
                                std::to_string(pmin) + ", got " +
                                p.value().get_str());
        }
    }
    return kept;
}

class PlanBuilder {
public:
    explicit PlanBuilder(long budget) : budget_(budget) {}

    long budget() const { return budget_; }

    void need(const SequenceKind& kind, long index) {
        if (index < 0) return;
        auto it = pre_.find(kind.id());
        if (it == pre_.end())
            pre_.emplace(kind.id(), std::make_pair(kind, index));
        else
            it->second.second = std::max(it->second.second, index);
    }

    void add(std::function<ReportCase(SequenceStore&)> task) {
        plan_.tasks.push_back(std::move(task));
    }

    VerifyPlan take() {
        for (auto& [id, entry] : pre_) plan_.preextend.push_back(entry);
        return std::move(plan_);
    }

private:
    long budget_;
    VerifyPlan plan_;
    std::map<std::string, std::pair<SequenceKind, long>> pre_;
};

// n-grid for the Dwork-type theorem checks: the requested range, augmented
// with p-power points {p^j : j <= R} and 2p so that nu_p(n) > 0 is
// exercised, keeping only points whose top sequence index p*n fits the
// budget. The explicit range is never filtered; an over-budget range
// surfaces as BudgetExceeded at pre-extension.
inline std::set<long> theorem_n_grid(const Prime& p, const Range& nrange,
                                     long ppowers, long budget) {
    std::set<long> ns;
    for (long v = std::max<long>(nrange.lo, 1); v <= nrange.hi; ++v)
        ns.insert(v);
    if (ppowers >= 1) {
        std::vector<Integer> candidates;
        Integer pj(1);
        for (long j = 1; j <= ppowers; ++j) {
            pj *= p.value();
            candidates.push_back(pj);
        }
        candidates.push_back(Integer(2 * p.value()));
        for (const Integer& cand : candidates) {
            const Integer top = cand * p.value();
            if (top.fits_slong_p() && top.get_si() <= budget &&
                cand.fits_slong_p())
                ns.insert(cand.get_si());
        }
    }
    return ns;
}

inline void add_theorem_target(PlanBuilder& b, const std::string& id,
                               const Selectors& sel, bool strict) {
    const bool is_thm2 = id == "thm2";
    const Range prange =
        sel.primes.value_or(is_thm2 ? Range{2, 13} : Range{5, 31});
    const auto primes = primes_for(prange, is_thm2 ? 2 : 5, id.c_str(), strict);
    const Range nrange = sel.n.value_or(Range{1, 10});
    const long ppowers = sel.include_ppowers.value_or(2);
    const SequenceKind kind = is_thm2 ? SequenceKind::t()
                              : id == "thm1a" ? SequenceKind::s1(1)
                                              : SequenceKind::s3();
    for (const Prime& p : primes) {
        for (long n : theorem_n_grid(p, nrange, ppowers, b.budget())) {
            const Integer top = p.value() * n;
            if (top.fits_slong_p()) b.need(kind, top.get_si());
            b.add([id, p, n](SequenceStore& store) {
                if (id == "thm1a")
                    return to_report_case(check_thm1_first(store, p, n));
                if (id == "thm1b")
                    return to_report_case(check_thm1_second(store, p, n));
                return to_report_case(check_thm2(store, p, n));
            });
        }
    }
}

inline void add_prior_modn_target(PlanBuilder& b, const std::string& id,
                                  const Selectors& sel) {
    const Range nrange = sel.n.value_or(Range{1, 30});
    const long nmax = std::max<long>(nrange.hi, 1);
    if (id == "sun-mod-n") {
        const Range xrange = sel.x.value_or(Range{-5, 5});
        for (long x = xrange.lo; x <= xrange.hi; ++x) {
            b.need(SequenceKind::s1(x), nmax);
            for (long n = std::max<long>(nrange.lo, 1); n <= nrange.hi; ++n)
                b.add([n, x](SequenceStore& store) {
                    return to_report_case(check_sun_mod_n(store, n, Integer(x)));
                });
        }
        return;
    }
    const SequenceKind kind =
        id == "guozeng-n3" ? SequenceKind::s3() : SequenceKind::t();
    b.need(kind, nmax);
    for (long n = std::max<long>(nrange.lo, 1); n <= nrange.hi; ++n)
        b.add([id, n](SequenceStore& store) {
            return to_report_case(id == "guozeng-n3"
                                      ? check_guozeng_mod_n3(store, n)
                                      : check_guo_franel_mod_n2(store, n));
        });
}

inline void add_prior_ppower_target(PlanBuilder& b, const std::string& id,
                                    const Selectors& sel, bool strict) {
    const Range prange = sel.primes.value_or(Range{5, 13});
    const auto primes = primes_for(prange, 5, id.c_str(), strict);
    long pmax = 0;
    for (const Prime& p : primes) pmax = std::max(pmax, to_long(p.value()));
    if (id == "sun-p5") {
        b.need(SequenceKind::s1(1), pmax);
        if (pmax >= 3) b.need(SequenceKind::bernoulli(), pmax - 3);
    } else if (id == "guozeng-p6") {
        b.need(SequenceKind::s3(), pmax);
    } else {
        b.need(SequenceKind::t(), pmax);
    }
    for (const Prime& p : primes)
        b.add([id, p](SequenceStore& store) {
            if (id == "sun-p5") return to_report_case(check_sun_p5(store, p));
            if (id == "guozeng-p6")
                return to_report_case(check_guozeng_p6(store, p));
            return to_report_case(check_guo_franel_p5(store, p));
        });
}

inline void add_identity_target(PlanBuilder& b, const std::string& id,
                                const Selectors& sel) {
    if (id != "identity:sun" && id != "identity:guozeng" &&
        id != "identity:guofranel")
        throw std::invalid_argument("unknown identity target: " + id);
    const Range nrange = sel.n.value_or(Range{1, 50});
    if (id == "identity:sun") {
        const Range xrange = sel.x.value_or(Range{-10, 10});
        for (long n = std::max<long>(nrange.lo, 1); n <= nrange.hi; ++n)
            for (long x = xrange.lo; x <= xrange.hi; ++x)
                b.add([n, x](SequenceStore&) {
                    return to_report_case(check_sun_identity(n, Integer(x)));
                });
        return;
    }
    for (long n = std::max<long>(nrange.lo, 1); n <= nrange.hi; ++n)
        b.add([id, n](SequenceStore&) {
            return to_report_case(id == "identity:guozeng"
                                      ? check_guo_zeng_identity(n)
                                      : check_guo_franel_identity(n));
        });
}

inline void add_lemma_target(PlanBuilder& b, const std::string& id,
                             const Selectors& sel, bool strict) {
    const std::string name = id.substr(std::string("lemma:").size());
    bool known = false;
    for (const std::string& t : verify_target_names())
        if (t == id) known = true;
    if (!known) throw std::invalid_argument("unknown lemma target: " + id);
    const bool wide_primes =
        name == "beukers" || name == "jacobsthal" || name == "power-sum";
    const Range dflt = wide_primes ? Range{2, 13} : Range{5, 13};
    Range prange = sel.primes.value_or(dflt);
    if (!strict) {
        // under "all", an explicit prime range narrows each lemma's default
        // domain instead of widening it
        prange.lo = std::max(prange.lo, dflt.lo);
        prange.hi = std::min(prange.hi, dflt.hi);
    }
    const auto primes = primes_in(prange);
    const Range rrange = sel.r.value_or(Range{1, 2});

    for (const Prime& p : primes) {
        if (name == "beukers") {
            const Range nrange = sel.n.value_or(Range{1, 3});
            const Range krange = sel.k.value_or(Range{1, 6});
            for (long r = std::max<long>(rrange.lo, 1); r <= rrange.hi; ++r)
                for (long n = std::max<long>(nrange.lo, 1); n <= nrange.hi; ++n)
                    for (long k = std::max<long>(krange.lo, 1); k <= krange.hi;
                         ++k)
                        b.add([p, r, n, k](SequenceStore&) {
                            return to_report_case(check_beukers(p, r, n, k));
                        });
        } else if (name == "jacobsthal") {
            const Range srange = sel.s.value_or(Range{1, 2});
            const Range arange = sel.a.value_or(Range{-3, 3});
            const Range brange = sel.b.value_or(Range{1, 2});
            for (long r = std::max<long>(rrange.lo, 1); r <= rrange.hi; ++r)
                for (long s = std::max<long>(srange.lo, 1); s <= srange.hi; ++s)
                    for (long a = arange.lo; a <= arange.hi; ++a)
                        for (long bb = brange.lo; bb <= brange.hi; ++bb)
                            b.add([p, r, s, a, bb](SequenceStore&) {
                                return to_report_case(check_jacobsthal(
                                    p, r, s, Integer(a), Integer(bb)));
                            });
        } else if (name == "power-sum" || name == "half-power-sum") {
            const Range nrange = sel.n.value_or(
                name == "power-sum" ? Range{-3, 3} : Range{-2, 2});
            for (long r = std::max<long>(rrange.lo, 1); r <= rrange.hi; ++r)
                for (long n = nrange.lo; n <= nrange.hi; ++n) {
                    if (n == 0) continue;
                    if (name == "half-power-sum" && n % 2 != 0) continue;
                    const bool half = name == "half-power-sum";
                    b.add([p, r, n, half](SequenceStore&) {
                        return to_report_case(half ? check_half_power_sum(p, r, n)
                                                   : check_power_sum(p, r, n));
                    });
                }
        } else if (name == "block-odd" || name == "block-shift" ||
                   name == "block-double" || name == "block-beukers") {
            const Range lrange = sel.l.value_or(Range{0, 5});
            for (long r = std::max<long>(rrange.lo, 1); r <= rrange.hi; ++r)
                for (long l = std::max<long>(lrange.lo, 0); l <= lrange.hi; ++l)
                    b.add([p, r, l, name](SequenceStore&) {
                        if (name == "block-odd")
                            return to_report_case(check_block_odd(p, r, l));
                        if (name == "block-shift")
                            return to_report_case(check_block_shift(p, r, l));
                        if (name == "block-double")
                            return to_report_case(check_block_double(p, r, l));
                        return to_report_case(check_block_beukers(p, r, l));
                    });
        } else if (name == "binom-product-lift") {
            const Range mrange = sel.m.value_or(Range{1, 3});
            const Range krange = sel.k.value_or(Range{1, 6});
            for (long r = std::max<long>(rrange.lo, 1); r <= rrange.hi; ++r) {
                const Range srange = sel.s.value_or(Range{0, r - 1});
                for (long s = std::max<long>(srange.lo, 0);
                     s <= std::min<long>(srange.hi, r - 1); ++s)
                    for (long m = std::max<long>(mrange.lo, 1); m <= mrange.hi;
                         ++m) {
                        if (p.divides(static_cast<unsigned long>(m))) continue;
                        const Integer kcap =
                            pow_int(p.value(),
                                    static_cast<unsigned long>(r - s)) * m - 1;
                        for (long k = std::max<long>(krange.lo, 1);
                             k <= krange.hi; ++k) {
                            if (kcap.fits_slong_p() && k > kcap.get_si()) break;
                            b.add([p, r, s, m, k](SequenceStore&) {
                                return to_report_case(
                                    check_binom_product_lift(p, r, s, m, k));
                            });
                        }
                    }
            }
        } else if (name == "half-range-harmonic" ||
                   name == "full-block-harmonic") {
            const Range srange = sel.s.value_or(Range{1, 2});
            const Range lrange = sel.l.value_or(Range{0, 5});
            const bool half = name == "half-range-harmonic";
            for (long s = std::max<long>(srange.lo, 1); s <= srange.hi; ++s)
                for (long l = std::max<long>(lrange.lo, 0); l <= lrange.hi; ++l)
                    b.add([p, s, l, half](SequenceStore&) {
                        return to_report_case(
                            half ? check_half_range_harmonic(p, s, l)
                                 : check_full_block_harmonic(p, s, l));
                    });
        }
    }
}

inline void add_target(PlanBuilder& b, const std::string& target,
                       const Selectors& sel, bool strict) {
    if (target == "thm1a" || target == "thm1b" || target == "thm2")
        add_theorem_target(b, target, sel, strict);
    else if (target == "sun-mod-n" || target == "guozeng-n3" ||
             target == "guo-n2")
        add_prior_modn_target(b, target, sel);
    else if (target == "sun-p5" || target == "guozeng-p6" || target == "guo-p5")
        add_prior_ppower_target(b, target, sel, strict);
    else if (target.starts_with("identity:"))
        add_identity_target(b, target, sel);
    else if (target.starts_with("lemma:"))
        add_lemma_target(b, target, sel, strict);
    else
        throw std::invalid_argument("unknown verify target: " + target);
}

}  // namespace detail

/// Expands a verify target plus selectors into concrete tasks. "all" runs
/// every target on its default grid (intersected with any explicit prime
/// range); naming a target makes its domain constraints strict, so a prime
/// below the target's minimum is a usage error rather than a skip.
inline VerifyPlan build_verify_plan(const std::string& target,
                                    const Selectors& sel, long budget) {
    detail::PlanBuilder b(budget);
    if (target == "all") {
        for (const std::string& t : verify_target_names())
            detail::add_target(b, t, sel, /*strict=*/false);
    } else {
        detail::add_target(b, target, sel, /*strict=*/true);
    }
    return b.take();
}

/// Extends the needed sequence prefixes serially, then evaluates every task
/// (a worker pool when jobs > 1; tasks only read the store) and emits the
/// deterministic sorted report. Results are keyed by task index, so the
/// report is byte-identical for any job count.
inline CongruenceReport run_plan(const VerifyPlan& plan, SequenceStore& store,
                                 const RunConfig& cfg) {
    for (const auto& [kind, index] : plan.preextend) store.extend(kind, index);
    std::vector<ReportCase> results(plan.tasks.size());
    if (cfg.jobs <= 1 || plan.tasks.size() <= 1) {
        for (size_t i = 0; i < plan.tasks.size(); ++i)
            results[i] = plan.tasks[i](store);
    } else {
        std::atomic<size_t> next{0};
        std::mutex failure_mutex;
        std::exception_ptr failure;
        auto work = [&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= plan.tasks.size()) return;
                try {
                    results[i] = plan.tasks[i](store);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < cfg.jobs; ++t) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }
    CongruenceReport report;
    if (cfg.with_timestamp) report.generated_at = rfc3339_utc_now();
    report.cases = std::move(results);
    report.sort_cases();
    return report;
}

}  // namespace supercong
