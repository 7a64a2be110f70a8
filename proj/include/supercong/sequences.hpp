#pragma once

#include <supercong/exactnum.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace supercong {

/// A cache file failed structural validation (bad header, bad line format,
/// indices not contiguous from 0, unreduced rational, ...).
class CacheCorrupt : public std::runtime_error {
public:
    explicit CacheCorrupt(const std::string& what) : std::runtime_error(what) {}
};

/// A persisted value disagrees with recomputation (verification mode).
class CacheMismatch : public std::runtime_error {
public:
    explicit CacheMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// A sequence extension would pass the configured largest-index cap.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

enum class SeqTag {
    Apery,           // A_n
    AperyPoly,       // A_n(x)
    Franel,          // f_n
    Bernoulli,       // B_n (rational)
    WeightedApery1,  // sum_{k<n} (2k+1)   A_k(x), 0 at n = 0
    WeightedApery3,  // sum_{k<n} (2k+1)^3 A_k,    0 at n = 0
    WeightedFranel,  // sum_{k<n} (3k+2)(-1)^k f_k, 0 at n = 0
};

/// Identity of a generated sequence. Parameterized kinds carry their x as
/// part of the identity: distinct x means a distinct sequence (and a
/// distinct cache file).
struct SequenceKind {
    SeqTag tag;
    Integer x = 1;  // used by AperyPoly and WeightedApery1 only

    static SequenceKind apery() { return {SeqTag::Apery}; }
    static SequenceKind apery_poly(Integer xv) {
        return {SeqTag::AperyPoly, std::move(xv)};
    }
    static SequenceKind franel() { return {SeqTag::Franel}; }
    static SequenceKind bernoulli() { return {SeqTag::Bernoulli}; }
    static SequenceKind s1(Integer xv) {
        return {SeqTag::WeightedApery1, std::move(xv)};
    }
    static SequenceKind s3() { return {SeqTag::WeightedApery3}; }
    static SequenceKind t() { return {SeqTag::WeightedFranel}; }

    bool parameterized() const {
        return tag == SeqTag::AperyPoly || tag == SeqTag::WeightedApery1;
    }
    bool rational() const { return tag == SeqTag::Bernoulli; }
    bool partial_sum() const {
        return tag == SeqTag::WeightedApery1 || tag == SeqTag::WeightedApery3 ||
               tag == SeqTag::WeightedFranel;
    }

    /// Stable identifier, also used as the cache file stem and in the
    /// cache header line.
    std::string id() const {
        switch (tag) {
            case SeqTag::Apery: return "apery";
            case SeqTag::AperyPoly: return "apery_poly_x" + x.get_str();
            case SeqTag::Franel: return "franel";
            case SeqTag::Bernoulli: return "bernoulli";
            case SeqTag::WeightedApery1: return "s1_x" + x.get_str();
            case SeqTag::WeightedApery3: return "s3";
            case SeqTag::WeightedFranel: return "t";
        }
        return "?";
    }

    bool operator==(const SequenceKind& o) const {
        return tag == o.tag && (!parameterized() || x == o.x);
    }
};

// ---------------------------------------------------------------------------
// Pure single-value generators (definitional binomial sums).
// ---------------------------------------------------------------------------

namespace detail {

// t *= u^e, fusing factors into single-limb multiplies where they fit.
inline void mul_pow_ui(Integer& t, unsigned long u, int e) {
    while (e > 0) {
        unsigned long f = u;
        int used = 1;
        while (used < e) {
            unsigned long next;
            if (__builtin_mul_overflow(f, u, &next)) break;
            f = next;
            ++used;
        }
        mpz_mul_ui(t.get_mpz_t(), t.get_mpz_t(), f);
        e -= used;
    }
}

// t /= u^e; every intermediate division must be exact.
inline void divexact_pow_ui(Integer& t, unsigned long u, int e) {
    while (e > 0) {
        unsigned long f = u;
        int used = 1;
        while (used < e) {
            unsigned long next;
            if (__builtin_mul_overflow(f, u, &next)) break;
            f = next;
            ++used;
        }
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), f);
        e -= used;
    }
}

}  // namespace detail

/// A_n = sum_k C(n,k)^2 C(n+k,k)^2, evaluated by running the term ratio.
inline Integer apery(long n) {
    if (n < 0) throw std::invalid_argument("apery: n < 0");
    Integer term(1), acc(1);
    for (long k = 0; k < n; ++k) {
        const unsigned long u = static_cast<unsigned long>(n - k) *
                                static_cast<unsigned long>(n + k + 1);
        detail::mul_pow_ui(term, u, 2);
        detail::divexact_pow_ui(term, static_cast<unsigned long>(k + 1), 4);
        acc += term;
    }
    return acc;
}

/// The second form of A_n: sum_k C(n+k,2k)^2 C(2k,k)^2. Must agree with
/// apery(n) termwise; kept separate as a cross-check route.
inline Integer apery_alt(long n) {
    if (n < 0) throw std::invalid_argument("apery_alt: n < 0");
    Integer acc(0);
    for (long k = 0; k <= n; ++k) {
        Integer t = binomial(n + k, 2 * k) * binomial(2 * k, k);
        acc += t * t;
    }
    return acc;
}

/// A_n(x) = sum_k C(n,k)^2 C(n+k,k)^2 x^k; apery_poly(n, 1) = apery(n).
inline Integer apery_poly(long n, const Integer& x) {
    if (n < 0) throw std::invalid_argument("apery_poly: n < 0");
    Integer coeff(1), xpow(1), acc(1);
    for (long k = 0; k < n; ++k) {
        const unsigned long u = static_cast<unsigned long>(n - k) *
                                static_cast<unsigned long>(n + k + 1);
        detail::mul_pow_ui(coeff, u, 2);
        detail::divexact_pow_ui(coeff, static_cast<unsigned long>(k + 1), 4);
        xpow *= x;
        acc += coeff * xpow;
    }
    return acc;
}

/// f_n = sum_k C(n,k)^3.
inline Integer franel(long n) {
    if (n < 0) throw std::invalid_argument("franel: n < 0");
    Integer term(1), acc(1);
    for (long k = 0; k < n; ++k) {
        detail::mul_pow_ui(term, static_cast<unsigned long>(n - k), 3);
        detail::divexact_pow_ui(term, static_cast<unsigned long>(k + 1), 3);
        acc += term;
    }
    return acc;
}

namespace detail {

// Extends B_0..B_{size-1} to cover index upto, by solving
// sum_{k=0}^{m} C(m+1,k) B_k = 0 for B_m.
inline void extend_bernoulli(std::vector<Rational>& b, long upto) {
    if (b.empty()) b.emplace_back(1);
    for (long m = static_cast<long>(b.size()); m <= upto; ++m) {
        Rational acc(0);
        for (long k = 0; k < m; ++k)
            acc += Rational(binomial(m + 1, k)) * b[static_cast<size_t>(k)];
        acc /= Integer(m + 1);
        b.push_back(-acc);
    }
}

}  // namespace detail

/// B_n from the defining recurrence B_0 = 1, sum_{k<n} C(n,k) B_k = 0.
inline Rational bernoulli(long n) {
    if (n < 0) throw std::invalid_argument("bernoulli: n < 0");
    std::vector<Rational> b;
    detail::extend_bernoulli(b, n);
    return b[static_cast<size_t>(n)];
}

/// sum_{k=0}^{n-1} (2k+1) A_k(x).
inline Integer weighted_sum_S1(long n, const Integer& x) {
    if (n < 1) throw std::invalid_argument("weighted_sum_S1: n < 1");
    Integer acc(0);
    for (long k = 0; k < n; ++k) acc += Integer(2 * k + 1) * apery_poly(k, x);
    return acc;
}

/// sum_{k=0}^{n-1} (2k+1)^3 A_k.
inline Integer weighted_sum_S3(long n) {
    if (n < 1) throw std::invalid_argument("weighted_sum_S3: n < 1");
    Integer acc(0);
    for (long k = 0; k < n; ++k)
        acc += pow_int(Integer(2 * k + 1), 3) * apery(k);
    return acc;
}

/// sum_{k=0}^{n-1} (3k+2) (-1)^k f_k.
inline Integer weighted_sum_T(long n) {
    if (n < 1) throw std::invalid_argument("weighted_sum_T: n < 1");
    Integer acc(0);
    for (long k = 0; k < n; ++k) {
        Integer term = Integer(3 * k + 2) * franel(k);
        if (k % 2)
            acc -= term;
        else
            acc += term;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Cached sequences with optional persistence.
// ---------------------------------------------------------------------------

/// Gap-free values of one sequence, indexed from 0. A cached value, once
/// written, is never mutated. Partial-sum kinds store the empty sum 0 at
/// index 0, so index n holds the sum over k < n.
class SequenceCache {
public:
    const SequenceKind& kind() const { return kind_; }
    long size() const { return static_cast<long>(count_); }
    const std::filesystem::path& source_path() const { return path_; }

    const Integer& integer_at(long i) const { return ints_.at(static_cast<size_t>(i)); }
    const Rational& rational_at(long i) const { return rats_.at(static_cast<size_t>(i)); }

    /// Canonical text form, as persisted: decimal for integer kinds,
    /// num/den (den > 0, reduced) for rational kinds.
    std::string value_string(long i) const {
        if (kind_.rational()) {
            const Rational& r = rational_at(i);
            return Integer(mpq_numref(r.get_mpq_t())).get_str() + "/" +
                   Integer(mpq_denref(r.get_mpq_t())).get_str();
        }
        return integer_at(i).get_str();
    }

private:
    friend class SequenceStore;
    explicit SequenceCache(SequenceKind k) : kind_(std::move(k)) {}

    SequenceKind kind_;
    std::vector<Integer> ints_;
    std::vector<Rational> rats_;
    size_t count_ = 0;       // values present (== ints_.size() or rats_.size())
    long persisted_ = 0;     // lines already in the backing file
    bool loaded_ = false;
    std::filesystem::path path_;
};

/// Owns every sequence cache of a run. Extension is single-writer; once a
/// prefix is present, concurrent readers of that prefix are safe. With a
/// cache directory set, values load from and append to one file per kind.
class SequenceStore {
public:
    explicit SequenceStore(std::filesystem::path dir = {},
                           bool verify_on_load = false)
        : dir_(std::move(dir)), verify_on_load_(verify_on_load) {}

    void set_budget(long max_index) {
        if (max_index < 1) throw std::invalid_argument("budget must be >= 1");
        budget_ = max_index;
    }
    long budget() const { return budget_; }

    bool persistent() const { return !dir_.empty(); }
    const std::filesystem::path& directory() const { return dir_; }

    /// Ensures indices 0..upto are cached (loading persisted values first),
    /// computing and appending whatever is missing. Idempotent.
    SequenceCache& extend(const SequenceKind& kind, long upto) {
        if (upto < 0) throw std::invalid_argument("extend: upto < 0");
        if (upto > budget_)
            throw BudgetExceeded("sequence " + kind.id() + " needs index " +
                                 std::to_string(upto) + ", budget is " +
                                 std::to_string(budget_));
        SequenceCache& cache = slot(kind);
        if (!cache.loaded_) load(cache);
        if (cache.size() > upto) return cache;
        const long from = cache.size();
        compute_range(cache, upto);
        if (persistent()) append_file(cache, from);
        return cache;
    }

    /// Cache lookup without extension; the index must already be present.
    const SequenceCache& peek(const SequenceKind& kind) const {
        auto it = caches_.find(kind.id());
        if (it == caches_.end())
            throw std::out_of_range("no cache for " + kind.id());
        return it->second;
    }

    const Integer& apery_at(long n) { return extend(SequenceKind::apery(), n).integer_at(n); }
    const Integer& franel_at(long n) { return extend(SequenceKind::franel(), n).integer_at(n); }
    Rational bernoulli_at(long n) { return extend(SequenceKind::bernoulli(), n).rational_at(n); }

    Integer s1(long n, const Integer& x = 1) {
        return extend(SequenceKind::s1(x), n).integer_at(n);
    }
    Integer s3(long n) { return extend(SequenceKind::s3(), n).integer_at(n); }
    Integer t(long n) { return extend(SequenceKind::t(), n).integer_at(n); }

    /// Kinds currently held, in id order.
    std::vector<std::string> kinds() const {
        std::vector<std::string> out;
        for (const auto& [id, c] : caches_) out.push_back(id);
        return out;
    }

    static std::string header_line(const SequenceKind& kind) {
        return "#seqcache v1 " + kind.id();
    }

    std::filesystem::path file_path(const SequenceKind& kind) const {
        return dir_ / (kind.id() + ".seq");
    }

private:
    SequenceCache& slot(const SequenceKind& kind) {
        auto it = caches_.find(kind.id());
        if (it == caches_.end())
            it = caches_.emplace(kind.id(), SequenceCache(kind)).first;
        return it->second;
    }

    void push_int(SequenceCache& c, Integer v) {
        c.ints_.push_back(std::move(v));
        c.count_ = c.ints_.size();
    }
    void push_rat(SequenceCache& c, Rational v) {
        c.rats_.push_back(std::move(v));
        c.count_ = c.rats_.size();
    }

    // The base sequence a partial-sum kind accumulates. S1 at x = 1 shares
    // the plain Apery cache.
    static SequenceKind base_kind(const SequenceKind& kind) {
        switch (kind.tag) {
            case SeqTag::WeightedApery1:
                return kind.x == 1 ? SequenceKind::apery()
                                   : SequenceKind::apery_poly(kind.x);
            case SeqTag::WeightedApery3: return SequenceKind::apery();
            case SeqTag::WeightedFranel: return SequenceKind::franel();
            default: throw std::logic_error("base_kind: not a partial sum");
        }
    }

    void compute_range(SequenceCache& c, long upto) {
        const long from = c.size();
        switch (c.kind_.tag) {
            case SeqTag::Apery:
                for (long i = from; i <= upto; ++i) push_int(c, apery(i));
                break;
            case SeqTag::AperyPoly:
                for (long i = from; i <= upto; ++i)
                    push_int(c, apery_poly(i, c.kind_.x));
                break;
            case SeqTag::Franel:
                for (long i = from; i <= upto; ++i) push_int(c, franel(i));
                break;
            case SeqTag::Bernoulli:
                detail::extend_bernoulli(c.rats_, upto);
                c.count_ = c.rats_.size();
                break;
            case SeqTag::WeightedApery1:
            case SeqTag::WeightedApery3:
            case SeqTag::WeightedFranel: {
                long i = from;
                if (i == 0 && i <= upto) {
                    push_int(c, Integer(0));
                    ++i;
                }
                if (i > upto) break;
                SequenceCache& base = extend(base_kind(c.kind_), upto - 1);
                for (; i <= upto; ++i) {
                    const long k = i - 1;
                    Integer term;
                    switch (c.kind_.tag) {
                        case SeqTag::WeightedApery1:
                            term = Integer(2 * k + 1) * base.integer_at(k);
                            break;
                        case SeqTag::WeightedApery3:
                            term = pow_int(Integer(2 * k + 1), 3) * base.integer_at(k);
                            break;
                        default:
                            term = Integer(3 * k + 2) * base.integer_at(k);
                            if (k % 2) term = -term;
                            break;
                    }
                    push_int(c, c.ints_.back() + term);
                }
                break;
            }
        }
    }

    void load(SequenceCache& c) {
        c.loaded_ = true;
        if (!persistent()) return;
        c.path_ = file_path(c.kind_);
        std::ifstream in(c.path_);
        if (!in) return;  // cold start
        std::string line;
        if (!std::getline(in, line) || line != header_line(c.kind_))
            throw CacheCorrupt(c.path_.string() + ": bad header");
        long expect = 0;
        while (std::getline(in, line)) {
            const auto tab = line.find('\t');
            if (line.empty() || tab == std::string::npos)
                throw CacheCorrupt(c.path_.string() + ": bad line " +
                                   std::to_string(expect));
            long idx;
            try {
                idx = std::stol(line.substr(0, tab));
            } catch (const std::exception&) {
                throw CacheCorrupt(c.path_.string() + ": bad index field");
            }
            if (idx != expect)
                throw CacheCorrupt(c.path_.string() + ": index " +
                                   std::to_string(idx) + " where " +
                                   std::to_string(expect) + " expected");
            adopt_value(c, line.substr(tab + 1), expect);
            ++expect;
        }
        c.persisted_ = expect;
    }

    // Strict decimal grammar so that reused values re-emit byte-identically:
    // optional '-', digits, no leading zero, no "-0".
    static bool canonical_decimal(const std::string& s, bool allow_negative) {
        size_t i = (allow_negative && !s.empty() && s[0] == '-') ? 1 : 0;
        if (i >= s.size()) return false;
        if (s[i] == '0' && (s.size() > i + 1 || i == 1)) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    }

    void adopt_value(SequenceCache& c, const std::string& text, long idx) {
        if (c.kind_.rational()) {
            const auto slash = text.find('/');
            if (slash == std::string::npos)
                throw CacheCorrupt(c.path_.string() + ": rational without '/'");
            const std::string num = text.substr(0, slash);
            const std::string den = text.substr(slash + 1);
            if (!canonical_decimal(num, true) || !canonical_decimal(den, false) ||
                den == "0")
                throw CacheCorrupt(c.path_.string() + ": malformed rational");
            Rational v{Integer(num), Integer(den)};
            Rational canon = v;
            canon.canonicalize();
            if (Integer(mpq_numref(canon.get_mpq_t())) != Integer(mpq_numref(v.get_mpq_t())) ||
                Integer(mpq_denref(canon.get_mpq_t())) != Integer(mpq_denref(v.get_mpq_t())))
                throw CacheCorrupt(c.path_.string() + ": unreduced rational");
            if (verify_on_load_ && !(supercong::bernoulli(idx) == v))
                throw CacheMismatch(c.path_.string() + ": index " +
                                    std::to_string(idx) +
                                    " disagrees with recomputation");
            push_rat(c, std::move(v));
        } else {
            if (!canonical_decimal(text, true))
                throw CacheCorrupt(c.path_.string() + ": malformed integer");
            Integer v(text);
            if (verify_on_load_ && recompute_integer(c, idx) != v)
                throw CacheMismatch(c.path_.string() + ": index " +
                                    std::to_string(idx) +
                                    " disagrees with recomputation");
            push_int(c, std::move(v));
        }
    }

    // Recomputation for verify mode. Partial sums verify by telescoping
    // against the already-verified previous entry plus a freshly computed
    // base term, keeping whole-file verification quadratic.
    Integer recompute_integer(SequenceCache& c, long idx) {
        const long k = idx - 1;
        switch (c.kind_.tag) {
            case SeqTag::Apery: return supercong::apery(idx);
            case SeqTag::AperyPoly: return supercong::apery_poly(idx, c.kind_.x);
            case SeqTag::Franel: return supercong::franel(idx);
            case SeqTag::WeightedApery1:
                if (idx == 0) return 0;
                return c.ints_.back() +
                       Integer(2 * k + 1) * supercong::apery_poly(k, c.kind_.x);
            case SeqTag::WeightedApery3:
                if (idx == 0) return 0;
                return c.ints_.back() +
                       pow_int(Integer(2 * k + 1), 3) * supercong::apery(k);
            case SeqTag::WeightedFranel: {
                if (idx == 0) return 0;
                Integer term = Integer(3 * k + 2) * supercong::franel(k);
                if (k % 2) return Integer(c.ints_.back() - term);
                return Integer(c.ints_.back() + term);
            }
            default: throw std::logic_error("recompute_integer: rational kind");
        }
    }

    void append_file(SequenceCache& c, long from) {
        std::filesystem::create_directories(dir_);
        c.path_ = file_path(c.kind_);
        const bool fresh = c.persisted_ == 0;
        std::ofstream out(c.path_, fresh ? std::ios::trunc : std::ios::app);
        if (!out) throw CacheCorrupt(c.path_.string() + ": cannot open for write");
        if (fresh) {
            out << header_line(c.kind_) << '\n';
            from = 0;
        }
        for (long i = from; i < c.size(); ++i)
            out << i << '\t' << c.value_string(i) << '\n';
        out.flush();
        if (!out) throw CacheCorrupt(c.path_.string() + ": write failed");
        c.persisted_ = c.size();
    }

    std::filesystem::path dir_;
    bool verify_on_load_ = false;
    long budget_ = 5000;
    std::map<std::string, SequenceCache> caches_;
};

/// Spec-level entry point: a one-shot load-or-extend against a directory.
inline SequenceCache load_or_extend_cache(const SequenceKind& kind, long upto,
                                          const std::filesystem::path& dir,
                                          bool verify = false) {
    SequenceStore store(dir, verify);
    store.set_budget(std::max<long>(upto, 1));
    return store.extend(kind, upto);
}

}  // namespace supercong
