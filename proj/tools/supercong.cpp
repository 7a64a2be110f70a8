// supercong: exact-arithmetic batch verifier for Apery/Franel
// supercongruences. Subcommands: seq, verify, estimate, cache.
//
// Exit codes: 0 all cases pass; 1 some case failed; 2 bad arguments;
// 3 cache corruption or mismatch; 4 compute budget exceeded.

#include <supercong/report.hpp>
#include <supercong/runner.hpp>
#include <supercong/version.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace supercong;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailedCases = 1;
constexpr int kExitBadArguments = 2;
constexpr int kExitCacheError = 3;
constexpr int kExitBudget = 4;

Range parse_range(const std::string& text) {
    static const std::regex pattern(R"(^(-?\d+)(\.\.(-?\d+))?$)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern))
        throw CLI::ValidationError("expected N or A..B, got '" + text + "'");
    Range r;
    r.lo = std::stol(m[1].str());
    r.hi = m[3].matched ? std::stol(m[3].str()) : r.lo;
    if (r.hi < r.lo)
        throw CLI::ValidationError("empty range '" + text + "'");
    return r;
}

fs::path default_cache_dir() {
    if (const char* env = std::getenv("SUPERCONG_CACHE_DIR"); env && *env)
        return fs::path(env);
    if (const char* xdg = std::getenv("XDG_DATA_HOME"); xdg && *xdg)
        return fs::path(xdg) / "supercong";
    if (const char* home = std::getenv("HOME"); home && *home)
        return fs::path(home) / ".local" / "share" / "supercong";
    return fs::path("supercong-cache");
}

std::optional<SequenceKind> parse_kind_id(const std::string& id) {
    if (id == "apery") return SequenceKind::apery();
    if (id == "franel") return SequenceKind::franel();
    if (id == "bernoulli") return SequenceKind::bernoulli();
    if (id == "s3") return SequenceKind::s3();
    if (id == "t") return SequenceKind::t();
    static const std::regex poly(R"(^apery_poly_x(-?\d+)$)");
    static const std::regex s1(R"(^s1_x(-?\d+)$)");
    std::smatch m;
    if (std::regex_match(id, m, poly))
        return SequenceKind::apery_poly(Integer(m[1].str()));
    if (std::regex_match(id, m, s1))
        return SequenceKind::s1(Integer(m[1].str()));
    return std::nullopt;
}

// The range flags accept negative bounds ("--a -3..3"); glue such values to
// their flag so the parser does not mistake them for options.
std::vector<std::string> glue_negative_ranges(int argc, char** argv) {
    static const std::regex rangeish(R"(^-\d+(\.\.-?\d+)?$)");
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    std::vector<std::string> out;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i].size() > 2 && args[i][0] == '-' && args[i][1] == '-' &&
            i + 1 < args.size() && std::regex_match(args[i + 1], rangeish)) {
            out.push_back(args[i] + "=" + args[i + 1]);
            ++i;
        } else {
            out.push_back(args[i]);
        }
    }
    return out;
}

struct CliOptions {
    RunConfig config;
    std::string format = "json";

    // seq
    std::string seq_kind;
    long seq_upto = 0;
    long seq_x = 1;

    // verify
    std::string verify_target;
    std::map<std::string, std::string> ranges;  // flag name -> raw range
    long include_ppowers = -1;                  // -1 = target default

    // estimate
    std::string estimate_check;
    long estimate_p = 0;
    std::string estimate_base = "1";
    long estimate_max_r = 1;

    // cache
    std::string cache_action;
};

int emit_report(const CongruenceReport& report, const RunConfig& config) {
    switch (config.format) {
        case RunConfig::Format::Json: std::cout << report.to_json(); break;
        case RunConfig::Format::Csv: std::cout << report.to_csv(); break;
        case RunConfig::Format::Table: std::cout << report.to_table(); break;
    }
    return report.summary().failed == 0 ? kExitOk : kExitFailedCases;
}

int run_seq(const CliOptions& opt) {
    SequenceKind kind = SequenceKind::apery();
    if (opt.seq_kind == "apery") kind = SequenceKind::apery();
    else if (opt.seq_kind == "apery-poly") kind = SequenceKind::apery_poly(Integer(opt.seq_x));
    else if (opt.seq_kind == "franel") kind = SequenceKind::franel();
    else if (opt.seq_kind == "bernoulli") kind = SequenceKind::bernoulli();
    else if (opt.seq_kind == "s1") kind = SequenceKind::s1(Integer(opt.seq_x));
    else if (opt.seq_kind == "s3") kind = SequenceKind::s3();
    else if (opt.seq_kind == "t") kind = SequenceKind::t();
    else {
        std::cerr << "supercong: unknown sequence kind '" << opt.seq_kind
                  << "'\n";
        return kExitBadArguments;
    }
    if (opt.seq_upto < 0) {
        std::cerr << "supercong: --upto must be >= 0\n";
        return kExitBadArguments;
    }
    SequenceStore store(opt.config.cache_dir, opt.config.verify_cache);
    store.set_budget(std::max(opt.config.budget_max_index, opt.seq_upto));
    const SequenceCache& cache = store.extend(kind, opt.seq_upto);
    const long first = kind.partial_sum() ? 1 : 0;
    for (long i = first; i <= opt.seq_upto; ++i)
        std::cout << i << '\t' << cache.value_string(i) << '\n';
    return kExitOk;
}

int run_verify(const CliOptions& opt) {
    Selectors sel;
    auto range_of = [&](const char* name) -> std::optional<Range> {
        auto it = opt.ranges.find(name);
        if (it == opt.ranges.end()) return std::nullopt;
        return parse_range(it->second);
    };
    sel.primes = range_of("primes");
    sel.n = range_of("n");
    sel.x = range_of("x");
    sel.r = range_of("r");
    sel.s = range_of("s");
    sel.l = range_of("l");
    sel.a = range_of("a");
    sel.b = range_of("b");
    sel.m = range_of("m");
    sel.k = range_of("k");
    if (opt.include_ppowers >= 0) sel.include_ppowers = opt.include_ppowers;

    const VerifyPlan plan =
        build_verify_plan(opt.verify_target, sel, opt.config.budget_max_index);
    SequenceStore store(opt.config.cache_dir, opt.config.verify_cache);
    store.set_budget(opt.config.budget_max_index);
    const CongruenceReport report = run_plan(plan, store, opt.config);
    return emit_report(report, opt.config);
}

int run_estimate(const CliOptions& opt) {
    std::vector<Integer> base;
    std::string token;
    std::istringstream in(opt.estimate_base);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        base.emplace_back(token);
    }
    if (base.empty()) {
        std::cerr << "supercong: --base must list at least one integer\n";
        return kExitBadArguments;
    }
    const Prime p{Integer(opt.estimate_p)};
    SequenceStore store(opt.config.cache_dir, opt.config.verify_cache);
    store.set_budget(opt.config.budget_max_index);
    const ValuationProfile profile = estimate_exponent(
        store, opt.estimate_check, p, base, opt.estimate_max_r);

    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["check_id"] = profile.check_id;
    j["p"] = to_long(profile.p);
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : profile.rows) {
        nlohmann::ordered_json jr;
        jr["n"] = to_long(row.n);
        jr["nu_p_n"] = row.nu_n;
        if (row.achieved.finite)
            jr["achieved"] = row.achieved.value;
        else
            jr["achieved"] = "inf";
        j["rows"].push_back(std::move(jr));
    }
    if (profile.has_fit)
        j["fitted"] = {{"slope", profile.slope}, {"intercept", profile.intercept}};
    else
        j["fitted"] = nullptr;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_cache(const CliOptions& opt) {
    const fs::path dir = opt.config.cache_dir;
    if (opt.cache_action == "inspect") {
        if (!fs::exists(dir)) return kExitOk;
        std::map<std::string, fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.path().extension() == ".seq")
                files.emplace(entry.path().filename().string(), entry.path());
        for (const auto& [name, path] : files) {
            const std::string stem = path.stem().string();
            const auto kind = parse_kind_id(stem);
            long entries = -1;  // header line excluded
            std::ifstream in(path);
            std::string line;
            while (std::getline(in, line)) ++entries;
            std::cout << stem << '\t' << (kind ? "ok" : "unknown-kind") << '\t'
                      << entries << '\t' << path.string() << '\n';
        }
        return kExitOk;
    }
    if (opt.cache_action == "verify") {
        if (!fs::exists(dir)) return kExitOk;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.path().extension() != ".seq") continue;
            const std::string stem = entry.path().stem().string();
            const auto kind = parse_kind_id(stem);
            if (!kind) {
                std::cerr << "supercong: " << entry.path()
                          << ": unrecognized cache kind\n";
                return kExitCacheError;
            }
            long entries = -1;
            {
                std::ifstream in(entry.path());
                std::string line;
                while (std::getline(in, line)) ++entries;
            }
            if (entries <= 0) continue;
            SequenceStore store(dir, /*verify_on_load=*/true);
            store.set_budget(std::max(opt.config.budget_max_index, entries));
            store.extend(*kind, entries - 1);
            std::cout << stem << "\tverified\t" << entries << '\n';
        }
        return kExitOk;
    }
    if (opt.cache_action == "clear") {
        if (!fs::exists(dir)) return kExitOk;
        long removed = 0;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.path().extension() == ".seq")
                removed += fs::remove(entry.path()) ? 1 : 0;
        std::cout << "removed " << removed << " cache file(s)\n";
        return kExitOk;
    }
    std::cerr << "supercong: unknown cache action '" << opt.cache_action
              << "' (want inspect, verify or clear)\n";
    return kExitBadArguments;
}

}  // namespace

int main(int argc, char** argv) {
    CliOptions opt;
    CLI::App app{"Exact-arithmetic verifier for Apery/Franel supercongruences"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string cache_dir;
    app.add_option("--cache-dir", cache_dir,
                   "Sequence cache directory (overrides SUPERCONG_CACHE_DIR)");
    app.add_option("--jobs", opt.config.jobs, "Worker threads for grid runs")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", opt.format, "Report format: json, csv or table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    app.add_option("--budget", opt.config.budget_max_index,
                   "Largest sequence index the run may compute")
        ->check(CLI::PositiveNumber);
    app.add_flag_callback(
        "--no-timestamp",
        [&] { opt.config.with_timestamp = false; },
        "Omit generated_at so identical runs emit identical bytes");
    app.add_flag("--verify-cache", opt.config.verify_cache,
                 "Recompute and compare every value loaded from cache files");

    CLI::App* seq = app.add_subcommand(
        "seq", "Generate a sequence and print index<TAB>value lines");
    seq->add_option("kind", opt.seq_kind,
                    "apery, apery-poly, franel, bernoulli, s1, s3 or t")
        ->required();
    seq->add_option("--upto", opt.seq_upto, "Last index to emit")->required();
    seq->add_option("--x", opt.seq_x, "Argument x for apery-poly and s1");

    CLI::App* verify = app.add_subcommand(
        "verify", "Run a checker grid and emit a congruence report");
    verify->add_option("target", opt.verify_target,
                       "thm1a, thm1b, thm2, sun-mod-n, sun-p5, guozeng-n3, "
                       "guozeng-p6, guo-n2, guo-p5, identity:<id>, "
                       "lemma:<id>, or all")
        ->required();
    for (const char* name :
         {"primes", "n", "x", "r", "s", "l", "a", "b", "m", "k"}) {
        verify->add_option_function<std::string>(
            std::string("--") + name,
            [&opt, name](const std::string& value) {
                parse_range(value);  // fail fast on malformed input
                opt.ranges[name] = value;
            },
            std::string("Grid range for ") + name + " (N or A..B)");
    }
    verify->add_option("--include-ppowers", opt.include_ppowers,
                       "Also test n in {p^j, 2p} up to exponent R, within "
                       "the budget")
        ->check(CLI::NonNegativeNumber);

    CLI::App* estimate = app.add_subcommand(
        "estimate", "Empirical valuation profile for a theorem check");
    estimate->add_option("check", opt.estimate_check, "thm1a, thm1b or thm2")
        ->required();
    estimate->add_option("--p", opt.estimate_p, "Prime to probe")->required();
    estimate->add_option("--base", opt.estimate_base,
                         "Comma-separated base multipliers m (p-coprime)");
    estimate->add_option("--max-r", opt.estimate_max_r,
                         "Largest p-power exponent j in n = m p^j")
        ->check(CLI::NonNegativeNumber);

    CLI::App* cache =
        app.add_subcommand("cache", "Inspect, verify or clear cache files");
    cache->add_option("action", opt.cache_action, "inspect, verify or clear")
        ->required();

    const std::vector<std::string> args = glue_negative_ranges(argc, argv);
    try {
        // CLI11 parses reversed argv vectors.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadArguments;
    }

    opt.config.cache_dir =
        cache_dir.empty() ? default_cache_dir() : fs::path(cache_dir);
    if (opt.format == "csv") opt.config.format = RunConfig::Format::Csv;
    else if (opt.format == "table") opt.config.format = RunConfig::Format::Table;
    else opt.config.format = RunConfig::Format::Json;

    try {
        if (seq->parsed()) return run_seq(opt);
        if (verify->parsed()) return run_verify(opt);
        if (estimate->parsed()) return run_estimate(opt);
        if (cache->parsed()) return run_cache(opt);
    } catch (const BudgetExceeded& e) {
        std::cerr << "supercong: budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const CacheCorrupt& e) {
        std::cerr << "supercong: cache corrupt: " << e.what() << '\n';
        return kExitCacheError;
    } catch (const CacheMismatch& e) {
        std::cerr << "supercong: cache mismatch: " << e.what() << '\n';
        return kExitCacheError;
    } catch (const PrimeTooSmall& e) {
        std::cerr << "supercong: " << e.what() << '\n';
        return kExitBadArguments;
    } catch (const std::invalid_argument& e) {
        std::cerr << "supercong: " << e.what() << '\n';
        return kExitBadArguments;
    } catch (const std::exception& e) {
        std::cerr << "supercong: " << e.what() << '\n';
        return kExitBadArguments;
    }
    return kExitOk;
}
