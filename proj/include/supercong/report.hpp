#pragma once

#include <supercong/exactnum.hpp>
#include <supercong/identities.hpp>
#include <supercong/lemmas.hpp>
#include <supercong/theorems.hpp>
#include <supercong/version.hpp>

#include <json.hpp>

#include <algorithm>
#include <ctime>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace supercong {

/// The uniform row every checker result reduces to for report emission.
struct ReportCase {
    std::string check_id;
    CaseParams params;
    long required_exponent = 0;
    ValuationResult achieved;
    bool integrality_ok = true;
    bool holds = false;
    CaseStatus status = CaseStatus::Fail;
    std::string witness;
};

inline ReportCase to_report_case(const CongruenceCase& c) {
    return {c.check_id, c.params,  c.required_exponent, c.achieved,
            c.integrality_ok, c.holds, c.status, c.witness.get_str()};
}

inline std::string rational_string(const Rational& r) {
    const Integer den{mpq_denref(r.get_mpq_t())};
    const Integer num{mpq_numref(r.get_mpq_t())};
    if (den == 1) return num.get_str();
    return num.get_str() + "/" + den.get_str();
}

inline ReportCase to_report_case(const LemmaCase& c) {
    return {"lemma:" + lemma_name(c.lemma_id),
            c.params,
            c.required_exponent,
            c.achieved,
            true,
            c.holds,
            c.status,
            rational_string(c.difference)};
}

/// Identities are exact equalities: achieved is the infinite marker when
/// every form matches (the difference is identically zero) and 0 otherwise.
inline ReportCase to_report_case(const IdentityCheck& c) {
    ReportCase out;
    out.check_id = "identity:" + identity_name(c.identity_id);
    out.params.emplace_back("n", Integer(c.n));
    if (c.x) out.params.emplace_back("x", *c.x);
    out.required_exponent = 0;
    out.achieved =
        c.holds ? ValuationResult::infinite() : ValuationResult::of(0);
    out.integrality_ok = c.lhs_integral;
    out.holds = c.holds && c.lhs_integral;
    out.status = out.holds ? CaseStatus::Pass : CaseStatus::Fail;
    out.witness = rational_string(c.lhs);
    return out;
}

struct ReportSummary {
    long total = 0;
    long passed = 0;
    long failed = 0;
    long degenerate = 0;
    long hypothesis_violated = 0;
};

/// A deterministic batch report: cases sorted by (check_id, params),
/// summary counts derived from the case list. generated_at is omitted
/// entirely under --no-timestamp so reports compare byte-for-byte.
struct CongruenceReport {
    std::string tool_version = kToolVersion;
    std::optional<std::string> generated_at;
    std::vector<ReportCase> cases;

    void sort_cases() {
        std::sort(cases.begin(), cases.end(),
                  [](const ReportCase& a, const ReportCase& b) {
                      if (a.check_id != b.check_id)
                          return a.check_id < b.check_id;
                      const size_t n = std::min(a.params.size(), b.params.size());
                      for (size_t i = 0; i < n; ++i) {
                          if (a.params[i].first != b.params[i].first)
                              return a.params[i].first < b.params[i].first;
                          const int c =
                              cmp(a.params[i].second, b.params[i].second);
                          if (c != 0) return c < 0;
                      }
                      return a.params.size() < b.params.size();
                  });
    }

    ReportSummary summary() const {
        ReportSummary s;
        s.total = static_cast<long>(cases.size());
        for (const ReportCase& c : cases) {
            switch (c.status) {
                case CaseStatus::Pass: ++s.passed; break;
                case CaseStatus::Fail: ++s.failed; break;
                case CaseStatus::Degenerate: ++s.degenerate; break;
                case CaseStatus::HypothesisViolated:
                    ++s.hypothesis_violated;
                    break;
            }
        }
        return s;
    }

    std::string to_json() const {
        nlohmann::ordered_json j;
        j["tool_version"] = tool_version;
        if (generated_at) j["generated_at"] = *generated_at;
        j["cases"] = nlohmann::ordered_json::array();
        for (const ReportCase& c : cases) {
            nlohmann::ordered_json jc;
            jc["check_id"] = c.check_id;
            nlohmann::ordered_json jp;
            for (const auto& [name, value] : c.params) {
                if (value.fits_slong_p())
                    jp[name] = value.get_si();
                else
                    jp[name] = value.get_str();
            }
            jc["params"] = std::move(jp);
            jc["required_exponent"] = c.required_exponent;
            if (c.achieved.finite)
                jc["achieved_valuation"] = c.achieved.value;
            else
                jc["achieved_valuation"] = "inf";
            jc["integrality_ok"] = c.integrality_ok;
            jc["holds"] = c.holds;
            jc["status"] = status_name(c.status);
            jc["witness"] = c.witness;
            j["cases"].push_back(std::move(jc));
        }
        const ReportSummary s = summary();
        j["summary"] = {{"total", s.total},
                        {"passed", s.passed},
                        {"failed", s.failed},
                        {"degenerate", s.degenerate},
                        {"hypothesis_violated", s.hypothesis_violated}};
        return j.dump(2) + "\n";
    }

    /// Params flattened to a stable column order; absent params are empty.
    std::string to_csv() const {
        static constexpr const char* param_cols[] = {"p", "n", "x", "r", "s",
                                                     "a", "b", "k", "l", "m",
                                                     "c"};
        std::ostringstream out;
        if (generated_at) out << "# generated_at " << *generated_at << "\n";
        out << "check_id";
        for (const char* col : param_cols) out << ',' << col;
        out << ",required_exponent,achieved_valuation,integrality_ok,holds,"
               "status,witness\n";
        for (const ReportCase& c : cases) {
            out << c.check_id;
            for (const char* col : param_cols) {
                out << ',';
                for (const auto& [name, value] : c.params)
                    if (name == col) out << value.get_str();
            }
            out << ',' << c.required_exponent << ',' << c.achieved.str() << ','
                << (c.integrality_ok ? "true" : "false") << ','
                << (c.holds ? "true" : "false") << ',' << status_name(c.status)
                << ',' << c.witness << '\n';
        }
        return out.str();
    }

    /// Human-oriented; excluded from the byte-exactness guarantees.
    std::string to_table() const {
        std::ostringstream out;
        for (const ReportCase& c : cases) {
            std::string params;
            for (const auto& [name, value] : c.params) {
                if (!params.empty()) params += ' ';
                params += name + "=" + value.get_str();
            }
            std::string witness = c.witness;
            if (witness.size() > 32) witness = witness.substr(0, 29) + "...";
            out << status_name(c.status) << '\t' << c.check_id << '\t' << params
                << "\trequired=" << c.required_exponent
                << "\tachieved=" << c.achieved.str() << '\t' << witness << '\n';
        }
        const ReportSummary s = summary();
        out << "total " << s.total << ", passed " << s.passed << ", failed "
            << s.failed << ", degenerate " << s.degenerate
            << ", hypothesis_violated " << s.hypothesis_violated << '\n';
        return out.str();
    }
};

/// Current time as RFC 3339 UTC.
inline std::string rfc3339_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace supercong
