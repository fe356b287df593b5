#include "forge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace forge {

namespace {

const MatchCategory kMatchOrder[] = {MatchCategory::Same, MatchCategory::Different,
                                     MatchCategory::Missing, MatchCategory::Extra,
                                     MatchCategory::None};

const DiagnosticCategory kDiagOrder[] = {
    DiagnosticCategory::SymbolNotFound, DiagnosticCategory::WrongAnnotation,
    DiagnosticCategory::MethodOverrideError, DiagnosticCategory::Syntax,
    DiagnosticCategory::Other};

double lower_median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

std::string pct(double fraction) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << fraction * 100.0 << '%';
    return out.str();
}

std::string num(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << v;
    return out.str();
}

/// First package segments ("org.joda.time" -> "org.joda"), used for the
/// partial-inference overlap heuristic.
std::string package_prefix(const std::string& fqn, std::size_t segments) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < segments; ++i) {
        pos = fqn.find('.', pos);
        if (pos == std::string::npos) return fqn;
        ++pos;
    }
    return fqn.substr(0, pos - 1);
}

}  // namespace

ImportCounts score_imports(const ImportSet& pred, const ImportSet& truth) {
    ImportCounts c;
    for (const auto& form : pred.canonical_forms()) {
        if (truth.contains_canonical(form))
            ++c.tp;
        else
            ++c.fp;
    }
    c.fn = static_cast<int>(truth.size()) - c.tp;
    return c;
}

PRF compute_prf(long tp, long fp, long fn) {
    PRF out;
    out.precision = (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
    out.recall = (tp + fn) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
    double sum = out.precision + out.recall;
    out.f1 = sum == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / sum;
    return out;
}

LibraryMetrics aggregate_library(const std::string& library_label,
                                 const std::vector<SnippetScore>& scores) {
    if (scores.empty()) throw EmptyInput("no scores for library " + library_label);
    LibraryMetrics m;
    m.library_label = library_label;
    for (const auto& s : scores) {
        m.tp += s.tp;
        m.fp += s.fp;
        m.fn += s.fn;
        if (s.compiled) ++m.compiled_count;
        ++m.total_count;
        m.match_distribution[s.match] += 1;
    }
    PRF prf = compute_prf(m.tp, m.fp, m.fn);
    m.precision = prf.precision;
    m.recall = prf.recall;
    m.f1 = prf.f1;
    return m;
}

RunSummary summarize_run(const std::vector<LibraryMetrics>& per_library) {
    if (per_library.empty()) throw EmptyInput("no libraries to summarize");
    RunSummary s;
    for (const auto& lib : per_library) {
        s.precision += lib.precision;
        s.recall += lib.recall;
        s.f1 += lib.f1;
        s.compiled_count += lib.compiled_count;
        s.total_count += lib.total_count;
        for (const auto& [cat, n] : lib.match_distribution) s.match_distribution[cat] += n;
    }
    double n = static_cast<double>(per_library.size());
    s.precision /= n;
    s.recall /= n;
    s.f1 /= n;
    s.compilation_rate =
        s.total_count == 0 ? 0.0 : static_cast<double>(s.compiled_count) / s.total_count;
    return s;
}

std::map<std::string, TaxonomyRow> error_taxonomy_table(
    const std::vector<TaxonomyEntry>& entries) {
    std::map<std::string, TaxonomyRow> table;
    for (const auto& e : entries) {
        TaxonomyRow& row = table[e.library_label];
        auto tally = [](const ValidationReport& report,
                        std::map<DiagnosticCategory, int>& counts) {
            std::set<DiagnosticCategory> seen;
            for (const auto& d : report.diagnostics)
                if (d.severity == Severity::Error) seen.insert(d.category);
            for (auto cat : seen) counts[cat] += 1;
        };
        tally(e.before, row.before);
        tally(e.after, row.after);
    }
    return table;
}

RunSummary median_of_runs(const std::vector<RunSummary>& runs) {
    if (runs.empty()) throw EmptyInput("no runs to median");
    auto metric = [&](auto getter) {
        std::vector<double> values;
        values.reserve(runs.size());
        for (const auto& r : runs) values.push_back(getter(r));
        return lower_median(std::move(values));
    };
    RunSummary m;
    m.precision = metric([](const RunSummary& r) { return r.precision; });
    m.recall = metric([](const RunSummary& r) { return r.recall; });
    m.f1 = metric([](const RunSummary& r) { return r.f1; });
    m.compilation_rate = metric([](const RunSummary& r) { return r.compilation_rate; });
    m.compiled_count = static_cast<int>(
        metric([](const RunSummary& r) { return static_cast<double>(r.compiled_count); }));
    m.total_count = static_cast<int>(
        metric([](const RunSummary& r) { return static_cast<double>(r.total_count); }));
    for (auto cat : kMatchOrder) {
        m.match_distribution[cat] = static_cast<int>(metric([cat](const RunSummary& r) {
            auto it = r.match_distribution.find(cat);
            return it == r.match_distribution.end() ? 0.0 : static_cast<double>(it->second);
        }));
    }
    return m;
}

std::string to_string(FailureLabel label) {
    switch (label) {
        case FailureLabel::UnconstrainedClass: return "unconstrained-class";
        case FailureLabel::PartialInference: return "partial-inference";
        case FailureLabel::FakeInference: return "fake-inference";
        case FailureLabel::AlternativeInference: return "alternative-inference";
        case FailureLabel::UnexpectedCodeModification: return "unexpected-code-modification";
        case FailureLabel::Unlabeled: return "unlabeled";
    }
    return "?";
}

FailureLabel prelabel_failure(const ImportSet& pred, const ImportSet& truth,
                              const InverseIndex* kb, bool body_modified) {
    if (body_modified) return FailureLabel::UnexpectedCodeModification;
    if (kb) {
        for (const auto& st : pred.entries()) {
            if (st.wildcard) continue;
            ConstraintQuery q;
            q.fqn = st.fqn;
            if (!kb->resolve_library(q)) return FailureLabel::FakeInference;
        }
    }
    // Shares a package but misses some entries: likely partial inference.
    bool overlap = false;
    for (const auto& p : pred.entries()) {
        for (const auto& t : truth.entries()) {
            if (package_prefix(p.fqn, 2) == package_prefix(t.fqn, 2)) {
                overlap = true;
                break;
            }
        }
        if (overlap) break;
    }
    ImportCounts c = score_imports(pred, truth);
    if (overlap && c.fn > 0) return FailureLabel::PartialInference;
    return FailureLabel::Unlabeled;
}

std::string render_library_table(const std::vector<LibraryMetrics>& per_library,
                                 const RunSummary& summary) {
    std::ostringstream out;
    out << "library\tF1\tRec\tPre\tCR\n";
    for (const auto& lib : per_library) {
        out << lib.library_label << '\t' << num(lib.f1) << '\t' << num(lib.recall) << '\t'
            << num(lib.precision) << '\t' << lib.compiled_count << " ("
            << pct(lib.compilation_rate()) << ")\n";
    }
    out << "summary\t" << num(summary.f1) << '\t' << num(summary.recall) << '\t'
        << num(summary.precision) << '\t' << summary.compiled_count << " ("
        << pct(summary.compilation_rate) << ")\n";
    return out.str();
}

std::string render_match_table(const std::vector<LibraryMetrics>& per_library,
                               const RunSummary& summary) {
    std::ostringstream out;
    out << "library";
    for (auto cat : kMatchOrder) out << '\t' << to_string(cat);
    out << '\n';
    auto row = [&](const std::string& label, const std::map<MatchCategory, int>& dist) {
        out << label;
        for (auto cat : kMatchOrder) {
            auto it = dist.find(cat);
            out << '\t' << (it == dist.end() ? 0 : it->second);
        }
        out << '\n';
    };
    for (const auto& lib : per_library) row(lib.library_label, lib.match_distribution);
    row("total", summary.match_distribution);
    return out.str();
}

std::string render_taxonomy_table(const std::map<std::string, TaxonomyRow>& table) {
    std::ostringstream out;
    out << "library";
    for (auto cat : kDiagOrder) out << '\t' << to_string(cat) << " before\t"
                                    << to_string(cat) << " after";
    out << '\n';
    for (const auto& [label, row] : table) {
        out << label;
        for (auto cat : kDiagOrder) {
            auto b = row.before.find(cat);
            auto a = row.after.find(cat);
            out << '\t' << (b == row.before.end() ? 0 : b->second) << '\t'
                << (a == row.after.end() ? 0 : a->second);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace forge
