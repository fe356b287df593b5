#include <doctest.h>

#include <random>

#include "forge/eval.hpp"
#include "helpers.hpp"

using namespace forge;

namespace {

SnippetScore score_of(int tp, int fp, int fn, bool compiled, MatchCategory match) {
    SnippetScore s;
    s.tp = tp;
    s.fp = fp;
    s.fn = fn;
    s.compiled = compiled;
    s.match = match;
    return s;
}

}  // namespace

TEST_CASE("score_imports counts under canonical equality") {
    auto truth = testutil::make_set({"import p.A;", "import p.B;"});
    ImportCounts c = score_imports(testutil::make_set({"import p.A;", "import p.X;"}), truth);
    CHECK(c.tp == 1);
    CHECK(c.fp == 1);
    CHECK(c.fn == 1);

    c = score_imports(truth, truth);
    CHECK(c.tp == 2);
    CHECK(c.fp == 0);
    CHECK(c.fn == 0);

    c = score_imports({}, {});
    CHECK((c.tp == 0 && c.fp == 0 && c.fn == 0));
}

TEST_CASE("score_imports identities and swap symmetry (property)") {
    std::mt19937 rng(41);
    const char* lines[] = {"import q.A;", "import q.B;", "import q.C;", "import q.D;",
                           "import q.E;"};
    for (int trial = 0; trial < 300; ++trial) {
        ImportSet pred, truth;
        for (const char* line : lines) {
            if (rng() & 1) pred.insert(parse_import_statement(line, Language::Java));
            if (rng() & 1) truth.insert(parse_import_statement(line, Language::Java));
        }
        ImportCounts c = score_imports(pred, truth);
        CHECK(c.tp + c.fn == static_cast<int>(truth.size()));
        CHECK(c.tp + c.fp == static_cast<int>(pred.size()));
        ImportCounts swapped = score_imports(truth, pred);
        CHECK(swapped.tp == c.tp);
        CHECK(swapped.fp == c.fn);
        CHECK(swapped.fn == c.fp);
        // Same <=> no errors on either side.
        CHECK((classify_match(pred, truth) == MatchCategory::Same) ==
              (c.fp == 0 && c.fn == 0));
    }
}

TEST_CASE("compute_prf conventions") {
    PRF prf = compute_prf(9, 1, 1);
    CHECK(prf.precision == doctest::Approx(0.9));
    CHECK(prf.recall == doctest::Approx(0.9));
    CHECK(prf.f1 == doctest::Approx(0.9));

    prf = compute_prf(0, 0, 0);  // all-empty library
    CHECK(prf.precision == 1.0);
    CHECK(prf.recall == 1.0);
    CHECK(prf.f1 == 1.0);

    prf = compute_prf(0, 3, 4);
    CHECK(prf.precision == 0.0);
    CHECK(prf.recall == 0.0);
    CHECK(prf.f1 == 0.0);
}

TEST_CASE("aggregate_library micro-sums before computing metrics") {
    std::vector<SnippetScore> scores = {
        score_of(3, 0, 0, true, MatchCategory::Same),
        score_of(4, 1, 0, true, MatchCategory::Extra),
        score_of(2, 0, 1, false, MatchCategory::Missing),
    };
    LibraryMetrics m = aggregate_library("lib", scores);
    CHECK(m.tp == 9);
    CHECK(m.fp == 1);
    CHECK(m.fn == 1);
    CHECK(m.precision == doctest::Approx(0.9));
    CHECK(m.recall == doctest::Approx(0.9));
    CHECK(m.f1 == doctest::Approx(0.9));
    CHECK(m.compiled_count == 2);
    CHECK(m.total_count == 3);
    CHECK(m.match_distribution[MatchCategory::Same] == 1);

    CHECK_THROWS_AS(aggregate_library("empty", {}), EmptyInput);

    // Oracle: recomputing from concatenated raw sets gives identical P/R/F1.
    auto truth = testutil::make_set({"import p.A;", "import p.B;"});
    auto preds = std::vector<ImportSet>{testutil::make_set({"import p.A;", "import p.B;"}),
                                        testutil::make_set({"import p.A;", "import p.X;"})};
    std::vector<SnippetScore> raw;
    long tp = 0, fp = 0, fn = 0;
    for (const auto& p : preds) {
        ImportCounts c = score_imports(p, truth);
        raw.push_back(score_of(c.tp, c.fp, c.fn, true, classify_match(p, truth)));
        tp += c.tp;
        fp += c.fp;
        fn += c.fn;
    }
    LibraryMetrics agg = aggregate_library("oracle", raw);
    PRF direct = compute_prf(tp, fp, fn);
    CHECK(agg.precision == doctest::Approx(direct.precision));
    CHECK(agg.recall == doctest::Approx(direct.recall));
    CHECK(agg.f1 == doctest::Approx(direct.f1));
}

TEST_CASE("summarize_run macro-averages metrics and pools CR") {
    LibraryMetrics a;
    a.library_label = "a";
    a.precision = 1.0;
    a.recall = 0.8;
    a.f1 = 0.888888;
    a.compiled_count = 10;
    a.total_count = 20;
    LibraryMetrics b = a;
    b.library_label = "b";
    b.precision = 0.5;
    b.compiled_count = 20;
    RunSummary s = summarize_run({a, b});
    CHECK(s.precision == doctest::Approx(0.75));
    CHECK(s.compiled_count == 30);
    CHECK(s.total_count == 40);
    CHECK(s.compilation_rate == doctest::Approx(0.75));
    CHECK_THROWS_AS(summarize_run({}), EmptyInput);

    RunSummary one = summarize_run({a});
    CHECK(one.precision == doctest::Approx(a.precision));
    CHECK(one.compilation_rate == doctest::Approx(0.5));
}

TEST_CASE("published per-library rows reproduce the printed summaries") {
    struct Row {
        double f1, rec, pre;
        int compiled, total;
    };
    struct Approach {
        const char* name;
        std::vector<Row> rows;  // Android, JDK, Hibernate, Joda-Time, GWT, XStream
        double f1, rec, pre;    // printed summary values
        int compiled;
        double cr_pct;
    };
    const std::vector<Approach> approaches = {
        {"constraint-solver",
         {{0.952, 0.909, 1, 37, 50},
          {0.887, 0.796, 1, 12, 23},
          {0.948, 0.918, 0.98, 23, 50},
          {0.86, 0.759, 0.992, 37, 50},
          {0.835, 0.721, 0.991, 30, 50},
          {0.934, 0.877, 1, 29, 44}},
         0.903, 0.83, 0.994, 168, 62.9},
        {"single-prompt-3.5",
         {{0.967, 0.95, 0.987, 44, 50},
          {0.482, 0.317, 1, 15, 23},
          {0.75, 0.606, 0.985, 22, 50},
          {0.979, 0.971, 0.988, 44, 50},
          {0.951, 0.927, 0.977, 32, 50},
          {0.863, 0.78, 0.967, 22, 44}},
         0.832, 0.759, 0.984, 179, 67.0},
        {"single-prompt-4",
         {{0.969, 0.956, 0.983, 45, 50},
          {0.713, 0.557, 0.989, 18, 23},
          {0.834, 0.747, 0.944, 29, 50},
          {0.991, 0.994, 0.988, 49, 50},
          {0.906, 0.889, 0.924, 42, 50},
          {0.927, 0.89, 0.967, 38, 44}},
         0.890, 0.839, 0.966, 221, 82.8},
        {"two-stage-3.5",
         {{0.990, 0.990, 0.990, 48, 50},
          {0.997, 1.000, 0.994, 23, 23},
          {0.902, 0.834, 0.982, 32, 50},
          {0.985, 0.994, 0.977, 50, 50},
          {0.968, 0.94, 0.997, 46, 50},
          {0.934, 0.89, 0.98, 35, 44}},
         0.963, 0.938, 0.987, 234, 87.6},
        {"two-stage-4",
         {{0.988, 0.99, 0.987, 48, 50},
          {0.994, 1, 0.988, 23, 23},
          {0.956, 0.916, 1, 41, 50},
          {0.994, 0.988, 1, 50, 50},
          {0.987, 0.978, 0.997, 50, 50},
          {0.959, 0.925, 0.995, 42, 44}},
         0.98, 0.966, 0.995, 254, 95.1},
    };
    for (const auto& approach : approaches) {
        CAPTURE(approach.name);
        std::vector<LibraryMetrics> libs;
        for (const auto& row : approach.rows) {
            LibraryMetrics m;
            m.f1 = row.f1;
            m.recall = row.rec;
            m.precision = row.pre;
            m.compiled_count = row.compiled;
            m.total_count = row.total;
            libs.push_back(m);
        }
        RunSummary s = summarize_run(libs);
        CHECK(std::abs(s.f1 - approach.f1) < 0.005);
        CHECK(std::abs(s.recall - approach.rec) < 0.005);
        CHECK(std::abs(s.precision - approach.pre) < 0.005);
        CHECK(s.compiled_count == approach.compiled);
        CHECK(std::abs(s.compilation_rate * 100.0 - approach.cr_pct) < 0.1);
    }
}

TEST_CASE("published match-distribution counts reproduce the printed percentages") {
    struct Dist {
        const char* name;
        int total;
        int same, different, extra, missing, none;
        double pct_same, pct_different, pct_extra, pct_missing, pct_none;
    };
    const std::vector<Dist> table = {
        {"constraint-solver/java", 267, 143, 78, 4, 35, 7, 53.56, 29.21, 1.5, 13.11, 2.62},
        {"single-prompt-3.5/java", 267, 173, 55, 14, 19, 6, 64.79, 20.60, 5.24, 7.12, 2.25},
        {"single-prompt-4/java", 267, 226, 24, 10, 7, 0, 84.64, 8.99, 3.75, 2.62, 0},
        {"two-stage-3.5/java", 267, 202, 35, 16, 14, 0, 75.66, 13.11, 5.99, 5.24, 0},
        {"two-stage-4/java", 267, 226, 24, 10, 7, 0, 84.64, 8.99, 3.75, 2.62, 0},
        {"single-prompt-3.5/py", 539, 447, 43, 27, 19, 3, 82.93, 7.98, 5.01, 3.53, 0.56},
        {"single-prompt-4/py", 539, 447, 42, 39, 9, 2, 82.93, 7.79, 7.24, 1.67, 0.37},
        {"two-stage-3.5/py", 539, 491, 35, 4, 9, 0, 91.09, 6.49, 0.74, 1.67, 0},
        {"two-stage-4/py", 539, 499, 30, 3, 7, 0, 92.58, 5.57, 0.56, 1.30, 0},
    };
    for (const auto& d : table) {
        CAPTURE(d.name);
        CHECK(d.same + d.different + d.extra + d.missing + d.none == d.total);
        auto pct = [&](int n) { return 100.0 * n / d.total; };
        CHECK(std::abs(pct(d.same) - d.pct_same) < 0.01);
        CHECK(std::abs(pct(d.different) - d.pct_different) < 0.01);
        CHECK(std::abs(pct(d.extra) - d.pct_extra) < 0.01);
        CHECK(std::abs(pct(d.missing) - d.pct_missing) < 0.01);
        CHECK(std::abs(pct(d.none) - d.pct_none) < 0.01);
    }
}

TEST_CASE("error taxonomy counts snippets once per category") {
    auto report_with = [](std::vector<DiagnosticCategory> cats) {
        ValidationReport r;
        r.success = cats.empty();
        for (auto c : cats) {
            Diagnostic d;
            d.severity = Severity::Error;
            d.category = c;
            r.diagnostics.push_back(d);
        }
        return r;
    };
    std::vector<TaxonomyEntry> entries;
    // 2 snippets with SymbolNotFound before (one also has an override
    // error twice); all clean after.
    entries.push_back({"libA",
                       report_with({DiagnosticCategory::SymbolNotFound,
                                    DiagnosticCategory::MethodOverrideError,
                                    DiagnosticCategory::MethodOverrideError}),
                       report_with({})});
    entries.push_back(
        {"libA", report_with({DiagnosticCategory::SymbolNotFound}), report_with({})});
    entries.push_back({"libB", report_with({}), report_with({DiagnosticCategory::Syntax})});

    auto table = error_taxonomy_table(entries);
    CHECK(table["libA"].before[DiagnosticCategory::SymbolNotFound] == 2);
    CHECK(table["libA"].before[DiagnosticCategory::MethodOverrideError] == 1);
    CHECK(table["libA"].after.empty());
    CHECK(table["libB"].after[DiagnosticCategory::Syntax] == 1);

    CHECK(error_taxonomy_table({}).empty());
}

TEST_CASE("median_of_runs takes the element-wise lower median") {
    auto run = [](double cr, double f1) {
        RunSummary s;
        s.compilation_rate = cr;
        s.f1 = f1;
        return s;
    };
    RunSummary m = median_of_runs(
        {run(0.85, 0.9), run(0.87, 0.8), run(0.88, 0.7), run(0.90, 0.6), run(0.91, 0.5)});
    CHECK(m.compilation_rate == doctest::Approx(0.88));
    CHECK(m.f1 == doctest::Approx(0.7));

    // Metrics median independently: the argmedian may differ per metric.
    m = median_of_runs({run(0.1, 0.9), run(0.5, 0.1), run(0.9, 0.5)});
    CHECK(m.compilation_rate == doctest::Approx(0.5));
    CHECK(m.f1 == doctest::Approx(0.5));

    // Even n: lower median, deterministic.
    m = median_of_runs({run(0.2, 0.2), run(0.4, 0.4)});
    CHECK(m.compilation_rate == doctest::Approx(0.2));

    RunSummary identical = median_of_runs({run(0.7, 0.8), run(0.7, 0.8), run(0.7, 0.8)});
    CHECK(identical.compilation_rate == doctest::Approx(0.7));
    CHECK_THROWS_AS(median_of_runs({}), EmptyInput);
}

TEST_CASE("failure pre-labels") {
    auto truth = testutil::make_set(
        {"import com.thoughtworks.xstream.converters.basic.AbstractSingleValueConverter;"});
    auto partial = testutil::make_set(
        {"import com.thoughtworks.xstream.converters.enums.AbstractSingleValueConverter;"});
    CHECK(prelabel_failure(partial, truth, nullptr, false) == FailureLabel::PartialInference);
    CHECK(prelabel_failure(partial, truth, nullptr, true) ==
          FailureLabel::UnexpectedCodeModification);

    // A KB that knows nothing marks predictions as fabricated.
    InverseIndex empty_kb;
    CHECK(prelabel_failure(testutil::make_set({"import hibernate.UserGroup;"}),
                           testutil::make_set({"import org.hibernate.Session;"}), &empty_kb,
                           false) == FailureLabel::FakeInference);

    CHECK(prelabel_failure(testutil::make_set({"import a.B;"}),
                           testutil::make_set({"import x.Y;"}), nullptr,
                           false) == FailureLabel::Unlabeled);
}

TEST_CASE("table renderings are tab-separated with a summary row") {
    LibraryMetrics m;
    m.library_label = "lib";
    m.f1 = m.recall = m.precision = 0.9;
    m.compiled_count = 9;
    m.total_count = 10;
    m.match_distribution[MatchCategory::Same] = 9;
    m.match_distribution[MatchCategory::Different] = 1;
    RunSummary s = summarize_run({m});
    std::string lib_table = render_library_table({m}, s);
    CHECK(lib_table.find("library\tF1\tRec\tPre\tCR") != std::string::npos);
    CHECK(lib_table.find("lib\t0.900\t0.900\t0.900\t9 (90.0%)") != std::string::npos);
    CHECK(lib_table.find("summary\t") != std::string::npos);

    std::string match_table = render_match_table({m}, s);
    CHECK(match_table.find("Same\tDifferent\tMissing\tExtra\tNone") != std::string::npos);
    CHECK(match_table.find("lib\t9\t1\t0\t0\t0") != std::string::npos);
}
