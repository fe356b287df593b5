#include <doctest.h>

#include "forge/llm.hpp"
#include "helpers.hpp"

using namespace forge;

namespace {

CompletionRequest tagged(const std::string& kind, const std::string& snippet, int attempt) {
    CompletionRequest req;
    req.messages.push_back({Role::User, "prompt"});
    req.tag = {kind, snippet, attempt};
    return req;
}

}  // namespace

TEST_CASE("mock backend matches on tag and honors repeat counts") {
    MockBackend backend({
        {"infer", "s1", 1, 1, "first"},
        {"infer", "s1", 0, 2, "any-attempt"},
        {"fix", "", 0, -1, "always-fix"},
    });

    CHECK(backend.complete(tagged("infer", "s1", 1)).text == "first");
    // The attempt-1 slot is spent; the wildcard slot serves two more.
    CHECK(backend.complete(tagged("infer", "s1", 1)).text == "any-attempt");
    CHECK(backend.complete(tagged("infer", "s1", 9)).text == "any-attempt");
    CHECK_THROWS_AS(backend.complete(tagged("infer", "s1", 2)), TranscriptExhausted);

    // repeat < 0 replays forever; empty snippet matches any snippet.
    for (int i = 0; i < 5; ++i)
        CHECK(backend.complete(tagged("fix", "anything", i + 1)).text == "always-fix");
    CHECK(backend.call_count() == 8);
}

TEST_CASE("mock transcript file round-trip") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("t.jsonl"),
                         R"({"kind":"infer","snippet":"a","attempt":1,"response":"import x.Y;"})"
                         "\n\n"
                         R"({"kind":"fix","snippet":"a","repeat":-1,"response":"code"})"
                         "\n");
    MockBackend backend = MockBackend::from_file(dir.file("t.jsonl"));
    CHECK(backend.complete(tagged("infer", "a", 1)).text == "import x.Y;");
    CHECK(backend.complete(tagged("fix", "a", 3)).text == "code");
    CHECK(backend.complete(tagged("fix", "a", 4)).text == "code");
}

TEST_CASE("usage ledger accumulates and persists rows") {
    testutil::TempDir dir;
    UsageLedger ledger(dir.file("usage.tsv"));
    ledger.record("m", 100, 20, 0.5);
    ledger.record("m", 50, 10, 0.25);
    UsageTotals t = ledger.totals();
    CHECK(t.calls == 2);
    CHECK(t.prompt_tokens == 150);
    CHECK(t.output_tokens == 30);
    CHECK(t.cost == doctest::Approx(0.75));
    std::string rows = testutil::read_file(dir.file("usage.tsv"));
    CHECK(rows.find("\tm\t100\t20\t0.5") != std::string::npos);
}

TEST_CASE("price table") {
    PriceTable prices;
    prices.models["m"] = {0.5, 1.5};
    CHECK(prices.cost("m", 2000, 1000) == doctest::Approx(1.0 + 1.5));
    CHECK(prices.cost("unknown", 2000, 1000) == 0.0);
}

TEST_CASE("extract_import_statements: plain declarations") {
    ImportSet set = extract_import_statements(
        "import java.text.NumberFormat;\nimport java.util.Locale;", Language::Java);
    CHECK(set == testutil::make_set({"import java.text.NumberFormat;",
                                     "import java.util.Locale;"}));

    // Fenced and bulleted output still parses.
    set = extract_import_statements(
        "```java\nimport a.B;\n```\n- import c.D;\n1. `import e.F;`", Language::Java);
    CHECK(set.size() == 3);
}

TEST_CASE("extract_import_statements: negative responses give the empty set") {
    CHECK(extract_import_statements("The code does not require any additional import statements.",
                                    Language::Java)
              .empty());
    CHECK(extract_import_statements("No additional import statements are needed.",
                                    Language::Java)
              .empty());
    // Unparseable chatter is also empty, not an error.
    CHECK(extract_import_statements("I cannot help with that.", Language::Java).empty());
}

TEST_CASE("extract_import_statements: prose list after a colon") {
    ImportSet set = extract_import_statements(
        "The code requires the following imports: java.text.NumberFormat; java.util.Locale",
        Language::Java);
    CHECK(set == testutil::make_set({"import java.text.NumberFormat;",
                                     "import java.util.Locale;"}));

    set = extract_import_statements(
        "Required imports:\njava.text.NumberFormat\njava.util.Locale\nThat is all you need.",
        Language::Java);
    CHECK(set.size() == 2);
}

TEST_CASE("extract_code_block prefers the largest fenced block") {
    std::string text =
        "Sure.\n```java\nclass A {}\n```\nor better\n```java\nclass B {\n  int x;\n}\n```\n";
    CHECK(extract_code_block(text, Language::Java) == "class B {\n  int x;\n}");
}

TEST_CASE("extract_code_block strips prose when unfenced") {
    std::string text =
        "Here is the fixed code.\n"
        "import a.B;\n"
        "class A { int x = 1; }\n"
        "This should compile now!\n";
    CHECK(extract_code_block(text, Language::Java) ==
          "import a.B;\nclass A { int x = 1; }");
    CHECK_THROWS_AS(extract_code_block("I am not sure what you mean.", Language::Java),
                    NoCodeFound);
    CHECK_THROWS_AS(extract_code_block("```\n\n```", Language::Java), NoCodeFound);
}
