#include <doctest.h>

#include <algorithm>
#include <random>

#include "forge/imports.hpp"
#include "helpers.hpp"

using namespace forge;

TEST_CASE("java import parsing") {
    ImportStatement st = parse_import_statement("import java.text.NumberFormat;", Language::Java);
    CHECK(st.fqn == "java.text.NumberFormat");
    CHECK_FALSE(st.wildcard);
    CHECK_FALSE(st.is_static);
    CHECK(st.raw == "import java.text.NumberFormat;");

    st = parse_import_statement("import java.util.*;", Language::Java);
    CHECK(st.fqn == "java.util");
    CHECK(st.wildcard);

    st = parse_import_statement("  import static org.junit.Assert.assertEquals ;  ",
                                Language::Java);
    CHECK(st.is_static);
    CHECK(st.fqn == "org.junit.Assert.assertEquals");

    CHECK_THROWS_AS(parse_import_statement("importx.y.z;", Language::Java), ParseError);
    CHECK_THROWS_AS(parse_import_statement("int x = 3;", Language::Java), ParseError);
    CHECK_THROWS_AS(parse_import_statement("import ;", Language::Java), ParseError);
    CHECK_THROWS_AS(parse_import_statement("import a..b;", Language::Java), ParseError);
}

TEST_CASE("python import parsing") {
    ImportStatement st = parse_import_statement("from bs4 import BeautifulSoup", Language::Python);
    CHECK(st.fqn == "bs4");
    CHECK(st.imported_symbol == "BeautifulSoup");
    CHECK(st.from_import);

    st = parse_import_statement("import numpy as np", Language::Python);
    CHECK(st.fqn == "numpy");
    CHECK(st.alias == "np");
    CHECK_FALSE(st.from_import);

    auto multi = parse_import_line("import os, sys", Language::Python);
    REQUIRE(multi.size() == 2);
    CHECK(multi[0].fqn == "os");
    CHECK(multi[1].fqn == "sys");

    multi = parse_import_line("from os.path import join, dirname as dn", Language::Python);
    REQUIRE(multi.size() == 2);
    CHECK(multi[0].imported_symbol == "join");
    CHECK(multi[1].alias == "dn");

    st = parse_import_statement("from collections import *", Language::Python);
    CHECK(st.wildcard);
    CHECK(st.fqn == "collections");

    st = parse_import_statement("from ..pkg import thing", Language::Python);
    CHECK(st.fqn == "..pkg");

    CHECK(parse_import_line("x = import_module('a')", Language::Python).empty());
    CHECK(parse_import_line("important = 3", Language::Python).empty());
}

TEST_CASE("canonical forms distinguish binding styles") {
    // `import a.b.c` and `from a.b import c` bind different names.
    auto plain = parse_import_statement("import a.b.c", Language::Python);
    auto from = parse_import_statement("from a.b import c", Language::Python);
    CHECK(plain.canonical() != from.canonical());

    // Whitespace and semicolons do not affect identity.
    auto a = parse_import_statement("import java.util.List;", Language::Java);
    auto b = parse_import_statement("   import   java.util.List  ;;", Language::Java);
    CHECK(a.canonical() == b.canonical());

    auto stat = parse_import_statement("import static a.B.c;", Language::Java);
    auto inst = parse_import_statement("import a.B.c;", Language::Java);
    CHECK(stat.canonical() != inst.canonical());
}

TEST_CASE("import set identity is order- and duplication-insensitive") {
    auto s1 = testutil::make_set({"import a.A;", "import b.B;", "import c.C;"});
    auto s2 = testutil::make_set({"import c.C;", "import a.A;", "import b.B;", "import a.A;"});
    CHECK(s1 == s2);
    CHECK(s1.serialize() == s2.serialize());
    CHECK(s1.size() == 3);
    CHECK(s1.subset_of(s2));
    CHECK(testutil::make_set({"import a.A;"}).subset_of(s1));
    CHECK_FALSE(s1.subset_of(testutil::make_set({"import a.A;"})));
}

TEST_CASE("classify_match precedence") {
    auto abc = testutil::make_set({"import p.A;", "import p.B;", "import p.C;"});
    auto abcd = testutil::make_set({"import p.A;", "import p.B;", "import p.C;", "import p.D;"});
    auto ab = testutil::make_set({"import p.A;", "import p.B;"});
    auto ax = testutil::make_set({"import p.A;", "import p.X;"});
    ImportSet empty;

    CHECK(classify_match(abc, abc) == MatchCategory::Same);
    CHECK(classify_match(abcd, abc) == MatchCategory::Extra);
    CHECK(classify_match(ab, abc) == MatchCategory::Missing);
    CHECK(classify_match(ax, ab) == MatchCategory::Different);
    CHECK(classify_match(empty, abc) == MatchCategory::None);
    CHECK(classify_match(empty, empty) == MatchCategory::Same);
    CHECK(classify_match(abc, empty) == MatchCategory::Extra);
}

namespace {

// Independent restatement of the set-relation definitions.
MatchCategory oracle_classify(const ImportSet& pred, const ImportSet& truth) {
    if (pred == truth) return MatchCategory::Same;
    if (pred.empty()) return MatchCategory::None;
    bool truth_in_pred = truth.subset_of(pred);
    bool pred_in_truth = pred.subset_of(truth);
    if (truth_in_pred && !pred_in_truth) return MatchCategory::Extra;
    if (pred_in_truth && !truth_in_pred) return MatchCategory::Missing;
    return MatchCategory::Different;
}

ImportSet subset_from_mask(unsigned mask) {
    const char* lines[] = {"import u.A;", "import u.B;", "import u.C;"};
    ImportSet out;
    for (unsigned i = 0; i < 3; ++i)
        if (mask & (1u << i)) out.insert(parse_import_statement(lines[i], Language::Java));
    return out;
}

}  // namespace

TEST_CASE("classify_match matches the brute-force oracle over a 3-element universe") {
    int cases = 0;
    for (unsigned p = 0; p < 8; ++p) {
        for (unsigned t = 0; t < 8; ++t) {
            ImportSet pred = subset_from_mask(p);
            ImportSet truth = subset_from_mask(t);
            CHECK(classify_match(pred, truth) == oracle_classify(pred, truth));
            ++cases;
        }
    }
    CHECK(cases == 64);

    // Extend with randomized 5-element-universe pairs for volume.
    std::mt19937 rng(7);
    const char* lines[] = {"import u.A;", "import u.B;", "import u.C;", "import u.D;",
                           "import u.E;"};
    for (int i = 0; i < 300; ++i) {
        ImportSet pred, truth;
        for (const char* line : lines) {
            if (rng() & 1) pred.insert(parse_import_statement(line, Language::Java));
            if (rng() & 1) truth.insert(parse_import_statement(line, Language::Java));
        }
        CHECK(classify_match(pred, truth) == oracle_classify(pred, truth));
    }
}

TEST_CASE("strip_imports keeps non-import lines byte-identical") {
    std::string source =
        "import org.joda.time.Period;\n"
        "public class A {\n"
        "  int  x =  1;\t\n"
        "import org.joda.time.Period;\n"
        "}\n";
    StripResult r = strip_imports(source, Language::Java);
    CHECK(r.body == "public class A {\n  int  x =  1;\t\n}\n");
    CHECK(r.removed.size() == 1);  // duplicate import deduplicated

    StripResult none = strip_imports("no imports here\n", Language::Java);
    CHECK(none.body == "no imports here\n");
    CHECK(none.removed.empty());
}

TEST_CASE("strip then re-render round-trips the import set") {
    std::string source =
        "import os\n"
        "from json import loads\n"
        "print(loads('1'))\n";
    StripResult r = strip_imports(source, Language::Python);
    std::string rebuilt = render_imports(r.removed, Language::Python) + r.body;
    StripResult again = strip_imports(rebuilt, Language::Python);
    CHECK(again.removed == r.removed);
    CHECK(again.body == r.body);
}

TEST_CASE("render_import formats per language") {
    CHECK(render_import(parse_import_statement("import  a.B ;", Language::Java),
                        Language::Java) == "import a.B;");
    CHECK(render_import(parse_import_statement("import static a.B.c;", Language::Java),
                        Language::Java) == "import static a.B.c;");
    CHECK(render_import(parse_import_statement("from a import b as c", Language::Python),
                        Language::Python) == "from a import b as c");
    CHECK(render_import(parse_import_statement("import numpy as np", Language::Python),
                        Language::Python) == "import numpy as np");
}
