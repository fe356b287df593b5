#pragma once

// Shared fixture helpers for the test binaries.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <unistd.h>

#include "forge/imports.hpp"
#include "forge/validator.hpp"

namespace testutil {

inline std::string fixtures_dir() {
    const char* v = std::getenv("FORGE_FIXTURES");
    return v && *v ? v : "tests/fixtures";
}

inline std::string pycheck_path() {
    const char* v = std::getenv("FORGE_PYCHECK");
    return v && *v ? v : "tools/pycheck.py";
}

class TempDir {
public:
    TempDir() {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / "forge-test-XXXXXX").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
        path_ = buf.data();
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

private:
    std::string path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline forge::ImportSet make_set(std::initializer_list<const char*> lines,
                                 forge::Language lang = forge::Language::Java) {
    forge::ImportSet set;
    for (const char* line : lines)
        for (const auto& st : forge::parse_import_line(line, lang)) set.insert(st);
    return set;
}

// Minimal but spec-shaped JVM class file: constant pool with Utf8 + Class
// entries, access flags, member tables with empty attribute lists.
struct ClassSpec {
    std::string binary_name;  // slash-separated
    std::uint16_t access = 0x0021;  // public super
    std::vector<std::string> fields;
    std::vector<std::string> methods;
};

inline std::vector<std::uint8_t> make_class_file(const ClassSpec& spec) {
    std::vector<std::uint8_t> out;
    auto u1 = [&](std::uint8_t v) { out.push_back(v); };
    auto u2 = [&](std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v));
    };
    auto u4 = [&](std::uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8)
            out.push_back(static_cast<std::uint8_t>(v >> shift));
    };
    auto utf8 = [&](const std::string& s) {
        u1(1);
        u2(static_cast<std::uint16_t>(s.size()));
        out.insert(out.end(), s.begin(), s.end());
    };

    u4(0xCAFEBABEu);
    u2(0);   // minor
    u2(52);  // major (Java 8)

    std::uint16_t n_members =
        static_cast<std::uint16_t>(spec.fields.size() + spec.methods.size());
    u2(static_cast<std::uint16_t>(4 + n_members));  // cp_count = entries + 1
    utf8(spec.binary_name);                         // #1
    u1(7);                                          // #2 Class -> #1
    u2(1);
    utf8("Ljava/lang/Object;");                     // #3 shared descriptor
    std::uint16_t next = 4;
    std::vector<std::uint16_t> field_idx, method_idx;
    for (const auto& f : spec.fields) {
        utf8(f);
        field_idx.push_back(next++);
    }
    for (const auto& m : spec.methods) {
        utf8(m);
        method_idx.push_back(next++);
    }

    u2(spec.access);
    u2(2);  // this_class
    u2(0);  // super_class
    u2(0);  // interfaces

    u2(static_cast<std::uint16_t>(field_idx.size()));
    for (auto idx : field_idx) {
        u2(0x0001);  // access
        u2(idx);     // name
        u2(3);       // descriptor
        u2(0);       // attributes
    }
    u2(static_cast<std::uint16_t>(method_idx.size()));
    for (auto idx : method_idx) {
        u2(0x0001);
        u2(idx);
        u2(3);
        u2(0);
    }
    u2(0);  // class attributes
    return out;
}

// Validator scripted by a predicate over the candidate code; used to
// drive the repair loop without a real compiler.
class ScriptedValidator : public forge::Validator {
public:
    using Verdict = std::function<forge::ValidationReport(const std::string& code)>;

    explicit ScriptedValidator(Verdict verdict) : verdict_(std::move(verdict)) {}

    /// Success iff the code contains `marker`; failures carry `error_log`.
    static ScriptedValidator compiles_when_contains(std::string marker,
                                                    std::string error_log) {
        return ScriptedValidator([marker = std::move(marker),
                                  error_log = std::move(error_log)](const std::string& code) {
            forge::ValidationReport report;
            report.success = code.find(marker) != std::string::npos;
            if (!report.success) {
                report.raw_log = error_log;
                forge::Diagnostic d;
                d.severity = forge::Severity::Error;
                d.message = error_log;
                d.category = forge::categorize_diagnostic(error_log);
                report.diagnostics.push_back(std::move(d));
            }
            return report;
        });
    }

    forge::ValidationReport validate(const std::string& code,
                                     const std::vector<std::string>& classpath) override {
        ++calls_;
        last_classpath_ = classpath;
        return verdict_(code);
    }

    int calls() const { return calls_; }
    const std::vector<std::string>& last_classpath() const { return last_classpath_; }

private:
    Verdict verdict_;
    int calls_ = 0;
    std::vector<std::string> last_classpath_;
};

}  // namespace testutil
