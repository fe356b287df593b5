#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "forge/subprocess.hpp"

namespace forge {

struct EnvMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TempIOError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Severity { Error, Warning };

enum class DiagnosticCategory {
    SymbolNotFound,
    WrongAnnotation,
    MethodOverrideError,
    Syntax,
    Other
};

std::string to_string(DiagnosticCategory c);
DiagnosticCategory diagnostic_category_from_string(const std::string& s);

struct Diagnostic {
    std::string file;
    int line = 0;  // 0 = unknown
    Severity severity = Severity::Error;
    std::string message;
    DiagnosticCategory category = DiagnosticCategory::Other;
};

enum class ValidatorTool { JavaCompiler, PythonStaticCheck, PythonInterpreter };

struct ValidationReport {
    bool success = false;
    std::string raw_log;
    std::vector<Diagnostic> diagnostics;
    std::chrono::milliseconds duration{0};
    ValidatorTool tool = ValidatorTool::JavaCompiler;

    bool has_error() const;
};

/// Ordered first-match-wins message patterns. The table ships as data
/// because compiler wording drifts across versions.
class CategoryRules {
public:
    struct Rule {
        DiagnosticCategory category;
        std::vector<std::string> patterns;  // ECMAScript regexes
    };

    static CategoryRules defaults();
    static CategoryRules from_file(const std::string& path);

    DiagnosticCategory categorize(const std::string& message) const;

private:
    std::vector<Rule> rules_;
};

/// Categorize one diagnostic message with the default rule table.
DiagnosticCategory categorize_diagnostic(const std::string& message);

struct JavaValidatorConfig {
    std::string javac = "javac";  // FORGE_JAVAC overrides when set
    std::chrono::milliseconds timeout{60000};
    CategoryRules rules = CategoryRules::defaults();
};

/// Compile `code` as a single compilation unit named after its first
/// public (else first) top-level class; success iff the compiler exits 0.
ValidationReport validate_java(const std::string& code,
                               const std::vector<std::string>& classpath,
                               const JavaValidatorConfig& cfg = {});

struct PythonValidatorConfig {
    std::string env_path;  // venv root or python executable
    std::vector<std::string> checker_argv;  // e.g. {python, pycheck.py}; file appended
    std::chrono::milliseconds timeout{30000};
    CategoryRules rules = CategoryRules::defaults();
};

/// Stage 1: static check; stage 2 (only when clean): interpreter run in
/// the managed environment. Success means both stages pass.
ValidationReport validate_python(const std::string& code, const PythonValidatorConfig& cfg);

/// Uniform surface the conversational fixing loop drives.
class Validator {
public:
    virtual ~Validator() = default;
    virtual ValidationReport validate(const std::string& code,
                                      const std::vector<std::string>& classpath) = 0;
};

class JavaValidator : public Validator {
public:
    explicit JavaValidator(JavaValidatorConfig cfg = {}) : cfg_(std::move(cfg)) {}
    ValidationReport validate(const std::string& code,
                              const std::vector<std::string>& classpath) override {
        return validate_java(code, classpath, cfg_);
    }

private:
    JavaValidatorConfig cfg_;
};

class PythonValidator : public Validator {
public:
    explicit PythonValidator(PythonValidatorConfig cfg) : cfg_(std::move(cfg)) {}
    ValidationReport validate(const std::string& code,
                              const std::vector<std::string>& /*classpath*/) override {
        return validate_python(code, cfg_);
    }

private:
    PythonValidatorConfig cfg_;
};

/// First public top-level class name, else first top-level type name;
/// empty when the code declares no type.
std::string java_unit_name(const std::string& code);

}  // namespace forge
