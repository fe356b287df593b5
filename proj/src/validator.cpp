#include "forge/validator.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace forge {

namespace {

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    if (from.empty()) return s;
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

class TempDir {
public:
    explicit TempDir(const std::string& prefix) {
        std::string tmpl = (fs::temp_directory_path() / (prefix + "XXXXXX")).string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (!mkdtemp(buf.data())) throw TempIOError("mkdtemp failed for " + tmpl);
        path_ = buf.data();
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TempIOError("cannot write " + path);
    out << content;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += sep;
        out += p;
    }
    return out;
}

Diagnostic synthetic_error(const std::string& message, const CategoryRules& rules) {
    Diagnostic d;
    d.severity = Severity::Error;
    d.message = message;
    d.category = rules.categorize(message);
    return d;
}

std::string python_executable(const std::string& env_path) {
    if (env_path.empty()) return "";
    fs::path p(env_path);
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return p.string();
    fs::path candidate = p / "bin" / "python";
    if (fs::exists(candidate, ec)) return candidate.string();
    candidate = p / "bin" / "python3";
    if (fs::exists(candidate, ec)) return candidate.string();
    return "";
}

}  // namespace

std::string to_string(DiagnosticCategory c) {
    switch (c) {
        case DiagnosticCategory::SymbolNotFound: return "SymbolNotFound";
        case DiagnosticCategory::WrongAnnotation: return "WrongAnnotation";
        case DiagnosticCategory::MethodOverrideError: return "MethodOverrideError";
        case DiagnosticCategory::Syntax: return "Syntax";
        case DiagnosticCategory::Other: return "Other";
    }
    return "?";
}

DiagnosticCategory diagnostic_category_from_string(const std::string& s) {
    if (s == "SymbolNotFound") return DiagnosticCategory::SymbolNotFound;
    if (s == "WrongAnnotation") return DiagnosticCategory::WrongAnnotation;
    if (s == "MethodOverrideError") return DiagnosticCategory::MethodOverrideError;
    if (s == "Syntax") return DiagnosticCategory::Syntax;
    if (s == "Other") return DiagnosticCategory::Other;
    throw std::runtime_error("unknown diagnostic category: " + s);
}

bool ValidationReport::has_error() const {
    for (const auto& d : diagnostics)
        if (d.severity == Severity::Error) return true;
    return false;
}

CategoryRules CategoryRules::defaults() {
    CategoryRules r;
    r.rules_ = {
        {DiagnosticCategory::SymbolNotFound,
         {"cannot find symbol", "package .* does not exist", "cannot be resolved",
          "undefined name", "is not defined", "No module named", "NameError"}},
        {DiagnosticCategory::WrongAnnotation,
         {"annotation .* not applicable", "annotation type not applicable",
          "class, interface, enum, or record expected",
          "class, interface, or enum expected"}},
        {DiagnosticCategory::MethodOverrideError,
         {"does not override or implement", "must implement",
          "is not abstract and does not override", "overrides nothing",
          "incompatible with .* in"}},
        {DiagnosticCategory::Syntax,
         {"';' expected", "'\\)' expected", "'\\{' expected", "'\\}' expected",
          "<identifier> expected", "illegal start of", "reached end of file",
          "not a statement", "unclosed", "invalid syntax", "SyntaxError",
          "IndentationError", "unexpected EOF"}},
    };
    return r;
}

CategoryRules CategoryRules::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rules file: " + path);
    nlohmann::json j;
    in >> j;
    CategoryRules r;
    for (const auto& rule : j.at("rules")) {
        Rule parsed;
        parsed.category = diagnostic_category_from_string(rule.at("category").get<std::string>());
        for (const auto& p : rule.at("patterns")) parsed.patterns.push_back(p.get<std::string>());
        r.rules_.push_back(std::move(parsed));
    }
    return r;
}

DiagnosticCategory CategoryRules::categorize(const std::string& message) const {
    for (const auto& rule : rules_) {
        for (const auto& pattern : rule.patterns) {
            if (std::regex_search(message, std::regex(pattern))) return rule.category;
        }
    }
    return DiagnosticCategory::Other;
}

DiagnosticCategory categorize_diagnostic(const std::string& message) {
    static const CategoryRules rules = CategoryRules::defaults();
    return rules.categorize(message);
}

std::string java_unit_name(const std::string& code) {
    static const std::regex public_class(
        R"(public\s+(?:final\s+|abstract\s+|strictfp\s+)*(?:class|interface|enum|record)\s+([A-Za-z_$][A-Za-z0-9_$]*))");
    static const std::regex any_class(
        R"((?:class|interface|enum|record)\s+([A-Za-z_$][A-Za-z0-9_$]*))");
    std::smatch m;
    if (std::regex_search(code, m, public_class)) return m[1];
    if (std::regex_search(code, m, any_class)) return m[1];
    return "";
}

ValidationReport validate_java(const std::string& code,
                               const std::vector<std::string>& classpath,
                               const JavaValidatorConfig& cfg) {
    ValidationReport report;
    report.tool = ValidatorTool::JavaCompiler;
    auto started = std::chrono::steady_clock::now();

    std::string javac = cfg.javac;
    if (const char* env = std::getenv("FORGE_JAVAC"); env && *env) javac = env;
    if (find_executable(javac).empty()) throw ToolMissing("Java compiler not found: " + javac);

    std::string unit = java_unit_name(code);
    if (unit.empty()) unit = "Snippet";

    TempDir dir("forge-java-");
    std::string source = dir.path() + "/" + unit + ".java";
    write_file(source, code);

    std::vector<std::string> argv = {javac, "-d", dir.path()};
    if (!classpath.empty()) {
        argv.push_back("-cp");
        argv.push_back(join(classpath, ':'));
    }
    argv.push_back(source);

    ProcessResult proc = run_process(argv, cfg.timeout, dir.path());
    report.duration = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    report.raw_log = replace_all(proc.stderr_text, dir.path() + "/", "");

    if (proc.timed_out) {
        report.success = false;
        report.diagnostics.push_back(
            synthetic_error("compilation timed out after " +
                                std::to_string(cfg.timeout.count()) + " ms",
                            cfg.rules));
        return report;
    }

    static const std::regex diag_line(R"(^(.*\.java):(\d+):\s*(error|warning):\s*(.*)$)");
    std::istringstream in(report.raw_log);
    std::string line;
    while (std::getline(in, line)) {
        std::smatch m;
        if (!std::regex_match(line, m, diag_line)) continue;
        Diagnostic d;
        d.file = m[1];
        d.line = std::stoi(m[2]);
        d.severity = m[3] == "error" ? Severity::Error : Severity::Warning;
        d.message = m[4];
        d.category = cfg.rules.categorize(d.message);
        report.diagnostics.push_back(std::move(d));
    }

    report.success = proc.exit_code == 0;
    if (!report.success && !report.has_error()) {
        report.diagnostics.push_back(synthetic_error(
            "compiler exited with status " + std::to_string(proc.exit_code), cfg.rules));
    }
    return report;
}

ValidationReport validate_python(const std::string& code, const PythonValidatorConfig& cfg) {
    ValidationReport report;
    report.tool = ValidatorTool::PythonStaticCheck;
    auto started = std::chrono::steady_clock::now();

    std::string python = python_executable(cfg.env_path);
    if (python.empty())
        throw EnvMissing("no Python interpreter under environment: " + cfg.env_path);

    TempDir dir("forge-py-");
    std::string source = dir.path() + "/snippet.py";
    write_file(source, code);

    // Stage 1: static check.
    std::vector<std::string> checker = cfg.checker_argv;
    if (checker.empty()) throw ToolMissing("no static checker configured");
    checker.push_back(source);
    ProcessResult check = run_process(checker, cfg.timeout, dir.path());
    std::string check_log = replace_all(check.stdout_text + check.stderr_text,
                                        dir.path() + "/", "");
    report.raw_log = check_log;

    auto parse_checker_output = [&](const std::string& log) {
        static const std::regex finding(R"(^(.*?):(\d+)(?::\d+)?:\s*(.*)$)");
        std::istringstream in(log);
        std::string line;
        while (std::getline(in, line)) {
            std::smatch m;
            if (!std::regex_match(line, m, finding)) continue;
            Diagnostic d;
            d.file = m[1];
            d.line = std::stoi(m[2]);
            d.severity = Severity::Error;
            d.message = m[3];
            d.category = cfg.rules.categorize(d.message);
            report.diagnostics.push_back(std::move(d));
        }
    };

    if (check.timed_out) {
        report.diagnostics.push_back(synthetic_error("static check timed out", cfg.rules));
        report.success = false;
    } else if (check.exit_code != 0) {
        parse_checker_output(check_log);
        if (!report.has_error())
            report.diagnostics.push_back(
                synthetic_error("static checker exited with status " +
                                    std::to_string(check.exit_code),
                                cfg.rules));
        report.success = false;
    } else {
        // Stage 2: execute inside the managed environment.
        report.tool = ValidatorTool::PythonInterpreter;
        ProcessResult run = run_process({python, source}, cfg.timeout, dir.path());
        std::string run_log = replace_all(run.stderr_text, dir.path() + "/", "");
        report.raw_log += run_log;
        if (run.timed_out) {
            report.diagnostics.push_back(synthetic_error(
                "execution timed out after " + std::to_string(cfg.timeout.count()) + " ms",
                cfg.rules));
            report.success = false;
        } else if (run.exit_code != 0) {
            // The last traceback line carries the error type and message.
            std::istringstream in(run_log);
            std::string line, last;
            while (std::getline(in, line))
                if (!line.empty() && line[0] != ' ') last = line;
            report.diagnostics.push_back(
                synthetic_error(last.empty() ? "interpreter exited with status " +
                                                   std::to_string(run.exit_code)
                                             : last,
                                cfg.rules));
            report.success = false;
        } else {
            report.success = true;
        }
    }

    report.duration = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    return report;
}

}  // namespace forge
