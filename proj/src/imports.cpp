#include "forge/imports.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace forge {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_qualified_name(const std::string& s) {
    if (s.empty()) return false;
    bool at_segment_start = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (at_segment_start) return false;
            at_segment_start = true;
        } else if (at_segment_start) {
            if (!is_ident_start(c)) return false;
            at_segment_start = false;
        } else if (!is_ident_char(c)) {
            return false;
        }
    }
    return !at_segment_start;
}

// Relative module paths ("..mod", ".") are legal in Python from-imports.
bool is_python_module_path(const std::string& s) {
    std::size_t dots = 0;
    while (dots < s.size() && s[dots] == '.') ++dots;
    if (dots == s.size()) return dots > 0;
    return is_qualified_name(s.substr(dots));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

// "name as alias" -> (name, alias); alias empty when absent.
bool split_alias(const std::string& piece, std::string& name, std::string& alias) {
    std::istringstream in(piece);
    std::string a, kw, b, rest;
    if (!(in >> a)) return false;
    if (in >> kw) {
        if (kw != "as" || !(in >> b) || (in >> rest)) return false;
        alias = b;
    } else {
        alias.clear();
    }
    name = a;
    return true;
}

std::vector<ImportStatement> parse_java_line(const std::string& raw) {
    std::string line = trim(raw);
    if (line.rfind("import", 0) != 0) return {};
    std::string rest = trim(line.substr(6));
    if (rest.empty() || (line.size() > 6 && !std::isspace(static_cast<unsigned char>(line[6]))))
        return {};
    while (!rest.empty() && rest.back() == ';') rest = trim(rest.substr(0, rest.size() - 1));

    ImportStatement st;
    st.raw = raw;
    if (rest.rfind("static", 0) == 0 && rest.size() > 6 &&
        std::isspace(static_cast<unsigned char>(rest[6]))) {
        st.is_static = true;
        rest = trim(rest.substr(6));
    }
    if (rest.size() > 2 && rest.compare(rest.size() - 2, 2, ".*") == 0) {
        st.wildcard = true;
        rest = rest.substr(0, rest.size() - 2);
    }
    if (!is_qualified_name(rest)) return {};
    st.fqn = rest;
    return {st};
}

std::vector<ImportStatement> parse_python_line(const std::string& raw) {
    std::string line = trim(raw);
    std::vector<ImportStatement> out;
    if (line.rfind("from ", 0) == 0) {
        std::size_t ipos = line.find(" import ");
        if (ipos == std::string::npos) return {};
        std::string mod = trim(line.substr(5, ipos - 5));
        std::string items = trim(line.substr(ipos + 8));
        if (!is_python_module_path(mod) || items.empty()) return {};
        if (items == "*") {
            ImportStatement st;
            st.raw = raw;
            st.fqn = mod;
            st.wildcard = true;
            st.from_import = true;
            return {st};
        }
        if (items.front() == '(') {
            items = trim(items.substr(1));
            if (!items.empty() && items.back() == ')') items = trim(items.substr(0, items.size() - 1));
        }
        for (const std::string& piece : split(items, ',')) {
            std::string p = trim(piece);
            if (p.empty()) continue;
            ImportStatement st;
            st.raw = raw;
            st.fqn = mod;
            st.from_import = true;
            std::string name, alias;
            if (!split_alias(p, name, alias) || !is_qualified_name(name)) return {};
            st.imported_symbol = name;
            st.alias = alias;
            out.push_back(st);
        }
        return out;
    }
    if (line.rfind("import", 0) == 0) {
        if (line.size() <= 6 || !std::isspace(static_cast<unsigned char>(line[6]))) return {};
        std::string items = trim(line.substr(6));
        for (const std::string& piece : split(items, ',')) {
            std::string p = trim(piece);
            if (p.empty()) continue;
            ImportStatement st;
            st.raw = raw;
            std::string name, alias;
            if (!split_alias(p, name, alias) || !is_qualified_name(name)) return {};
            st.fqn = name;
            st.alias = alias;
            out.push_back(st);
        }
        return out;
    }
    return {};
}

}  // namespace

std::string to_string(Language lang) {
    return lang == Language::Java ? "java" : "python";
}

Language language_from_string(const std::string& s) {
    if (s == "java" || s == "Java") return Language::Java;
    if (s == "python" || s == "Python" || s == "py") return Language::Python;
    throw ParseError("unknown language: " + s);
}

std::string ImportStatement::canonical() const {
    std::string c;
    if (is_static) c += "static ";
    if (from_import) {
        c += "from " + fqn + " import " + (wildcard ? "*" : imported_symbol);
    } else {
        c += fqn;
        if (wildcard) c += ".*";
    }
    if (!alias.empty()) c += " as " + alias;
    return c;
}

std::vector<ImportStatement> parse_import_line(const std::string& line, Language lang) {
    return lang == Language::Java ? parse_java_line(line) : parse_python_line(line);
}

ImportStatement parse_import_statement(const std::string& line, Language lang) {
    auto parsed = parse_import_line(line, lang);
    if (parsed.empty())
        throw ParseError("not an import declaration: " + trim(line));
    if (parsed.size() > 1)
        throw ParseError("line declares more than one import: " + trim(line));
    return parsed.front();
}

ImportSet::ImportSet(const std::vector<ImportStatement>& statements) {
    for (const auto& st : statements) insert(st);
}

void ImportSet::insert(const ImportStatement& st) {
    entries_.emplace(st.canonical(), st);
}

bool ImportSet::contains_canonical(const std::string& canonical) const {
    return entries_.count(canonical) > 0;
}

std::vector<ImportStatement> ImportSet::entries() const {
    std::vector<ImportStatement> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(v);
    return out;
}

std::vector<std::string> ImportSet::canonical_forms() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
}

std::string ImportSet::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        if (!out.empty()) out += '\n';
        out += k;
    }
    return out;
}

bool ImportSet::operator==(const ImportSet& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    return subset_of(other);
}

bool ImportSet::subset_of(const ImportSet& other) const {
    for (const auto& [k, v] : entries_)
        if (!other.contains_canonical(k)) return false;
    return true;
}

std::string render_import(const ImportStatement& st, Language lang) {
    if (lang == Language::Java) {
        std::string out = "import ";
        if (st.is_static) out += "static ";
        out += st.fqn;
        if (st.wildcard) out += ".*";
        out += ";";
        return out;
    }
    std::string out;
    if (st.from_import) {
        out = "from " + st.fqn + " import " + (st.wildcard ? "*" : st.imported_symbol);
    } else {
        out = "import " + st.fqn;
    }
    if (!st.alias.empty()) out += " as " + st.alias;
    return out;
}

std::string render_imports(const ImportSet& set, Language lang) {
    std::string out;
    for (const auto& st : set.entries()) {
        out += render_import(st, lang);
        out += '\n';
    }
    return out;
}

std::string to_string(MatchCategory c) {
    switch (c) {
        case MatchCategory::Same: return "Same";
        case MatchCategory::Different: return "Different";
        case MatchCategory::Missing: return "Missing";
        case MatchCategory::Extra: return "Extra";
        case MatchCategory::None: return "None";
    }
    return "?";
}

MatchCategory classify_match(const ImportSet& pred, const ImportSet& truth) {
    if (pred == truth) return MatchCategory::Same;
    if (pred.empty()) return MatchCategory::None;
    if (truth.subset_of(pred)) return MatchCategory::Extra;
    if (pred.subset_of(truth)) return MatchCategory::Missing;
    return MatchCategory::Different;
}

StripResult strip_imports(const std::string& source, Language lang) {
    StripResult result;
    std::string body;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        std::size_t nl = source.find('\n', pos);
        bool last = nl == std::string::npos;
        std::string line = last ? source.substr(pos) : source.substr(pos, nl - pos);
        if (last && line.empty() && pos > 0) break;

        auto parsed = parse_import_line(line, lang);
        if (parsed.empty()) {
            body += line;
            if (!last) body += '\n';
        } else {
            for (const auto& st : parsed) result.removed.insert(st);
        }
        if (last) break;
        pos = nl + 1;
    }
    result.body = body;
    return result;
}

}  // namespace forge
