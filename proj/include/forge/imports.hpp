#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

enum class Language { Java, Python };

std::string to_string(Language lang);
Language language_from_string(const std::string& s);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A single normalized import declaration.
///
/// For Java, `fqn` is the dot-separated qualified name (`import static` is
/// carried in the `is_static` flag). For Python, `import a.b.c` yields
/// fqn=a.b.c with no symbol, while `from a.b import c` yields fqn=a.b and
/// imported_symbol=c; the two bind different names and stay distinct.
struct ImportStatement {
    std::string raw;
    std::string fqn;
    std::string imported_symbol;  // Python `from X import Y` -> Y; empty for Java
    std::string alias;            // `as` alias, Python only
    bool wildcard = false;
    bool is_static = false;       // Java `import static`
    bool from_import = false;     // Python `from X import ...` form

    /// Canonical form used for dedup, equality and voting. Ignores raw
    /// whitespace and trailing semicolons.
    std::string canonical() const;
};

/// Parse a physical line holding exactly one import declaration.
/// Throws ParseError if the line is not a single import for `lang`.
ImportStatement parse_import_statement(const std::string& line, Language lang);

/// Parse a line that may declare several imports at once (Python
/// `import a, b` / `from m import x, y`). Empty result means the line is
/// not an import declaration.
std::vector<ImportStatement> parse_import_line(const std::string& line, Language lang);

/// Deduplicated, order-insensitive set of import statements keyed by
/// canonical form.
class ImportSet {
public:
    ImportSet() = default;
    explicit ImportSet(const std::vector<ImportStatement>& statements);

    void insert(const ImportStatement& st);
    bool contains_canonical(const std::string& canonical) const;
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    /// Entries in canonical (sorted) order.
    std::vector<ImportStatement> entries() const;
    std::vector<std::string> canonical_forms() const;

    /// Sorted canonical forms joined with '\n'. Used as the vote identity
    /// and as the deterministic tie-break key.
    std::string serialize() const;

    bool operator==(const ImportSet& other) const;
    bool operator!=(const ImportSet& other) const { return !(*this == other); }

    /// True iff every entry of this set is present in `other`.
    bool subset_of(const ImportSet& other) const;

private:
    std::map<std::string, ImportStatement> entries_;
};

/// Render a statement back to a source declaration line for `lang`.
std::string render_import(const ImportStatement& st, Language lang);

/// One declaration per line, canonical order, trailing newline when
/// non-empty.
std::string render_imports(const ImportSet& set, Language lang);

enum class MatchCategory { Same, Different, Missing, Extra, None };

std::string to_string(MatchCategory c);

/// List-wise comparison of a predicted import set against ground truth.
/// Precedence: Same > None > Extra > Missing > Different; both empty is Same.
MatchCategory classify_match(const ImportSet& pred, const ImportSet& truth);

/// One benchmark unit. `body` never contains import declarations.
struct CodeSnippet {
    std::string id;
    Language language = Language::Java;
    std::string library_label;
    std::string body;
    std::optional<ImportSet> ground_truth;
};

struct StripResult {
    std::string body;
    ImportSet removed;
};

/// Remove every line that parses as an import declaration. Non-import
/// lines are kept byte-identical and in order.
StripResult strip_imports(const std::string& source, Language lang);

}  // namespace forge
