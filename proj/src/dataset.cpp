#include "forge/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace forge {

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("cannot read " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

ImportSet load_import_file(const std::string& path, Language lang) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("cannot read " + path);
    ImportSet set;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto parsed = parse_import_line(trimmed, lang);
        if (parsed.empty())
            throw DatasetError(path + ":" + std::to_string(line_no) +
                               ": not an import declaration: " + line);
        for (const auto& st : parsed) set.insert(st);
    }
    return set;
}

std::vector<CodeSnippet> load_dataset(const std::string& root) {
    fs::path base(root);
    if (!fs::is_directory(base)) throw DatasetError("dataset root not a directory: " + root);

    std::vector<CodeSnippet> snippets;
    for (const auto& lib_entry : fs::directory_iterator(base)) {
        if (!lib_entry.is_directory()) continue;
        std::string label = lib_entry.path().filename().string();
        for (const auto& entry : fs::directory_iterator(lib_entry.path())) {
            if (!entry.is_regular_file()) continue;
            std::string ext = entry.path().extension().string();
            Language lang;
            if (ext == ".java")
                lang = Language::Java;
            else if (ext == ".py")
                lang = Language::Python;
            else
                continue;

            CodeSnippet snippet;
            snippet.id = label + "/" + entry.path().stem().string();
            snippet.language = lang;
            snippet.library_label = label;

            StripResult stripped = strip_imports(read_file(entry.path()), lang);
            snippet.body = stripped.body;

            fs::path truth_path = entry.path();
            truth_path.replace_extension(".imports");
            if (fs::exists(truth_path))
                snippet.ground_truth = load_import_file(truth_path.string(), lang);
            snippets.push_back(std::move(snippet));
        }
    }
    std::sort(snippets.begin(), snippets.end(),
              [](const CodeSnippet& a, const CodeSnippet& b) { return a.id < b.id; });
    return snippets;
}

std::map<std::string, ImportSet> load_import_lists(const std::string& root, Language lang) {
    fs::path base(root);
    if (!fs::is_directory(base)) throw DatasetError("prediction root not a directory: " + root);
    std::map<std::string, ImportSet> out;
    for (const auto& entry : fs::recursive_directory_iterator(base)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".imports") continue;
        std::string key = fs::relative(entry.path(), base).replace_extension("").string();
        out[key] = load_import_file(entry.path().string(), lang);
    }
    return out;
}

}  // namespace forge
