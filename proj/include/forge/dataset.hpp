#pragma once

#include <map>
#include <string>
#include <vector>

#include "forge/imports.hpp"

namespace forge {

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Load a benchmark tree: one directory per library label holding
/// `<id>.java` / `<id>.py` sources with optional sibling `<id>.imports`
/// ground-truth files (one raw declaration per line). Import lines left
/// in a source are stripped defensively; only the `.imports` file feeds
/// the ground truth. Snippets come back sorted by (library_label, id).
std::vector<CodeSnippet> load_dataset(const std::string& root);

/// Read one ground-truth/prediction file: one raw import declaration per
/// line, blank lines and '#' comments skipped.
ImportSet load_import_file(const std::string& path, Language lang);

/// Collect `<id>.imports` files under `root` keyed by "<library>/<id>",
/// for offline scoring of stored predictions.
std::map<std::string, ImportSet> load_import_lists(const std::string& root, Language lang);

}  // namespace forge
