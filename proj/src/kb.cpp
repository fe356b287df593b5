#include "forge/kb.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "forge/classfile.hpp"
#include "forge/subprocess.hpp"

namespace forge {

namespace {

constexpr int kIndexFormatVersion = 1;

bool satisfies(const ClassRecord& rec, const ConstraintQuery& q) {
    for (const auto& m : q.required_methods)
        if (!rec.methods.count(m)) return false;
    for (const auto& f : q.required_fields)
        if (!rec.fields.count(f)) return false;
    return true;
}

std::string record_key(const std::string& fqn, const std::string& artifact_id) {
    return fqn + '\0' + artifact_id;
}

}  // namespace

std::int64_t parse_iso_date(const std::string& iso) {
    std::tm tm{};
    int y = 0, m = 0, d = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
        throw std::runtime_error("bad ISO-8601 date: " + iso);
    tm.tm_year = y - 1900;
    tm.tm_mon = m - 1;
    tm.tm_mday = d;
    return static_cast<std::int64_t>(timegm(&tm));
}

std::map<std::string, std::int64_t> load_date_overrides(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dates file: " + path);
    std::map<std::string, std::int64_t> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue;
        out[line.substr(0, tab)] = parse_iso_date(line.substr(tab + 1));
    }
    return out;
}

IngestResult ingest_archive(const std::string& path, const std::string& artifact_id,
                            std::optional<std::int64_t> override_date) {
    IngestResult result;
    result.artifact.artifact_id = artifact_id;
    result.artifact.archive_path = path;

    std::int64_t newest_entry = 0;
    for (const auto& entry : read_zip(path)) {
        newest_entry = std::max(newest_entry, entry.modified_epoch);
        if (entry.name.size() < 6 || entry.name.compare(entry.name.size() - 6, 6, ".class") != 0)
            continue;
        try {
            ClassInfo info = parse_class_file(entry.data);
            if (!info.concrete_class()) continue;
            ClassRecord rec;
            rec.fqn = info.fqn;
            rec.methods = std::move(info.methods);
            rec.fields = std::move(info.fields);
            rec.artifact_id = artifact_id;
            result.records.push_back(std::move(rec));
        } catch (const ClassParseError& e) {
            result.skipped.push_back(entry.name + ": " + e.what());
        }
    }
    result.artifact.last_modified = override_date.value_or(newest_entry);
    return result;
}

IngestResult ingest_archive_javap(const std::string& path, const std::string& artifact_id,
                                  const std::string& javap_path,
                                  std::optional<std::int64_t> override_date) {
    IngestResult result;
    result.artifact.artifact_id = artifact_id;
    result.artifact.archive_path = path;

    std::int64_t newest_entry = 0;
    std::vector<std::string> class_names;
    for (const auto& entry : read_zip(path)) {
        newest_entry = std::max(newest_entry, entry.modified_epoch);
        if (entry.name.size() > 6 &&
            entry.name.compare(entry.name.size() - 6, 6, ".class") == 0) {
            std::string binary = entry.name.substr(0, entry.name.size() - 6);
            std::replace(binary.begin(), binary.end(), '/', '.');
            class_names.push_back(binary);
        }
    }
    result.artifact.last_modified = override_date.value_or(newest_entry);

    for (const auto& binary : class_names) {
        auto proc = run_process({javap_path, "-p", "-cp", path, binary},
                                std::chrono::seconds(30));
        if (proc.exit_code != 0) {
            result.skipped.push_back(binary + ": javap failed");
            continue;
        }
        std::istringstream in(proc.stdout_text);
        std::string line;
        ClassRecord rec;
        rec.artifact_id = artifact_id;
        bool concrete = false;
        while (std::getline(in, line)) {
            if (line.find(" class ") != std::string::npos ||
                line.rfind("class ", 0) == 0) {
                if (line.find("abstract") == std::string::npos &&
                    line.find("interface") == std::string::npos) {
                    concrete = true;
                    std::string dotted = binary;
                    std::replace(dotted.begin(), dotted.end(), '$', '.');
                    rec.fqn = dotted;
                }
            } else if (concrete) {
                // Member lines look like "  public int foo(...);" or
                // "  java.lang.String bar;".
                std::string t = line;
                auto semi = t.find(';');
                if (semi == std::string::npos) continue;
                t = t.substr(0, semi);
                auto paren = t.find('(');
                std::string head = paren == std::string::npos ? t : t.substr(0, paren);
                auto last_space = head.find_last_of(" \t");
                if (last_space == std::string::npos) continue;
                std::string name = head.substr(last_space + 1);
                if (name.empty()) continue;
                if (paren != std::string::npos) {
                    if (name.find('.') == std::string::npos) rec.methods.insert(name);
                } else {
                    rec.fields.insert(name);
                }
            }
        }
        if (concrete && binary.find('$') == std::string::npos) result.records.push_back(rec);
    }
    return result;
}

void InverseIndex::add(const IngestResult& ingest) {
    add_artifact(ingest.artifact);
    for (const auto& rec : ingest.records) add_record(rec);
}

void InverseIndex::add_artifact(const LibraryArtifact& artifact) {
    artifacts_[artifact.artifact_id] = artifact;
}

void InverseIndex::add_record(const ClassRecord& record) {
    records_[record_key(record.fqn, record.artifact_id)] = record;
    auto& ids = by_fqn_[record.fqn];
    if (std::find(ids.begin(), ids.end(), record.artifact_id) == ids.end()) {
        ids.push_back(record.artifact_id);
        sort_candidates(ids);
    }
}

void InverseIndex::sort_candidates(std::vector<std::string>& ids) const {
    std::sort(ids.begin(), ids.end(), [this](const std::string& a, const std::string& b) {
        auto ia = artifacts_.find(a);
        auto ib = artifacts_.find(b);
        std::int64_t da = ia == artifacts_.end() ? 0 : ia->second.last_modified;
        std::int64_t db = ib == artifacts_.end() ? 0 : ib->second.last_modified;
        if (da != db) return da > db;
        return a < b;
    });
}

const ClassRecord* InverseIndex::record(const std::string& fqn,
                                        const std::string& artifact_id) const {
    auto it = records_.find(record_key(fqn, artifact_id));
    return it == records_.end() ? nullptr : &it->second;
}

std::optional<LibraryArtifact> InverseIndex::resolve_library(const ConstraintQuery& q) const {
    auto it = by_fqn_.find(q.fqn);
    if (it == by_fqn_.end()) return std::nullopt;
    for (const auto& artifact_id : it->second) {
        const ClassRecord* rec = record(q.fqn, artifact_id);
        if (rec && satisfies(*rec, q)) {
            auto art = artifacts_.find(artifact_id);
            if (art != artifacts_.end()) return art->second;
        }
    }
    return std::nullopt;
}

ClasspathResult InverseIndex::assemble_classpath(
    const ImportSet& imports, const std::map<std::string, ConstraintQuery>& constraints) const {
    ClasspathResult out;
    for (const auto& st : imports.entries()) {
        if (st.wildcard) {
            out.unresolved.push_back(st.fqn);
            continue;
        }
        ConstraintQuery q;
        auto cit = constraints.find(st.fqn);
        if (cit != constraints.end()) {
            q = cit->second;
        }
        q.fqn = st.fqn;
        auto resolved = resolve_library(q);
        if (!resolved) {
            out.unresolved.push_back(st.fqn);
            continue;
        }
        if (std::find(out.paths.begin(), out.paths.end(), resolved->archive_path) ==
            out.paths.end()) {
            out.paths.push_back(resolved->archive_path);
        }
    }
    return out;
}

std::size_t InverseIndex::api_collision_count() const {
    std::size_t collisions = 0;
    for (const auto& [fqn, ids] : by_fqn_)
        if (ids.size() > 1) ++collisions;
    return collisions;
}

void InverseIndex::save(const std::string& path) const {
    nlohmann::json j;
    j["format_version"] = kIndexFormatVersion;
    j["artifacts"] = nlohmann::json::array();
    for (const auto& [id, a] : artifacts_) {
        j["artifacts"].push_back({{"id", a.artifact_id},
                                  {"path", a.archive_path},
                                  {"last_modified", a.last_modified}});
    }
    j["records"] = nlohmann::json::array();
    for (const auto& [key, rec] : records_) {
        j["records"].push_back({{"fqn", rec.fqn},
                                {"artifact", rec.artifact_id},
                                {"methods", rec.methods},
                                {"fields", rec.fields}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write index: " + path);
    out << j.dump();
}

InverseIndex InverseIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptIndex("cannot open index: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptIndex("index is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object() || !j.contains("format_version"))
        throw CorruptIndex("index missing format_version");
    if (j["format_version"].get<int>() != kIndexFormatVersion)
        throw FormatVersionMismatch("index format version " +
                                    j["format_version"].dump() + ", expected " +
                                    std::to_string(kIndexFormatVersion));

    InverseIndex idx;
    try {
        for (const auto& a : j.at("artifacts")) {
            LibraryArtifact art;
            art.artifact_id = a.at("id").get<std::string>();
            art.archive_path = a.at("path").get<std::string>();
            art.last_modified = a.at("last_modified").get<std::int64_t>();
            idx.add_artifact(art);
        }
        for (const auto& r : j.at("records")) {
            ClassRecord rec;
            rec.fqn = r.at("fqn").get<std::string>();
            rec.artifact_id = r.at("artifact").get<std::string>();
            for (const auto& m : r.at("methods")) rec.methods.insert(m.get<std::string>());
            for (const auto& f : r.at("fields")) rec.fields.insert(f.get<std::string>());
            if (!idx.artifacts_.count(rec.artifact_id))
                throw CorruptIndex("record references unknown artifact " + rec.artifact_id);
            idx.add_record(rec);
        }
    } catch (const nlohmann::json::exception& e) {
        throw CorruptIndex("index structure invalid: " + std::string(e.what()));
    }
    return idx;
}

bool InverseIndex::operator==(const InverseIndex& other) const {
    if (by_fqn_ != other.by_fqn_) return false;
    if (artifacts_.size() != other.artifacts_.size()) return false;
    for (const auto& [id, a] : artifacts_) {
        auto it = other.artifacts_.find(id);
        if (it == other.artifacts_.end() || it->second.archive_path != a.archive_path ||
            it->second.last_modified != a.last_modified)
            return false;
    }
    if (records_.size() != other.records_.size()) return false;
    for (const auto& [key, rec] : records_) {
        auto it = other.records_.find(key);
        if (it == other.records_.end() || it->second.methods != rec.methods ||
            it->second.fields != rec.fields)
            return false;
    }
    return true;
}

}  // namespace forge
