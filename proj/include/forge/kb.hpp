#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/imports.hpp"
#include "forge/zip.hpp"

namespace forge {

struct FormatVersionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CorruptIndex : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LibraryArtifact {
    std::string artifact_id;   // name + version, e.g. joda-time-2.9.9
    std::string archive_path;
    std::int64_t last_modified = 0;  // epoch seconds
};

struct ClassRecord {
    std::string fqn;
    std::set<std::string> methods;
    std::set<std::string> fields;
    std::string artifact_id;
};

struct ConstraintQuery {
    std::string fqn;
    std::set<std::string> required_methods;
    std::set<std::string> required_fields;
};

struct IngestResult {
    LibraryArtifact artifact;
    std::vector<ClassRecord> records;
    std::vector<std::string> skipped;  // per-entry parse failures, logged not fatal
};

/// Extract concrete-class records from a ZIP-container class archive.
/// Abstract classes, interfaces and compiler-generated names are skipped.
/// `override_date` replaces the archive metadata date when given.
IngestResult ingest_archive(const std::string& path, const std::string& artifact_id,
                            std::optional<std::int64_t> override_date = std::nullopt);

/// Same contract but shelling out to a class file disassembler (javap)
/// for member extraction. Fidelity fallback; the direct parser is the
/// default route.
IngestResult ingest_archive_javap(const std::string& path, const std::string& artifact_id,
                                  const std::string& javap_path,
                                  std::optional<std::int64_t> override_date = std::nullopt);

struct ClasspathResult {
    std::vector<std::string> paths;       // deduplicated, first-resolution order
    std::vector<std::string> unresolved;  // FQNs with no surviving candidate
};

/// Immutable after load/finalize: FQN -> candidate artifacts with member
/// signatures, candidates kept sorted by last_modified descending
/// (date-equal ties by artifact_id ascending).
class InverseIndex {
public:
    void add(const IngestResult& ingest);
    void add_artifact(const LibraryArtifact& artifact);
    void add_record(const ClassRecord& record);

    std::size_t artifact_count() const { return artifacts_.size(); }
    std::size_t fqn_count() const { return by_fqn_.size(); }

    const ClassRecord* record(const std::string& fqn, const std::string& artifact_id) const;

    /// Candidates under `q.fqn` whose record contains every required
    /// method and field; most recent wins, ties broken by artifact_id.
    std::optional<LibraryArtifact> resolve_library(const ConstraintQuery& q) const;

    /// Resolve each import to an archive path; wildcard imports and
    /// unknown FQNs land in `unresolved` and compilation proceeds anyway.
    ClasspathResult assemble_classpath(
        const ImportSet& imports,
        const std::map<std::string, ConstraintQuery>& constraints = {}) const;

    /// FQNs with more than one surviving candidate before the date
    /// tie-break, under empty constraints.
    std::size_t api_collision_count() const;

    void save(const std::string& path) const;
    static InverseIndex load(const std::string& path);

    bool operator==(const InverseIndex& other) const;

private:
    std::map<std::string, LibraryArtifact> artifacts_;
    std::map<std::string, std::vector<std::string>> by_fqn_;  // fqn -> artifact ids
    std::map<std::string, ClassRecord> records_;              // fqn + '\0' + artifact
    void sort_candidates(std::vector<std::string>& ids) const;
};

/// Parse the tab-separated manual-date file (artifact_id <TAB> ISO-8601
/// date), used when archive metadata has no usable date.
std::map<std::string, std::int64_t> load_date_overrides(const std::string& path);

std::int64_t parse_iso_date(const std::string& iso);

}  // namespace forge
