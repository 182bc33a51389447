#pragma once

#include "nsrenorm/config.hpp"

namespace nsrenorm {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kCertificateSchema = 1;
inline constexpr int kTrajectorySchema = 1;
inline constexpr int kSweepSchema = 1;
inline constexpr int kOuSchema = 1;

/// Run provenance: command, config (embedded in full), schema versions,
/// and the hash of every emitted file. Replaying a manifest re-runs the
/// command from the embedded config and compares output hashes;
/// timestamps are informational only and never enter the outputs.
struct RunManifest {
    std::string command;
    std::string config_hash;
    KeyValueFile config;
    std::vector<std::pair<std::string, std::string>> outputs; // (relative path, fnv64 hex)
    std::string timestamp;

    std::string serialize() const;
    static RunManifest parse_file(const std::string& path);
    void save(const std::string& path) const;
};

/// Collects output files of one command run and finalizes the manifest.
class OutputWriter {
public:
    explicit OutputWriter(std::string dir);
    const std::string& dir() const { return dir_; }

    /// Writes dir/name and records its hash.
    void write(const std::string& name, const std::string& bytes);
    /// Records a file some other component already wrote into dir.
    void add_existing(const std::string& name);
    void finalize_manifest(const std::string& command, const RunConfig& config);

    const std::vector<std::pair<std::string, std::string>>& outputs() const { return outputs_; }

private:
    std::string dir_;
    std::vector<std::pair<std::string, std::string>> outputs_;
};

std::string hash_file(const std::string& path);

} // namespace nsrenorm
