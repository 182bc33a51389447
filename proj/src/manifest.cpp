#include "nsrenorm/manifest.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nsrenorm {

std::string RunManifest::serialize() const {
    std::string s = "nsrenorm-manifest 1\n";
    KeyValueFile kv;
    kv.set("artifact.version", kArtifactVersion);
    kv.set("command", command);
    kv.set("config.hash", config_hash);
    kv.set("schema.certificate", std::to_string(kCertificateSchema));
    kv.set("schema.trajectory", std::to_string(kTrajectorySchema));
    kv.set("schema.sweep", std::to_string(kSweepSchema));
    kv.set("schema.ou", std::to_string(kOuSchema));
    kv.set("timestamp", timestamp);
    for (const auto& [k, v] : config.entries()) kv.set("config." + k, v);
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        kv.set("output." + std::to_string(i) + ".path", outputs[i].first);
        kv.set("output." + std::to_string(i) + ".hash", outputs[i].second);
    }
    return s + kv.serialize();
}

RunManifest RunManifest::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("manifest: cannot open " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "nsrenorm-manifest" || version != 1)
        throw std::runtime_error("manifest: not a version-1 manifest");
    std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    KeyValueFile kv = KeyValueFile::parse(rest);

    RunManifest m;
    m.command = kv.get("command");
    m.config_hash = kv.get("config.hash");
    m.timestamp = kv.get_or("timestamp", "");
    for (const auto& [k, v] : kv.entries()) {
        if (k.rfind("config.", 0) == 0 && k != "config.hash")
            m.config.set(k.substr(7), v);
    }
    for (std::size_t i = 0;; ++i) {
        std::string pk = "output." + std::to_string(i) + ".path";
        std::string hk = "output." + std::to_string(i) + ".hash";
        if (!kv.has(pk)) break;
        m.outputs.emplace_back(kv.get(pk), kv.get(hk));
    }
    return m;
}

void RunManifest::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("manifest: cannot write " + path);
    out << serialize();
}

OutputWriter::OutputWriter(std::string dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

void OutputWriter::write(const std::string& name, const std::string& bytes) {
    std::string path = dir_ + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("output: cannot write " + path);
    out << bytes;
    outputs_.emplace_back(name, to_hex(fnv1a64(bytes)));
}

void OutputWriter::add_existing(const std::string& name) {
    outputs_.emplace_back(name, hash_file(dir_ + "/" + name));
}

void OutputWriter::finalize_manifest(const std::string& command, const RunConfig& config) {
    RunManifest m;
    m.command = command;
    m.config = config.to_kv();
    // the recorded hash covers the canonical config plus every schema version
    std::string hashed = config.to_kv().serialize();
    hashed += "schema.certificate=" + std::to_string(kCertificateSchema) + "\n";
    hashed += "schema.trajectory=" + std::to_string(kTrajectorySchema) + "\n";
    hashed += "schema.sweep=" + std::to_string(kSweepSchema) + "\n";
    hashed += "schema.ou=" + std::to_string(kOuSchema) + "\n";
    m.config_hash = to_hex(fnv1a64(hashed));
    m.outputs = outputs_;
    auto now = std::chrono::system_clock::now();
    m.timestamp = std::to_string(
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
    m.save(dir_ + "/manifest.txt");
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("hash_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return to_hex(fnv1a64(ss.str()));
}

} // namespace nsrenorm
