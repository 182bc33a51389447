#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nsrenorm {

/// Flat key = value store with dotted namespaces; the config and manifest
/// file format. '#' starts a comment. Serialization is canonical (sorted
/// keys), so a config round-trips losslessly and hashes stably.
class KeyValueFile {
public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

    std::string serialize() const;
    static KeyValueFile parse(const std::string& text);
    static KeyValueFile load(const std::string& path);
    void save(const std::string& path) const;

private:
    std::map<std::string, std::string> kv_;
};

/// Typed run configuration; mirrors the CLI flags one-to-one.
struct RunConfig {
    int grid_n = 16;
    double box_l = 6.283185307179586; // 2*pi, so lambda1 = 1
    double nu = 1.0;

    std::string renorm_omega_mode = "auto_lambda1"; // or "manual"
    double renorm_omega = 0.0;
    std::string renorm_r_mode = "auto_r_hat"; // or "manual"
    double renorm_r = 0.1;

    std::string forcing_kind = "zero"; // zero | steady | holder_family
    double forcing_amplitude = 1.0;
    std::uint64_t forcing_seed = 101;
    double forcing_theta = 0.5;
    double forcing_t0 = 0.0;
    double forcing_decay = 3.0;
    double forcing_d = 0.0; // 0: derived from the construction; larger values accepted

    std::size_t estimator_samples = 200;
    int estimator_hill_steps = 100;
    std::uint64_t estimator_seed = 1;
    double estimator_decay = 2.0;
    double alpha1 = 0.0, alpha2 = 1.0, alpha3 = 0.5;

    std::size_t audit_samples = 1000;
    std::uint64_t audit_seed = 2;
    std::size_t audit_pairs = 100;
    double audit_decay = 2.0;

    double sim_dt = 0.0;    // 0: default 0.25*min(advective, 1/(nu lambda_max))
    double sim_t_end = 0.0; // 0: 50 / (nu lambda1)
    int sim_sample_stride = 10;
    std::uint64_t sim_seed = 3;
    double sim_u0_scale = 1.0;   // fraction of u_plus/2 when certified
    double sim_u0_norm_h1 = 1.0; // absolute H,1 norm when uncertified
    double sim_u0_decay = 2.0;
    bool sim_stokes_only = false;
    bool sim_uncertified = false;
    int sim_snapshot_stride = 0;

    std::string sweep_mode = "nu"; // nu | m-scaling
    std::vector<double> sweep_nu;
    std::vector<int> sweep_n;

    int ou_degree_1d = 20;
    int ou_degree_3d = 8;
    double ou_gamma = 0.5;
    std::size_t ou_samples = 1000;
    std::uint64_t ou_seed = 5;
    double ou_omega = 1.0;

    int threads = 0;
    std::string out_dir = "out";

    KeyValueFile to_kv() const;
    static RunConfig from_kv(const KeyValueFile& kv); // strict: unknown keys rejected
    static RunConfig load(const std::string& path);

    /// Applies NSRENORM_* environment overrides (dots become underscores,
    /// upper-cased: forcing.kind -> NSRENORM_FORCING_KIND).
    void apply_env_overrides();

    /// FNV-1a hash of the canonical serialization, as 16 hex digits.
    std::string hash() const;
};

std::uint64_t fnv1a64(const std::string& bytes);
std::string to_hex(std::uint64_t v);

} // namespace nsrenorm
