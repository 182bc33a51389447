#include "nsrenorm/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nsrenorm {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            if (!trim(cur).empty()) out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

} // namespace

const std::string& KeyValueFile::get(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw std::invalid_argument("config: missing key '" + key + "'");
    return it->second;
}

std::string KeyValueFile::get_or(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::string KeyValueFile::serialize() const {
    std::string out;
    for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
    return out;
}

KeyValueFile KeyValueFile::parse(const std::string& text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key at line " + std::to_string(lineno));
        kv.kv_[key] = value;
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void KeyValueFile::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    out << serialize();
}

KeyValueFile RunConfig::to_kv() const {
    KeyValueFile kv;
    kv.set("grid.n", std::to_string(grid_n));
    kv.set("grid.box_l", fmt_double(box_l));
    kv.set("nu", fmt_double(nu));
    kv.set("renorm.omega_mode", renorm_omega_mode);
    kv.set("renorm.omega", fmt_double(renorm_omega));
    kv.set("renorm.r_mode", renorm_r_mode);
    kv.set("renorm.r", fmt_double(renorm_r));
    kv.set("forcing.kind", forcing_kind);
    kv.set("forcing.amplitude", fmt_double(forcing_amplitude));
    kv.set("forcing.seed", std::to_string(forcing_seed));
    kv.set("forcing.theta", fmt_double(forcing_theta));
    kv.set("forcing.t0", fmt_double(forcing_t0));
    kv.set("forcing.spectrum_decay", fmt_double(forcing_decay));
    kv.set("forcing.d", fmt_double(forcing_d));
    kv.set("estimator.samples", std::to_string(estimator_samples));
    kv.set("estimator.hill_climb_steps", std::to_string(estimator_hill_steps));
    kv.set("estimator.seed", std::to_string(estimator_seed));
    kv.set("estimator.spectrum_decay", fmt_double(estimator_decay));
    kv.set("estimator.alpha1", fmt_double(alpha1));
    kv.set("estimator.alpha2", fmt_double(alpha2));
    kv.set("estimator.alpha3", fmt_double(alpha3));
    kv.set("audit.samples", std::to_string(audit_samples));
    kv.set("audit.seed", std::to_string(audit_seed));
    kv.set("audit.pairs", std::to_string(audit_pairs));
    kv.set("audit.spectrum_decay", fmt_double(audit_decay));
    kv.set("sim.dt", fmt_double(sim_dt));
    kv.set("sim.t_end", fmt_double(sim_t_end));
    kv.set("sim.sample_stride", std::to_string(sim_sample_stride));
    kv.set("sim.seed", std::to_string(sim_seed));
    kv.set("sim.u0_scale", fmt_double(sim_u0_scale));
    kv.set("sim.u0_norm_h1", fmt_double(sim_u0_norm_h1));
    kv.set("sim.u0_spectrum_decay", fmt_double(sim_u0_decay));
    kv.set("sim.stokes_only", sim_stokes_only ? "1" : "0");
    kv.set("sim.uncertified", sim_uncertified ? "1" : "0");
    kv.set("sim.snapshot_stride", std::to_string(sim_snapshot_stride));
    kv.set("sweep.mode", sweep_mode);
    {
        std::string s;
        for (double v : sweep_nu) s += (s.empty() ? "" : ",") + fmt_double(v);
        kv.set("sweep.nu", s);
        std::string t;
        for (int v : sweep_n) t += (t.empty() ? "" : ",") + std::to_string(v);
        kv.set("sweep.n", t);
    }
    kv.set("ou.degree_1d", std::to_string(ou_degree_1d));
    kv.set("ou.degree_3d", std::to_string(ou_degree_3d));
    kv.set("ou.gamma", fmt_double(ou_gamma));
    kv.set("ou.samples", std::to_string(ou_samples));
    kv.set("ou.seed", std::to_string(ou_seed));
    kv.set("ou.omega", fmt_double(ou_omega));
    kv.set("threads", std::to_string(threads));
    kv.set("out.dir", out_dir);
    return kv;
}

RunConfig RunConfig::from_kv(const KeyValueFile& kv) {
    RunConfig base;
    KeyValueFile known = base.to_kv();
    for (const auto& [k, v] : kv.entries()) {
        (void)v;
        if (!known.has(k)) throw std::invalid_argument("config: unknown key '" + k + "'");
    }
    RunConfig c;
    auto gets = [&](const char* k, const std::string& d) { return kv.get_or(k, d); };
    auto getd = [&](const char* k, double d) {
        auto s = kv.get_or(k, fmt_double(d));
        return std::strtod(s.c_str(), nullptr);
    };
    auto geti = [&](const char* k, long long d) {
        return std::stoll(kv.get_or(k, std::to_string(d)));
    };
    auto getu = [&](const char* k, std::uint64_t d) {
        return static_cast<std::uint64_t>(std::stoull(kv.get_or(k, std::to_string(d))));
    };
    c.grid_n = static_cast<int>(geti("grid.n", c.grid_n));
    c.box_l = getd("grid.box_l", c.box_l);
    c.nu = getd("nu", c.nu);
    c.renorm_omega_mode = gets("renorm.omega_mode", c.renorm_omega_mode);
    c.renorm_omega = getd("renorm.omega", c.renorm_omega);
    c.renorm_r_mode = gets("renorm.r_mode", c.renorm_r_mode);
    c.renorm_r = getd("renorm.r", c.renorm_r);
    c.forcing_kind = gets("forcing.kind", c.forcing_kind);
    c.forcing_amplitude = getd("forcing.amplitude", c.forcing_amplitude);
    c.forcing_seed = getu("forcing.seed", c.forcing_seed);
    c.forcing_theta = getd("forcing.theta", c.forcing_theta);
    c.forcing_t0 = getd("forcing.t0", c.forcing_t0);
    c.forcing_decay = getd("forcing.spectrum_decay", c.forcing_decay);
    c.forcing_d = getd("forcing.d", c.forcing_d);
    c.estimator_samples = static_cast<std::size_t>(geti("estimator.samples", c.estimator_samples));
    c.estimator_hill_steps =
        static_cast<int>(geti("estimator.hill_climb_steps", c.estimator_hill_steps));
    c.estimator_seed = getu("estimator.seed", c.estimator_seed);
    c.estimator_decay = getd("estimator.spectrum_decay", c.estimator_decay);
    c.alpha1 = getd("estimator.alpha1", c.alpha1);
    c.alpha2 = getd("estimator.alpha2", c.alpha2);
    c.alpha3 = getd("estimator.alpha3", c.alpha3);
    c.audit_samples = static_cast<std::size_t>(geti("audit.samples", c.audit_samples));
    c.audit_seed = getu("audit.seed", c.audit_seed);
    c.audit_pairs = static_cast<std::size_t>(geti("audit.pairs", c.audit_pairs));
    c.audit_decay = getd("audit.spectrum_decay", c.audit_decay);
    c.sim_dt = getd("sim.dt", c.sim_dt);
    c.sim_t_end = getd("sim.t_end", c.sim_t_end);
    c.sim_sample_stride = static_cast<int>(geti("sim.sample_stride", c.sim_sample_stride));
    c.sim_seed = getu("sim.seed", c.sim_seed);
    c.sim_u0_scale = getd("sim.u0_scale", c.sim_u0_scale);
    c.sim_u0_norm_h1 = getd("sim.u0_norm_h1", c.sim_u0_norm_h1);
    c.sim_u0_decay = getd("sim.u0_spectrum_decay", c.sim_u0_decay);
    c.sim_stokes_only = gets("sim.stokes_only", "0") == "1";
    c.sim_uncertified = gets("sim.uncertified", "0") == "1";
    c.sim_snapshot_stride = static_cast<int>(geti("sim.snapshot_stride", c.sim_snapshot_stride));
    c.sweep_mode = gets("sweep.mode", c.sweep_mode);
    for (const auto& s : split_list(kv.get_or("sweep.nu", "")))
        c.sweep_nu.push_back(std::strtod(s.c_str(), nullptr));
    for (const auto& s : split_list(kv.get_or("sweep.n", "")))
        c.sweep_n.push_back(std::stoi(s));
    c.ou_degree_1d = static_cast<int>(geti("ou.degree_1d", c.ou_degree_1d));
    c.ou_degree_3d = static_cast<int>(geti("ou.degree_3d", c.ou_degree_3d));
    c.ou_gamma = getd("ou.gamma", c.ou_gamma);
    c.ou_samples = static_cast<std::size_t>(geti("ou.samples", c.ou_samples));
    c.ou_seed = getu("ou.seed", c.ou_seed);
    c.ou_omega = getd("ou.omega", c.ou_omega);
    c.threads = static_cast<int>(geti("threads", c.threads));
    c.out_dir = gets("out.dir", c.out_dir);
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    return from_kv(KeyValueFile::load(path));
}

void RunConfig::apply_env_overrides() {
    KeyValueFile kv = to_kv();
    KeyValueFile merged = kv;
    for (const auto& [k, v] : kv.entries()) {
        (void)v;
        std::string env = "NSRENORM_";
        for (char ch : k) env += (ch == '.') ? '_' : static_cast<char>(std::toupper(ch));
        if (const char* val = std::getenv(env.c_str())) merged.set(k, val);
    }
    *this = from_kv(merged);
}

std::string RunConfig::hash() const { return to_hex(fnv1a64(to_kv().serialize())); }

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace nsrenorm
