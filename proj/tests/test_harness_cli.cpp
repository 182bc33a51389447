/// Config round-trips, command determinism, exit codes, manifests and
/// replay. When invoked with the CLI binary path as argv[1], also
/// exercises the installed command surface end to end.

#include "test_harness.hpp"

#include "nsrenorm/commands.hpp"
#include "nsrenorm/field_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nsrenorm;
using harness::record;
using harness::throws;

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

RunConfig small_config() {
    RunConfig cfg;
    cfg.grid_n = 8;
    cfg.forcing_kind = "steady";
    cfg.forcing_amplitude = 1.0;
    cfg.estimator_samples = 60;
    cfg.estimator_hill_steps = 60;
    cfg.audit_samples = 30;
    cfg.audit_pairs = 8;
    cfg.nu = 1.0;
    return cfg;
}

void test_config_roundtrip() {
    RunConfig cfg = small_config();
    cfg.sweep_nu = {0.5, 2.5};
    cfg.sweep_n = {8, 16};
    std::string text = cfg.to_kv().serialize();
    RunConfig back = RunConfig::from_kv(KeyValueFile::parse(text));
    record("config: lossless kv round-trip", back.to_kv().serialize() == text);

    KeyValueFile bad;
    bad.set("grid.m", "8");
    record("config: unknown key rejected", throws([&] { (void)RunConfig::from_kv(bad); }));

    KeyValueFile cmt = KeyValueFile::parse("# comment\n\nnu = 2.5\n");
    record("config: comments and blanks tolerated", cmt.get("nu") == "2.5");

    record("config: malformed line rejected",
           throws([] { (void)KeyValueFile::parse("nu 2.5\n"); }));

    setenv("NSRENORM_NU", "7.25", 1);
    RunConfig env = small_config();
    env.apply_env_overrides();
    unsetenv("NSRENORM_NU");
    record("config: NSRENORM_NU env override", env.nu == 7.25);
}

void test_certify_exit_codes_and_determinism() {
    RunConfig cfg = small_config();
    StageSetup st = build_stage(cfg);
    ConstantEstimate c = run_estimator(cfg, st.lat);
    CertificateReport probe = build_certificate_solo(cfg, st, c);
    cfg.nu = static_cast<double>(2.0L * probe.nu_min);

    fs::path d1 = fresh_dir("nsrenorm_cert_a");
    fs::path d2 = fresh_dir("nsrenorm_cert_b");
    std::ostringstream log1, log2;
    cfg.out_dir = d1.string();
    int rc1 = cmd_certify(cfg, log1);
    cfg.out_dir = d2.string();
    int rc2 = cmd_certify(cfg, log2);
    record("certify: feasible config exits 0", rc1 == 0 && rc2 == 0,
           "(rc=" + std::to_string(rc1) + ")");
    record("certify: byte-identical certificate.csv across runs",
           read_file((d1 / "certificate.csv").string()) ==
               read_file((d2 / "certificate.csv").string()));
    record("certify: byte-identical certificate.txt across runs",
           read_file((d1 / "certificate.txt").string()) ==
               read_file((d2 / "certificate.txt").string()));

    RunConfig low = cfg;
    low.nu = static_cast<double>(0.5L * probe.nu_min);
    low.out_dir = fresh_dir("nsrenorm_cert_low").string();
    std::ostringstream log3;
    int rc3 = cmd_certify(low, log3);
    record("certify: nu below nu_min exits 2", rc3 == kExitInfeasible);
    CertificateReport rep = load_certificate_kv(low.out_dir + "/certificate.txt");
    record("certify: infeasible report has gamma = 4 and no roots",
           !rep.feasible && std::abs(static_cast<double>(rep.gamma) - 4.0) < 1e-12 &&
               !rep.u_plus);

    // a starved estimator must trip the audit, raise c through the
    // self-consistency loop, and flag the event via exit code 3
    RunConfig starved = cfg;
    starved.estimator_samples = 2;
    starved.estimator_hill_steps = 0;
    starved.audit_samples = 200;
    starved.out_dir = fresh_dir("nsrenorm_cert_starved").string();
    std::ostringstream log4;
    int rc4 = cmd_certify(starved, log4);
    record("certify: starved estimator exits 3 (audit violation)",
           rc4 == kExitAuditViolation);
    KeyValueFile audit_kv = KeyValueFile::load(starved.out_dir + "/certificate.txt");
    record("certify: self-consistency loop recorded events and reran",
           std::stoi(audit_kv.get("audit.events")) > 0 &&
               std::stoi(audit_kv.get("audit.rounds")) > 1);
    record("certify: final audit round is clean after the update",
           audit_kv.get("audit.trilinear.violations") == "0");
    record("certify: replay seeds emitted for the violations",
           !audit_kv.get("audit.replay_seeds").empty());
    CertificateReport starved_rep = load_certificate_kv(starved.out_dir + "/certificate.txt");
    record("certify: constant raised above the starved estimate",
           starved_rep.c.value > 0.0);
}

void test_simulate_exit_codes() {
    RunConfig cfg = small_config();
    StageSetup st = build_stage(cfg);
    ConstantEstimate c = run_estimator(cfg, st.lat);
    CertificateReport probe = build_certificate_solo(cfg, st, c);

    // infeasible without override
    RunConfig low = cfg;
    low.nu = static_cast<double>(0.25L * probe.nu_min);
    low.out_dir = fresh_dir("nsrenorm_sim_low").string();
    std::ostringstream log;
    record("simulate: infeasible certificate exits 2",
           cmd_simulate(low, "", log) == kExitInfeasible);

    // same config with --uncertified runs and reports NO-CLAIM
    low.sim_uncertified = true;
    low.sim_t_end = 0.05;
    low.sim_dt = 0.002;
    low.sim_u0_norm_h1 = 0.1;
    std::ostringstream log2;
    int rc = cmd_simulate(low, "", log2);
    record("simulate: --uncertified runs with NO-CLAIM verdict",
           rc == 0 && log2.str().find("NO-CLAIM") != std::string::npos);

    // certified run against a saved certificate file
    RunConfig cert_cfg = cfg;
    cert_cfg.nu = static_cast<double>(2.0L * probe.nu_min);
    cert_cfg.out_dir = fresh_dir("nsrenorm_sim_certify").string();
    std::ostringstream log3;
    record("setup certify for simulate", cmd_certify(cert_cfg, log3) == 0);

    RunConfig sim_cfg = cert_cfg;
    sim_cfg.out_dir = fresh_dir("nsrenorm_sim_run").string();
    sim_cfg.sim_t_end = 2.0 / sim_cfg.nu;
    sim_cfg.sim_dt = sim_cfg.sim_t_end / 200.0;
    sim_cfg.sim_sample_stride = 20;
    std::ostringstream log4;
    int rc4 = cmd_simulate(sim_cfg, cert_cfg.out_dir + "/certificate.txt", log4);
    record("simulate: certified run exits 0 with INVARIANT verdict",
           rc4 == 0 && log4.str().find("INVARIANT") != std::string::npos, log4.str());
    record("simulate: trajectory.csv written",
           fs::exists(fs::path(sim_cfg.out_dir) / "trajectory.csv"));

    // snapshots are emitted at the configured stride and land in the manifest
    RunConfig snap_cfg = sim_cfg;
    snap_cfg.out_dir = fresh_dir("nsrenorm_sim_snap").string();
    snap_cfg.sim_snapshot_stride = 100;
    std::ostringstream log5;
    record("simulate: snapshot run exits 0",
           cmd_simulate(snap_cfg, cert_cfg.out_dir + "/certificate.txt", log5) == 0);
    record("simulate: snapshot file exists",
           fs::exists(fs::path(snap_cfg.out_dir) / "snapshot_0.fld"));
    VelocityField snap = load_field(snap_cfg.out_dir + "/snapshot_0.fld");
    record("simulate: snapshot loads and is divergence-free",
           divergence_residual(snap) < 1e-12);
    std::string manifest = read_file(snap_cfg.out_dir + "/manifest.txt");
    record("simulate: snapshot listed in the manifest",
           manifest.find("snapshot_0.fld") != std::string::npos);

    // a well-formed certificate whose ball is far too small must trip
    // the invariance monitor and map to exit code 4
    CertificateReport doctored = load_certificate_kv(cert_cfg.out_dir + "/certificate.txt");
    KeyValueFile fake = KeyValueFile::parse(read_file(cert_cfg.out_dir + "/certificate.txt"));
    {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.21Lg", *doctored.u_plus * 1e-3L);
        fake.set("u_plus", buf);
        std::snprintf(buf, sizeof buf, "%.21Lg", *doctored.u_minus * 1e-9L);
        fake.set("u_minus", buf);
    }
    fs::path fake_path = fs::path(cert_cfg.out_dir) / "certificate_small_ball.txt";
    fake.save(fake_path.string());
    RunConfig viol_cfg = sim_cfg;
    viol_cfg.out_dir = fresh_dir("nsrenorm_sim_violation").string();
    viol_cfg.sim_u0_scale = 0.999; // inside the doctored ball, which then cannot hold
    std::ostringstream log6;
    int rc6 = cmd_simulate(viol_cfg, fake_path.string(), log6);
    record("simulate: invariance violation exits 4 with VIOLATION verdict",
           rc6 == kExitInvarianceViolation &&
               log6.str().find("VIOLATION") != std::string::npos, log6.str());
}

void test_sweep() {
    RunConfig cfg = small_config();
    StageSetup st = build_stage(cfg);
    ConstantEstimate c = run_estimator(cfg, st.lat);
    CertificateReport probe = build_certificate_solo(cfg, st, c);

    cfg.sweep_mode = "nu";
    cfg.sweep_nu = {static_cast<double>(0.5L * probe.nu_min),
                    static_cast<double>(2.0L * probe.nu_min)};
    cfg.out_dir = fresh_dir("nsrenorm_sweep_nu").string();
    std::ostringstream log;
    record("sweep: nu grid exits 0", cmd_sweep(cfg, log) == 0);
    std::string csv = read_file(cfg.out_dir + "/sweep.csv");
    record("sweep: straddles nu_min (one infeasible, one feasible row)",
           csv.find(",infeasible") != std::string::npos && csv.find(",ok") != std::string::npos);

    RunConfig ms = small_config();
    ms.sweep_mode = "m-scaling";
    ms.sweep_n = {8, 16, 32};
    ms.out_dir = fresh_dir("nsrenorm_sweep_m").string();
    std::ostringstream log2;
    record("sweep: m-scaling exits 0", cmd_sweep(ms, log2) == 0);
    std::string mcsv = read_file(ms.out_dir + "/sweep.csv");
    // parse log10_M column (7th) and verify strict growth
    std::istringstream lines(mcsv);
    std::string line;
    std::getline(lines, line); // schema
    std::getline(lines, line); // header
    double prev = -1.0;
    bool increasing = true;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string cell;
        for (int i = 0; i < 7; ++i) std::getline(cells, cell, ',');
        double v = std::strtod(cell.c_str(), nullptr);
        if (v <= prev) increasing = false;
        prev = v;
    }
    record("sweep: M(N) strictly increasing over {8,16,32}", increasing, "(log10 M up to " +
           std::to_string(prev) + ")");

    RunConfig empty = small_config();
    empty.sweep_mode = "nu";
    empty.sweep_nu = {};
    empty.out_dir = fresh_dir("nsrenorm_sweep_empty").string();
    std::ostringstream log3;
    record("sweep: empty grid is a usage error", cmd_sweep(empty, log3) == kExitUsage);
}

void test_ou_and_replay() {
    RunConfig cfg;
    cfg.ou_samples = 100;
    cfg.out_dir = fresh_dir("nsrenorm_ou").string();
    std::ostringstream log;
    record("ou-validate exits 0", cmd_ou_validate(cfg, log) == 0);
    record("ou-validate writes ou_audit.csv", fs::exists(fs::path(cfg.out_dir) / "ou_audit.csv"));

    fs::path replay_dir = fresh_dir("nsrenorm_ou_replay");
    std::ostringstream log2;
    int rc = cmd_replay(cfg.out_dir + "/manifest.txt", replay_dir.string(), log2);
    record("replay: byte-identical outputs exit 0", rc == 0, log2.str());

    // a tampered manifest hash must be flagged
    std::string manifest = read_file(cfg.out_dir + "/manifest.txt");
    auto pos = manifest.find("output.0.hash = ");
    manifest[pos + 16] = manifest[pos + 16] == '0' ? '1' : '0';
    fs::path tampered = fs::path(cfg.out_dir) / "manifest_tampered.txt";
    std::ofstream(tampered.string(), std::ios::binary) << manifest;
    fs::path replay2 = fresh_dir("nsrenorm_ou_replay2");
    std::ostringstream log3;
    record("replay: tampered hash exits 3",
           cmd_replay(tampered.string(), replay2.string(), log3) == kExitAuditViolation);
}

void test_cli_binary(const std::string& bin) {
    auto run = [&](const std::string& args) {
        int rc = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(rc);
    };
    record("cli: --help exits 0", run("--help") == 0);
    record("cli: unknown flag exits 1", run("certify --no-such-flag") == 1);
    record("cli: missing subcommand exits 1", run("") == 1);

    fs::path d = fresh_dir("nsrenorm_cli_sweep");
    int rc = run("sweep --sweep-mode m-scaling --sweep-n 8,12 --out " + d.string());
    record("cli: m-scaling sweep exits 0", rc == 0);
    record("cli: sweep.csv written", fs::exists(d / "sweep.csv"));

    fs::path rd = fresh_dir("nsrenorm_cli_replay");
    int rc2 = run("replay " + (d / "manifest.txt").string() + " --out " + rd.string());
    record("cli: replay of the sweep exits 0", rc2 == 0);

    fs::path ou = fresh_dir("nsrenorm_cli_ou");
    int rc3 = run("ou-validate --ou-samples 50 --out " + ou.string());
    record("cli: ou-validate exits 0", rc3 == 0);
}

} // namespace

int main(int argc, char** argv) {
    std::string bin = argc > 1 ? argv[1] : "";
    return harness::run("harness and cli", [&] {
        test_config_roundtrip();
        test_certify_exit_codes_and_determinism();
        test_simulate_exit_codes();
        test_sweep();
        test_ou_and_replay();
        if (!bin.empty()) test_cli_binary(bin);
    });
}
