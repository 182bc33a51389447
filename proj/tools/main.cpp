#include "nsrenorm/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace nsrenorm;

namespace {

/// Binds the flags shared by every subcommand; flag names mirror config
/// keys. Precedence: defaults < --config file < NSRENORM_* env < flags.
struct ConfigBinder {
    std::string config_path;
    RunConfig cfg;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "config file (flat key = value)");
        app->add_option("--grid-n", cfg.grid_n, "truncation size N (|k_i| <= N/2)");
        app->add_option("--box-l", cfg.box_l, "torus period L");
        app->add_option("--nu", cfg.nu, "viscosity");
        app->add_option("--omega-mode", cfg.renorm_omega_mode, "auto_lambda1 | manual");
        app->add_option("--omega", cfg.renorm_omega, "decay rate (manual mode)");
        app->add_option("--r-mode", cfg.renorm_r_mode, "auto_r_hat | manual");
        app->add_option("--r", cfg.renorm_r, "renorming time (manual mode)");
        app->add_option("--forcing-kind", cfg.forcing_kind, "zero | steady | holder_family");
        app->add_option("--forcing-amplitude", cfg.forcing_amplitude, "||P f||_{H,1} ceiling");
        app->add_option("--forcing-seed", cfg.forcing_seed, "profile seed");
        app->add_option("--forcing-theta", cfg.forcing_theta, "Holder exponent");
        app->add_option("--forcing-t0", cfg.forcing_t0, "Holder modulation offset");
        app->add_option("--forcing-decay", cfg.forcing_decay, "profile spectrum decay");
        app->add_option("--forcing-d", cfg.forcing_d, "declared Holder constant (0 = derived)");
        app->add_option("--estimator-samples", cfg.estimator_samples, "random-scan samples");
        app->add_option("--hill-climb-steps", cfg.estimator_hill_steps, "hill-climb budget");
        app->add_option("--estimator-seed", cfg.estimator_seed, "estimator seed");
        app->add_option("--estimator-decay", cfg.estimator_decay, "sample spectrum decay");
        app->add_option("--alpha1", cfg.alpha1, "trilinear exponent alpha1");
        app->add_option("--alpha2", cfg.alpha2, "trilinear exponent alpha2");
        app->add_option("--alpha3", cfg.alpha3, "trilinear exponent alpha3");
        app->add_option("--audit-samples", cfg.audit_samples, "audit sample count");
        app->add_option("--audit-seed", cfg.audit_seed, "audit seed");
        app->add_option("--audit-pairs", cfg.audit_pairs, "dissipativity pair count");
        app->add_option("--dt", cfg.sim_dt, "time step (0 = auto)");
        app->add_option("--t-end", cfg.sim_t_end, "horizon (0 = 50/(nu lambda1))");
        app->add_option("--sample-stride", cfg.sim_sample_stride, "record every k-th step");
        app->add_option("--sim-seed", cfg.sim_seed, "initial-datum seed");
        app->add_option("--u0-scale", cfg.sim_u0_scale, "u0 radius as fraction of u_plus/2");
        app->add_option("--u0-norm-h1", cfg.sim_u0_norm_h1, "u0 H,1 norm (uncertified runs)");
        app->add_flag("--stokes-only", cfg.sim_stokes_only, "disable the nonlinear term");
        app->add_flag("--uncertified", cfg.sim_uncertified, "run without an invariance claim");
        app->add_option("--snapshot-stride", cfg.sim_snapshot_stride, "field snapshot stride");
        app->add_option("--sweep-mode", cfg.sweep_mode, "nu | m-scaling");
        app->add_option("--sweep-nu", sweep_nu_csv, "comma-separated nu grid");
        app->add_option("--sweep-n", sweep_n_csv, "comma-separated N grid");
        app->add_option("--ou-degree-1d", cfg.ou_degree_1d, "Hermite degree, 1D audits");
        app->add_option("--ou-degree-3d", cfg.ou_degree_3d, "Hermite degree, 3D audits");
        app->add_option("--ou-gamma", cfg.ou_gamma, "OU renorming time in (0,1)");
        app->add_option("--ou-samples", cfg.ou_samples, "OU audit samples");
        app->add_option("--ou-seed", cfg.ou_seed, "OU audit seed");
        app->add_option("--ou-omega", cfg.ou_omega, "OU decay rate");
        app->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
        app->add_option("--out", cfg.out_dir, "output directory");
    }

    std::string sweep_nu_csv, sweep_n_csv;

    RunConfig resolve(CLI::App* app) {
        RunConfig base;
        if (!config_path.empty()) base = RunConfig::load(config_path);
        base.apply_env_overrides();
        // overlay only the flags the user actually passed
        KeyValueFile kv = base.to_kv();
        KeyValueFile flags = cfg.to_kv();
        for (const auto& [k, v] : flags.entries()) {
            std::string flag = flag_for_key(k);
            if (!flag.empty() && app->count(flag) > 0) kv.set(k, v);
        }
        if (app->count("--sweep-nu") > 0) kv.set("sweep.nu", sweep_nu_csv);
        if (app->count("--sweep-n") > 0) kv.set("sweep.n", sweep_n_csv);
        return RunConfig::from_kv(kv);
    }

    static std::string flag_for_key(const std::string& key) {
        static const std::map<std::string, std::string> m = {
            {"grid.n", "--grid-n"},
            {"grid.box_l", "--box-l"},
            {"nu", "--nu"},
            {"renorm.omega_mode", "--omega-mode"},
            {"renorm.omega", "--omega"},
            {"renorm.r_mode", "--r-mode"},
            {"renorm.r", "--r"},
            {"forcing.kind", "--forcing-kind"},
            {"forcing.amplitude", "--forcing-amplitude"},
            {"forcing.seed", "--forcing-seed"},
            {"forcing.theta", "--forcing-theta"},
            {"forcing.t0", "--forcing-t0"},
            {"forcing.spectrum_decay", "--forcing-decay"},
            {"forcing.d", "--forcing-d"},
            {"estimator.samples", "--estimator-samples"},
            {"estimator.hill_climb_steps", "--hill-climb-steps"},
            {"estimator.seed", "--estimator-seed"},
            {"estimator.spectrum_decay", "--estimator-decay"},
            {"estimator.alpha1", "--alpha1"},
            {"estimator.alpha2", "--alpha2"},
            {"estimator.alpha3", "--alpha3"},
            {"audit.samples", "--audit-samples"},
            {"audit.seed", "--audit-seed"},
            {"audit.pairs", "--audit-pairs"},
            {"sim.dt", "--dt"},
            {"sim.t_end", "--t-end"},
            {"sim.sample_stride", "--sample-stride"},
            {"sim.seed", "--sim-seed"},
            {"sim.u0_scale", "--u0-scale"},
            {"sim.u0_norm_h1", "--u0-norm-h1"},
            {"sim.stokes_only", "--stokes-only"},
            {"sim.uncertified", "--uncertified"},
            {"sim.snapshot_stride", "--snapshot-stride"},
            {"sweep.mode", "--sweep-mode"},
            {"ou.degree_1d", "--ou-degree-1d"},
            {"ou.degree_3d", "--ou-degree-3d"},
            {"ou.gamma", "--ou-gamma"},
            {"ou.samples", "--ou-samples"},
            {"ou.seed", "--ou-seed"},
            {"ou.omega", "--ou-omega"},
            {"threads", "--threads"},
            {"out.dir", "--out"},
        };
        auto it = m.find(key);
        return it == m.end() ? std::string() : it->second;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral Galerkin Navier-Stokes engine with semigroup-renormed "
                 "dissipativity certificates"};
    app.require_subcommand(1);

    ConfigBinder certify_b, simulate_b, sweep_b, ou_b;
    std::string certificate_path, manifest_path, replay_out = "replay_out";

    CLI::App* certify = app.add_subcommand("certify", "estimate constants, build the "
                                                      "certificate, run all audits");
    certify_b.attach(certify);

    CLI::App* simulate = app.add_subcommand("simulate", "integrate the projected system and "
                                                        "monitor ball invariance");
    simulate_b.attach(simulate);
    simulate->add_option("--certificate", certificate_path,
                         "certificate.txt from a previous certify run");

    CLI::App* sweep = app.add_subcommand("sweep", "phase diagrams over nu or truncation size");
    sweep_b.attach(sweep);

    CLI::App* ou = app.add_subcommand("ou-validate", "Ornstein-Uhlenbeck renorming audits");
    ou_b.attach(ou);

    CLI::App* replay = app.add_subcommand("replay", "re-run a manifest and byte-compare outputs");
    replay->add_option("manifest", manifest_path, "manifest.txt to replay")->required();
    replay->add_option("--out", replay_out, "output directory for the replayed run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (certify->parsed()) return cmd_certify(certify_b.resolve(certify), std::cout);
        if (simulate->parsed())
            return cmd_simulate(simulate_b.resolve(simulate), certificate_path, std::cout);
        if (sweep->parsed()) return cmd_sweep(sweep_b.resolve(sweep), std::cout);
        if (ou->parsed()) return cmd_ou_validate(ou_b.resolve(ou), std::cout);
        if (replay->parsed()) return cmd_replay(manifest_path, replay_out, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
