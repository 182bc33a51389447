#include "nsrenorm/commands.hpp"
#include "nsrenorm/rng.hpp"
#include "nsrenorm/textfmt.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

namespace nsrenorm {

namespace {

void parallel_for_indexed(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    unsigned t = threads > 0 ? static_cast<unsigned>(threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    t = std::min<std::size_t>(std::min(t, 8u), n);
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < t; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += t) fn(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace

StageSetup build_stage(const RunConfig& cfg) {
    StageSetup s;
    s.lat = make_lattice(cfg.grid_n, cfg.box_l);
    s.spec = StokesSpectrum::from_lattice(*s.lat);
    s.omega = cfg.renorm_omega_mode == "auto_lambda1" ? s.spec.lambda1 : cfg.renorm_omega;
    if (cfg.renorm_r_mode == "auto_r_hat") {
        s.r_mode = RMode::AutoRHat;
        s.r = solve_r_hat(s.spec, s.omega);
    } else if (cfg.renorm_r_mode == "manual") {
        s.r_mode = RMode::Manual;
        s.r = cfg.renorm_r;
    } else {
        throw std::invalid_argument("config: renorm.r_mode must be auto_r_hat or manual");
    }
    s.renorm = make_renorm_params(s.spec, s.omega, s.r);

    ForcingKind kind = forcing_kind_from_string(cfg.forcing_kind);
    switch (kind) {
        case ForcingKind::Zero:
            s.forcing = ForcingModel::zero(s.lat);
            break;
        case ForcingKind::Steady:
            s.forcing = ForcingModel::steady(
                random_raw_field(s.lat, cfg.forcing_seed, cfg.forcing_decay),
                cfg.forcing_amplitude, s.renorm);
            break;
        case ForcingKind::HolderFamily:
            s.forcing = ForcingModel::holder_family(
                random_raw_field(s.lat, cfg.forcing_seed, cfg.forcing_decay),
                cfg.forcing_amplitude, cfg.forcing_theta, cfg.forcing_t0, s.renorm,
                cfg.forcing_d);
            break;
    }
    return s;
}

ConstantEstimate run_estimator(const RunConfig& cfg, const LatticePtr& lat) {
    TrilinearExponents e;
    e.alpha1 = cfg.alpha1;
    e.alpha2 = cfg.alpha2;
    e.alpha3 = cfg.alpha3;
    EstimateOptions opt;
    opt.n_samples = cfg.estimator_samples;
    opt.seed = cfg.estimator_seed;
    opt.hill_climb_steps = cfg.estimator_hill_steps;
    opt.spectrum_decay = cfg.estimator_decay;
    opt.threads = cfg.threads;
    return estimate_c(lat, e, opt);
}

CertificateReport build_certificate_solo(const RunConfig& cfg, const StageSetup& stage,
                                         const ConstantEstimate& c) {
    CertificateInputs in;
    in.nu = cfg.nu;
    in.r_mode = stage.r_mode;
    in.manual_r = stage.r;
    in.omega = stage.omega;
    in.c = c;
    return build_certificate(in, stage.forcing, stage.spec, stage.renorm);
}

std::string CertifyOutcome::audit_kv_block() const {
    std::string s;
    auto put = [&s](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
    put("audit.rounds", std::to_string(audit_rounds));
    put("audit.events", std::to_string(audit_events));
    auto put_res = [&](const char* name, const AuditResult& r) {
        std::string p = std::string("audit.") + name;
        put(p + ".samples", std::to_string(r.samples));
        put(p + ".violations", std::to_string(r.violations));
        put(p + ".worst_margin", fmt_ld(r.worst_margin));
    };
    put_res("trilinear", trilinear);
    put_res("preconditioned", preconditioned);
    put_res("renormed", renormed);
    put_res("bilinear_norm", bilinear_norm);
    put("audit.zero_dissipative.samples", std::to_string(sphere_samples));
    put("audit.zero_dissipative.violations", std::to_string(sphere_violations));
    put("audit.zero_dissipative.worst_normalized_margin", fmt_d(sphere_worst));
    put("audit.strong.pairs", std::to_string(strong.pairs));
    put("audit.strong.violations", std::to_string(strong.violations));
    put("audit.strong.worst_excess", fmt_d(strong.worst_excess));
    put("audit.aj.pairs", std::to_string(aj.pairs));
    put("audit.aj.violations", std::to_string(aj.violations));
    put("audit.aj.worst_excess", fmt_d(aj.worst_excess));
    put("audit.holder.worst_ratio", fmt_d(holder_worst));
    put("audit.holder.bound", fmt_d(holder_bound));
    put("audit.holder.ok", holder_ok ? "1" : "0");
    put("audit.ok", audits_ok ? "1" : "0");
    std::string seeds;
    for (auto v : replay_seeds) seeds += (seeds.empty() ? "" : ",") + std::to_string(v);
    put("audit.replay_seeds", seeds);
    return s;
}

CertifyOutcome run_certify(const RunConfig& cfg) {
    CertifyOutcome out;
    out.stage = build_stage(cfg);
    const StageSetup& st = out.stage;
    ConstantEstimate c = run_estimator(cfg, st.lat);

    TrilinearExponents e;
    e.alpha1 = cfg.alpha1;
    e.alpha2 = cfg.alpha2;
    e.alpha3 = cfg.alpha3;

    constexpr int kMaxRounds = 3;
    for (int round = 0; round < kMaxRounds; ++round) {
        out.audit_rounds = round + 1;
        out.cert = build_certificate_solo(cfg, st, c);

        RenormedBoundConstants k;
        k.c = c.value;
        k.c1 = out.cert.c1;
        k.c2 = out.cert.c2;
        k.renorm = st.renorm;

        std::uint64_t seed = cfg.audit_seed + static_cast<std::uint64_t>(round);
        out.trilinear = audit_trilinear_bound(st.lat, e, c.value, cfg.audit_samples, seed,
                                        cfg.audit_decay);
        out.preconditioned = audit_preconditioned_bound(st.lat, k, cfg.audit_samples, seed, cfg.audit_decay);
        out.renormed = audit_renormed_bound(st.lat, k, cfg.audit_samples, seed, cfg.audit_decay);
        out.bilinear_norm = audit_bilinear_norm_bound(st.lat, k, cfg.audit_samples, seed, cfg.audit_decay);

        std::size_t viol = out.trilinear.violations + out.preconditioned.violations + out.renormed.violations +
                           out.bilinear_norm.violations;
        if (viol == 0) break;

        out.audit_events += static_cast<int>(viol);
        double implied = std::max(std::max(out.trilinear.implied_c, out.preconditioned.implied_c),
                                  std::max(out.renormed.implied_c, out.bilinear_norm.implied_c));
        for (const auto* res : {&out.trilinear, &out.preconditioned, &out.renormed, &out.bilinear_norm})
            for (const auto& v : res->violating) out.replay_seeds.push_back(v.seed);
        // Fold the violating samples into the running max; keep a strict
        // increase so the same samples cannot re-trip on the next round.
        c.value = std::max(c.value * (1.0 + 1e-12), implied);
        c.provenance = "sample-certified, not proven; raised by audit round " +
                       std::to_string(round + 1);
    }

    // Dissipativity audits need the ball, hence a feasible certificate.
    if (out.cert.feasible) {
        const double ball = out.cert.ball_radius();
        auto ws = workspace_pool().acquire(st.lat);
        out.sphere_samples = cfg.audit_pairs;
        out.sphere_worst = -1e300;
        for (std::size_t i = 0; i < cfg.audit_pairs; ++i) {
            VelocityField u = random_field(st.lat, ball, NormKind::H1,
                                           substream_seed(cfg.audit_seed, 50, i), cfg.audit_decay,
                                           &st.renorm);
            double margin = check_zero_dissipative(u, 0.0, out.cert, st.forcing, st.renorm, *ws);
            double scale = ball * ball;
            out.sphere_worst = std::max(out.sphere_worst, margin / scale);
            if (margin > 1e-12 + 1e-10 * scale) ++out.sphere_violations;
        }

        auto pair_audit = [&](std::uint64_t su, std::uint64_t sv, std::uint64_t sr, bool use_aj) {
            PairAuditSummary sum;
            sum.pairs = cfg.audit_pairs;
            sum.worst_excess = -1e300;
            for (std::size_t i = 0; i < cfg.audit_pairs; ++i) {
                Rng rad(substream_seed(cfg.audit_seed, sr, i));
                double ru = ball * (0.05 + 0.95 * rad.uniform());
                double rv = ball * (0.05 + 0.95 * rad.uniform());
                VelocityField u = random_field(st.lat, ru, NormKind::H1,
                                               substream_seed(cfg.audit_seed, su, i),
                                               cfg.audit_decay, &st.renorm);
                VelocityField v = random_field(st.lat, rv, NormKind::H1,
                                               substream_seed(cfg.audit_seed, sv, i),
                                               cfg.audit_decay, &st.renorm);
                DissipativityMargin m =
                    use_aj ? check_AJ_dissipative(u, v, 0.0, out.cert, st.forcing, st.renorm, *ws)
                           : check_strong_dissipative(u, v, 0.0, out.cert, st.forcing, st.renorm,
                                                      *ws);
                double excess = (m.lhs - m.bound) / m.dist2;
                sum.worst_excess = std::max(sum.worst_excess, excess);
                if (m.lhs > m.bound + 1e-10 * m.dist2) ++sum.violations;
            }
            return sum;
        };
        out.strong = pair_audit(60, 61, 62, false);
        out.aj = pair_audit(70, 71, 72, true);

        VelocityField uh = random_field(st.lat, ball, NormKind::H1,
                                        substream_seed(cfg.audit_seed, 80, 0), cfg.audit_decay,
                                        &st.renorm);
        std::vector<double> times;
        double t0 = st.forcing.kind() == ForcingKind::HolderFamily ? cfg.forcing_t0 : 0.0;
        for (double dt : {0.0, 0.001, 0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0})
            times.push_back(t0 + dt);
        out.holder_worst = holder_audit(uh, st.forcing, cfg.nu, times, st.renorm, *ws);
        out.holder_bound = st.forcing.holder_d() / (cfg.nu * st.spec.lambda1);
        out.holder_ok = out.holder_worst <= out.holder_bound * (1.0 + 1e-8) + 1e-300;
    }

    std::size_t eq_viol = out.trilinear.violations + out.preconditioned.violations + out.renormed.violations +
                          out.bilinear_norm.violations;
    out.audits_ok = eq_viol == 0 && out.audit_events == 0 && out.sphere_violations == 0 &&
                    out.strong.violations == 0 && out.aj.violations == 0 && out.holder_ok;
    return out;
}

int cmd_certify(const RunConfig& cfg, std::ostream& log) {
    CertifyOutcome out = run_certify(cfg);

    OutputWriter w(cfg.out_dir);
    std::string csv = "# schema certificate " + std::to_string(kCertificateSchema) + "\n" +
                      CertificateReport::csv_header() + "\n" + out.cert.to_csv_row() + "\n";
    w.write("certificate.csv", csv);
    w.write("certificate.txt", out.cert.to_kv_block() + out.audit_kv_block());
    w.finalize_manifest("certify", cfg);

    log << "certificate: feasible=" << (out.cert.feasible ? 1 : 0)
        << " gamma=" << fmt_ld(out.cert.gamma) << " nu_min=" << fmt_ld(out.cert.nu_min) << "\n";
    if (out.cert.u_plus)
        log << "ball radius u_plus/2 = " << fmt_d(out.cert.ball_radius()) << "\n";
    log << "audits: rounds=" << out.audit_rounds << " events=" << out.audit_events
        << " ok=" << (out.audits_ok ? 1 : 0) << "\n";
    if (!out.replay_seeds.empty()) {
        log << "replay seeds:";
        for (auto s : out.replay_seeds) log << " " << s;
        log << "\n";
    }

    if (!out.cert.feasible) {
        log << "infeasible: nu=" << fmt_d(cfg.nu) << " <= nu_min=" << fmt_ld(out.cert.nu_min)
            << "\n";
        return kExitInfeasible;
    }
    return out.audits_ok ? kExitOk : kExitAuditViolation;
}

CertificateReport load_certificate_kv(const std::string& path) {
    KeyValueFile kv = KeyValueFile::load(path);
    CertificateReport c;
    c.grid_n = std::stoi(kv.get("grid_n"));
    c.box_l = std::strtod(kv.get("box_l").c_str(), nullptr);
    c.lambda1 = std::strtod(kv.get("lambda1").c_str(), nullptr);
    c.lambda_max = std::strtod(kv.get("lambda_max").c_str(), nullptr);
    c.omega = std::strtod(kv.get("omega").c_str(), nullptr);
    c.r_mode = kv.get("r_mode") == "manual" ? RMode::Manual : RMode::AutoRHat;
    c.r = std::strtod(kv.get("r").c_str(), nullptr);
    c.r_hat = std::strtod(kv.get("r_hat").c_str(), nullptr);
    c.M = std::strtold(kv.get("M").c_str(), nullptr);
    c.c.value = std::strtod(kv.get("c").c_str(), nullptr);
    c.c.method = kv.get_or("c.method", "random-scan");
    c.c.seed = std::stoull(kv.get_or("c.seed", "0"));
    c.c.samples = std::stoull(kv.get_or("c.samples", "0"));
    c.c1 = std::strtold(kv.get("c1").c_str(), nullptr);
    c.c2 = std::strtold(kv.get("c2").c_str(), nullptr);
    c.c3 = std::strtold(kv.get("c3").c_str(), nullptr);
    c.nu = std::strtod(kv.get("nu").c_str(), nullptr);
    c.f_kind = forcing_kind_from_string(kv.get("f_kind"));
    c.f_sup = std::strtod(kv.get("f_sup").c_str(), nullptr);
    c.delta = std::strtold(kv.get("delta").c_str(), nullptr);
    c.gamma = std::strtold(kv.get("gamma").c_str(), nullptr);
    c.feasible = kv.get("feasible") == "1";
    if (kv.has("u_minus")) c.u_minus = std::strtold(kv.get("u_minus").c_str(), nullptr);
    if (kv.has("u_plus")) c.u_plus = std::strtold(kv.get("u_plus").c_str(), nullptr);
    if (kv.has("alpha")) c.alpha = std::strtold(kv.get("alpha").c_str(), nullptr);
    if (kv.has("a")) c.a = std::strtold(kv.get("a").c_str(), nullptr);
    c.nu_min = std::strtold(kv.get("nu_min").c_str(), nullptr);
    return c;
}

SimulateOutcome run_simulate(const RunConfig& cfg, const std::string& certificate_path) {
    StageSetup st = build_stage(cfg);
    SimulateOutcome out;

    if (!cfg.sim_uncertified) {
        if (!certificate_path.empty()) {
            out.cert = load_certificate_kv(certificate_path);
            if (out.cert.grid_n != cfg.grid_n || out.cert.box_l != cfg.box_l)
                throw std::invalid_argument("simulate: certificate grid does not match config");
            if (out.cert.nu != cfg.nu)
                throw std::invalid_argument("simulate: certificate nu does not match config");
        } else {
            ConstantEstimate c = run_estimator(cfg, st.lat);
            out.cert = build_certificate_solo(cfg, st, c);
        }
        out.certified = out.cert.feasible;
        if (!out.cert.feasible) return out; // caller reports nu_min, exit 2
    }

    SimulateOptions opts;
    opts.dt = cfg.sim_dt;
    opts.t_end = cfg.sim_t_end > 0.0 ? cfg.sim_t_end : 50.0 / (cfg.nu * st.spec.lambda1);
    opts.sample_stride = cfg.sim_sample_stride;
    opts.step.stokes_only = cfg.sim_stokes_only;
    opts.snapshot_stride = cfg.sim_snapshot_stride;
    opts.snapshot_prefix = cfg.out_dir + "/";
    if (cfg.sim_snapshot_stride > 0) std::filesystem::create_directories(cfg.out_dir);

    VelocityField u0;
    if (out.certified) {
        double radius = out.cert.ball_radius() * cfg.sim_u0_scale;
        u0 = random_field(st.lat, radius, NormKind::H1, cfg.sim_seed, cfg.sim_u0_decay,
                          &st.renorm);
        out.record = simulate(u0, cfg.nu, st.forcing, st.renorm, &out.cert, opts);
    } else {
        u0 = random_field(st.lat, cfg.sim_u0_norm_h1, NormKind::H1, cfg.sim_seed,
                          cfg.sim_u0_decay, &st.renorm);
        out.record = simulate(u0, cfg.nu, st.forcing, st.renorm, nullptr, opts);
    }
    out.ran = true;
    return out;
}

int cmd_simulate(const RunConfig& cfg, const std::string& certificate_path, std::ostream& log) {
    SimulateOutcome out;
    try {
        out = run_simulate(cfg, certificate_path);
    } catch (const std::runtime_error& err) {
        log << "refused: " << err.what() << "\n";
        return kExitUsage;
    }
    if (!out.ran) {
        log << "infeasible certificate: nu=" << fmt_d(cfg.nu)
            << " <= nu_min=" << fmt_ld(out.cert.nu_min)
            << " (pass --uncertified to run without a claim)\n";
        return kExitInfeasible;
    }

    OutputWriter w(cfg.out_dir);
    w.write("trajectory.csv", out.record.to_csv());
    for (const auto& name : out.record.snapshot_files) w.add_existing(name);
    w.finalize_manifest("simulate", cfg);

    log << "verdict " << to_string(out.record.verdict)
        << " sup_norm_H1=" << fmt_d(out.record.sup_norm_h1);
    if (out.certified) log << " ball=" << fmt_d(out.record.ball_radius);
    log << " t_final=" << fmt_d(out.record.t_final) << "\n";

    return out.record.verdict == Verdict::Violation ? kExitInvarianceViolation : kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    std::string csv = "# schema sweep " + std::to_string(kSweepSchema) + "\n";
    if (cfg.sweep_mode == "m-scaling") {
        if (cfg.sweep_n.empty()) {
            log << "usage: m-scaling sweep needs a nonempty sweep.n grid\n";
            return kExitUsage;
        }
        csv += "n,lambda1,lambda_max,omega,r,M,log10_M,status\n";
        std::vector<std::string> rows(cfg.sweep_n.size());
        parallel_for_indexed(cfg.sweep_n.size(), cfg.threads, [&](std::size_t i) {
            try {
                auto lat = make_lattice(cfg.sweep_n[i], cfg.box_l);
                auto spec = StokesSpectrum::from_lattice(*lat);
                double omega =
                    cfg.renorm_omega_mode == "auto_lambda1" ? spec.lambda1 : cfg.renorm_omega;
                double r = cfg.renorm_r_mode == "auto_r_hat" ? solve_r_hat(spec, omega)
                                                             : cfg.renorm_r;
                RenormParams p = make_renorm_params(spec, omega, r);
                rows[i] = std::to_string(cfg.sweep_n[i]) + "," + fmt_d(spec.lambda1) + "," +
                          fmt_d(spec.lambda_max) + "," + fmt_d(omega) + "," + fmt_d(r) + "," +
                          fmt_ld(p.M) + "," + fmt_ld(std::log10(p.M)) + ",ok";
            } catch (const std::exception& err) {
                rows[i] = std::to_string(cfg.sweep_n[i]) + ",,,,,,," + std::string("error:") +
                          err.what();
            }
        });
        for (const auto& r : rows) csv += r + "\n";
    } else if (cfg.sweep_mode == "nu") {
        if (cfg.sweep_nu.empty()) {
            log << "usage: nu sweep needs a nonempty sweep.nu grid\n";
            return kExitUsage;
        }
        StageSetup st = build_stage(cfg);
        ConstantEstimate c = run_estimator(cfg, st.lat);
        csv += "nu,gamma,feasible,u_minus,u_plus,alpha,a,nu_min,status\n";
        std::vector<std::string> rows(cfg.sweep_nu.size());
        parallel_for_indexed(cfg.sweep_nu.size(), cfg.threads, [&](std::size_t i) {
            try {
                RunConfig cell = cfg;
                cell.nu = cfg.sweep_nu[i];
                CertificateReport rep = build_certificate_solo(cell, st, c);
                auto opt = [](const std::optional<long double>& v) {
                    return v ? fmt_ld(*v) : std::string();
                };
                rows[i] = fmt_d(cell.nu) + "," + fmt_ld(rep.gamma) + "," +
                          (rep.feasible ? "1" : "0") + "," + opt(rep.u_minus) + "," +
                          opt(rep.u_plus) + "," + opt(rep.alpha) + "," + opt(rep.a) + "," +
                          fmt_ld(rep.nu_min) + "," + (rep.feasible ? "ok" : "infeasible");
            } catch (const std::exception& err) {
                rows[i] = fmt_d(cfg.sweep_nu[i]) + ",,,,,,,," + std::string("error:") + err.what();
            }
        });
        for (const auto& r : rows) csv += r + "\n";
    } else {
        log << "usage: sweep.mode must be nu or m-scaling\n";
        return kExitUsage;
    }

    OutputWriter w(cfg.out_dir);
    w.write("sweep.csv", csv);
    w.finalize_manifest("sweep", cfg);
    log << "sweep written: " << cfg.out_dir << "/sweep.csv\n";
    return kExitOk;
}

int cmd_ou_validate(const RunConfig& cfg, std::ostream& log) {
    OuAuditResult a3 = ou_renorm_bound_audit(cfg.ou_gamma, cfg.ou_samples, cfg.ou_seed,
                                             cfg.ou_degree_3d, cfg.ou_omega);

    // Single-mode diagonal ratios are exactly |n|; the scan bound must
    // dominate the largest one.
    double bound_1d;
    {
        double cmax = 0.0;
        for (int m = 0; m <= cfg.ou_degree_1d; ++m)
            cmax = std::max(cmax, m * std::exp(-(m - cfg.ou_omega) * cfg.ou_gamma));
        bound_1d = std::exp((cfg.ou_degree_1d - cfg.ou_omega) * cfg.ou_gamma) * cmax;
    }

    // T(t)1 = 1 on the constant expansion.
    HermiteFunctionExpansion one(cfg.ou_degree_3d);
    one.set_coef(0, 0, 0, 1.0);
    HermiteFunctionExpansion tone = ou_semigroup(0.7, one);
    double t1_resid = 0.0;
    for (std::size_t i = 0; i < tone.size(); ++i)
        t1_resid = std::max(t1_resid, std::abs(tone.raw()[i] - one.raw()[i]));

    // Semigroup law on a random expansion.
    HermiteFunctionExpansion w = random_expansion(cfg.ou_degree_3d, cfg.ou_seed + 1);
    HermiteFunctionExpansion lhs = ou_semigroup(0.3, ou_semigroup(0.45, w));
    HermiteFunctionExpansion rhs = ou_semigroup(0.75, w);
    double law_resid = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        law_resid = std::max(law_resid, std::abs(lhs.raw()[i] - rhs.raw()[i]));

    std::string csv = "# schema ou " + std::to_string(kOuSchema) + "\n";
    csv += "key,value\n";
    auto put = [&csv](const std::string& k, const std::string& v) { csv += k + "," + v + "\n"; };
    put("ou.gamma", fmt_d(cfg.ou_gamma));
    put("ou.omega", fmt_d(cfg.ou_omega));
    put("ou.degree_3d", std::to_string(cfg.ou_degree_3d));
    put("ou.degree_1d", std::to_string(cfg.ou_degree_1d));
    put("ou.samples", std::to_string(a3.samples));
    put("ou.skipped", std::to_string(a3.skipped));
    put("ou.violations", std::to_string(a3.violations));
    put("ou.worst_ratio", fmt_d(a3.worst_ratio));
    put("ou.bound", fmt_d(a3.bound));
    put("ou.M", fmt_d(a3.m_constant));
    put("ou.c", fmt_d(a3.c_constant));
    put("ou.single_mode_max_ratio", fmt_d(static_cast<double>(cfg.ou_degree_1d)));
    put("ou.single_mode_bound", fmt_d(bound_1d));
    put("ou.t_identity_residual", fmt_d(t1_resid));
    put("ou.semigroup_law_residual", fmt_d(law_resid));

    OutputWriter w2(cfg.out_dir);
    w2.write("ou_audit.csv", csv);
    w2.finalize_manifest("ou-validate", cfg);

    bool ok = a3.violations == 0 && t1_resid == 0.0 && law_resid < 1e-13 &&
              cfg.ou_degree_1d <= bound_1d;
    log << "ou audit: violations=" << a3.violations << " worst=" << fmt_d(a3.worst_ratio)
        << " bound=" << fmt_d(a3.bound) << "\n";
    return ok ? kExitOk : kExitAuditViolation;
}

int cmd_replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& log) {
    RunManifest m = RunManifest::parse_file(manifest_path);
    RunConfig cfg = RunConfig::from_kv(m.config);
    cfg.out_dir = out_dir;

    std::ostringstream devnull;
    if (m.command == "certify") {
        cmd_certify(cfg, devnull);
    } else if (m.command == "simulate") {
        cmd_simulate(cfg, "", devnull);
    } else if (m.command == "sweep") {
        cmd_sweep(cfg, devnull);
    } else if (m.command == "ou-validate") {
        cmd_ou_validate(cfg, devnull);
    } else {
        log << "replay: unknown command '" << m.command << "'\n";
        return kExitUsage;
    }

    RunManifest fresh = RunManifest::parse_file(out_dir + "/manifest.txt");
    bool all_ok = fresh.outputs.size() == m.outputs.size();
    for (std::size_t i = 0; i < m.outputs.size() && i < fresh.outputs.size(); ++i) {
        bool ok = fresh.outputs[i] == m.outputs[i];
        log << (ok ? "REPLAY-OK   " : "REPLAY-DIFF ") << m.outputs[i].first << "\n";
        all_ok = all_ok && ok;
    }
    return all_ok ? kExitOk : kExitAuditViolation;
}

} // namespace nsrenorm
