#include "nsrenorm/evolution.hpp"
#include "nsrenorm/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace nsrenorm {

namespace {

std::string fmt_d(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2, stable near 0.
double phi1(double z) {
    if (std::abs(z) < 1e-5) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 1e-5) return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
    return (std::expm1(z) - z) / (z * z);
}

// N(u,t) = -B(u,u) + P f(t), the non-stiff part of the right-hand side.
VelocityField nonstiff_rhs(const VelocityField& u, double t, const ForcingModel& f,
                           TransformWorkspace& ws, const StepOptions& opts) {
    VelocityField n(u.lattice_ptr());
    if (!opts.stokes_only) {
        n = bilinear_B(u, u, ws);
        n *= -1.0;
    }
    f.accumulate(t, 1.0, n);
    return n;
}

} // namespace

double advective_dt_limit(const VelocityField& u, TransformWorkspace& ws) {
    const std::size_t n = ws.real_size();
    for (int c = 0; c < 3; ++c) ws.to_physical(u, c, c);
    double umax2 = 0.0;
    const double* u0 = ws.real_buffer(0);
    const double* u1 = ws.real_buffer(1);
    const double* u2 = ws.real_buffer(2);
    for (std::size_t x = 0; x < n; ++x) {
        double s = u0[x] * u0[x] + u1[x] * u1[x] + u2[x] * u2[x];
        if (s > umax2) umax2 = s;
    }
    double umax = std::sqrt(umax2);
    if (umax == 0.0) return std::numeric_limits<double>::infinity();
    double dx = u.lattice().box_l() / ws.grid();
    return dx / umax;
}

double default_dt(const VelocityField& u0, double nu, TransformWorkspace& ws,
                  const StepOptions& opts) {
    double lam_max = u0.lattice().lambda_max();
    double lin = 1.0 / (nu * lam_max);
    double adv = opts.stokes_only ? std::numeric_limits<double>::infinity()
                                  : advective_dt_limit(u0, ws);
    return 0.25 * std::min(lin, adv);
}

VelocityField step(const VelocityField& u, double t, double dt, double nu, const ForcingModel& f,
                   TransformWorkspace& ws, const StepOptions& opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    if (!(nu > 0.0)) throw std::invalid_argument("step: nu must be positive");
    if (!opts.stokes_only) {
        double lim = opts.cfl_guard * advective_dt_limit(u, ws);
        if (dt > lim)
            throw std::invalid_argument("step: dt exceeds the advective limit; admissible dt <= " +
                                        fmt_d(lim));
    }

    const Lattice& lat = u.lattice();
    VelocityField n1 = nonstiff_rhs(u, t, f, ws, opts);

    VelocityField a(u.lattice_ptr());
    for (std::size_t i = 0; i < u.mode_count(); ++i) {
        double z = -nu * lat.lambda(i) * dt;
        double e = std::exp(z);
        double w1 = dt * phi1(z);
        for (int c = 0; c < 3; ++c) a.coef(i)[c] = e * u.coef(i)[c] + w1 * n1.coef(i)[c];
    }

    VelocityField n2 = nonstiff_rhs(a, t + dt, f, ws, opts);
    for (std::size_t i = 0; i < u.mode_count(); ++i) {
        double z = -nu * lat.lambda(i) * dt;
        double w2 = dt * phi2(z);
        for (int c = 0; c < 3; ++c) a.coef(i)[c] += w2 * (n2.coef(i)[c] - n1.coef(i)[c]);
    }
    return a;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Invariant: return "INVARIANT";
        case Verdict::Violation: return "VIOLATION";
        case Verdict::NoClaim: return "NO-CLAIM";
    }
    return "NO-CLAIM";
}

std::string TrajectoryRecord::csv_header() {
    return "t,norm_H,norm_H1,norm_V,energy,in_B,div_residual,dt,forcing_power";
}

std::string TrajectoryRecord::to_csv() const {
    std::string s = "# schema trajectory 1\n";
    s += csv_header() + "\n";
    for (const auto& r : rows) {
        s += fmt_d(r.t) + "," + fmt_d(r.norm_h) + "," + fmt_d(r.norm_h1) + "," +
             fmt_d(r.norm_v) + "," + fmt_d(r.energy) + "," + std::to_string(r.in_b) + "," +
             fmt_d(r.div_residual) + "," + fmt_d(r.dt_used) + "," + fmt_d(r.forcing_power) + "\n";
    }
    return s;
}

namespace {

TrajectoryRow make_row(const VelocityField& u, double t, double dt_used, const ForcingModel& f,
                       const RenormParams& renorm, const CertificateReport* cert) {
    TrajectoryRow row;
    row.t = t;
    row.norm_h = norm_H(u);
    row.norm_h1 = norm_H1(renorm, u);
    row.norm_v = norm_V(u);
    row.energy = 0.5 * row.norm_h * row.norm_h;
    row.div_residual = divergence_residual(u);
    row.dt_used = dt_used;
    row.forcing_power = f.kind() == ForcingKind::Zero ? 0.0 : inner_product_H(f.value(t), u);
    if (cert && cert->feasible)
        row.in_b = row.norm_h1 <= cert->ball_radius() ? 1 : 0;
    return row;
}

} // namespace

TrajectoryRecord simulate(const VelocityField& u0, double nu, const ForcingModel& f,
                          const RenormParams& renorm, const CertificateReport* cert,
                          const SimulateOptions& opts) {
    if (!(opts.t_end > 0.0)) throw std::invalid_argument("simulate: t_end must be positive");
    if (opts.sample_stride < 1) throw std::invalid_argument("simulate: sample_stride must be >= 1");

    auto ws = workspace_pool().acquire(u0.lattice_ptr());

    TrajectoryRecord rec;
    rec.certified = cert != nullptr && cert->feasible;
    if (rec.certified) {
        rec.ball_radius = cert->ball_radius();
        BallMembership m = membership(u0, *cert, renorm);
        if (!m.in_B)
            throw std::runtime_error("simulate: initial datum outside the certified ball; "
                                     "||u0||_{H,1} = " + fmt_d(norm_H1(renorm, u0)) +
                                     " > u_plus/2 = " + fmt_d(cert->ball_radius()));
        if (cert->f_sup > 0.0 && !m.in_annulus_B_minus)
            throw std::runtime_error("simulate: forced run requires u_minus <= ||u0||_{H,1}; "
                                     "measured " + fmt_d(norm_H1(renorm, u0)));
    }

    double dt = opts.dt > 0.0 ? opts.dt : default_dt(u0, nu, *ws, opts.step);
    VelocityField u = u0;
    double t = 0.0;

    TrajectoryRow row0 = make_row(u, t, dt, f, renorm, cert);
    rec.rows.push_back(row0);
    rec.sup_norm_h1 = row0.norm_h1;

    const double limit = rec.certified
                             ? rec.ball_radius * (1.0 + opts.invariance_tol)
                             : std::numeric_limits<double>::infinity();

    long long n_steps = static_cast<long long>(std::ceil(opts.t_end / dt - 1e-12));
    bool violated = false;
    int snap_index = 0;
    for (long long s = 0; s < n_steps && !violated; ++s) {
        double h = std::min(dt, opts.t_end - t);
        if (h <= 0.0) break;
        // adaptive halving on advective-guard trips
        int pieces = 1;
        double hh = h;
        for (int halved = 0; halved < opts.max_halvings; ++halved) {
            if (opts.step.stokes_only) break;
            if (hh <= opts.step.cfl_guard * advective_dt_limit(u, *ws)) break;
            hh *= 0.5;
            pieces *= 2;
        }
        for (int p = 0; p < pieces; ++p) {
            u = step(u, t, hh, nu, f, *ws, opts.step);
            t += hh;
        }

        bool sampled = ((s + 1) % opts.sample_stride == 0) || (s + 1 == n_steps);
        double nh1 = norm_H1(renorm, u);
        rec.sup_norm_h1 = std::max(rec.sup_norm_h1, nh1);
        if (nh1 > limit) violated = true;
        if (sampled || violated) rec.rows.push_back(make_row(u, t, hh, f, renorm, cert));
        if (opts.snapshot_stride > 0 && (s + 1) % opts.snapshot_stride == 0) {
            std::string name = "snapshot_" + std::to_string(snap_index++) + ".fld";
            save_field(u, opts.snapshot_prefix + name);
            rec.snapshot_files.push_back(name);
        }
    }

    rec.t_final = t;
    if (rec.certified)
        rec.verdict = violated ? Verdict::Violation : Verdict::Invariant;
    else
        rec.verdict = Verdict::NoClaim;
    return rec;
}

double energy_balance_audit(const TrajectoryRecord& rec, double nu) {
    if (rec.rows.size() < 3)
        throw std::invalid_argument("energy_balance_audit: record too sparse (need >= 3 rows)");
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < rec.rows.size(); ++i) {
        const auto& a = rec.rows[i - 1];
        const auto& b = rec.rows[i];
        const auto& c = rec.rows[i + 1];
        double dt = c.t - a.t;
        if (dt <= 0.0) continue;
        double dedt = (c.energy - a.energy) / dt;
        double dissipation = nu * b.norm_v * b.norm_v;
        double residual = std::abs(dedt + dissipation - b.forcing_power);
        if (dissipation > 0.0) worst = std::max(worst, residual / dissipation);
    }
    return worst;
}

} // namespace nsrenorm
