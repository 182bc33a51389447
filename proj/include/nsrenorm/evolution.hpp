#pragma once

#include "nsrenorm/certificate.hpp"

namespace nsrenorm {

struct StepOptions {
    bool stokes_only = false; // disable B (diagnostic / decay oracle)
    double cfl_guard = 1.0;   // advective guard: dt <= cfl_guard * dx / max|u|
};

/// Advective time-step ceiling (dealias-grid spacing over max pointwise
/// speed); +inf for fields with no advection (zero u or Stokes-only).
double advective_dt_limit(const VelocityField& u, TransformWorkspace& ws);

/// Default step: 0.25 * min(advective limit, 1/(nu lambda_max)).
double default_dt(const VelocityField& u0, double nu, TransformWorkspace& ws,
                  const StepOptions& opts);

/// One ETDRK2 step of du/dt = -nu A u - B(u,u) + P f(t). The stiff linear
/// part is integrated exactly per mode; phi-function weights carry the
/// nonlinear and forcing terms, so the nonlinear term is the only error
/// source. Throws when the advective guard is violated, naming the
/// admissible dt.
VelocityField step(const VelocityField& u, double t, double dt, double nu, const ForcingModel& f,
                   TransformWorkspace& ws, const StepOptions& opts = {});

struct TrajectoryRow {
    double t = 0.0;
    double norm_h = 0.0;
    double norm_h1 = 0.0;
    double norm_v = 0.0;
    double energy = 0.0; // 0.5 ||u||_H^2
    int in_b = -1;       // -1: no certificate; else 0/1
    double div_residual = 0.0;
    double dt_used = 0.0;
    double forcing_power = 0.0; // <P f(t), u>_H, for the energy identity
};

enum class Verdict { Invariant, Violation, NoClaim };
std::string to_string(Verdict v);

struct TrajectoryRecord {
    std::vector<TrajectoryRow> rows;
    Verdict verdict = Verdict::NoClaim;
    bool certified = false;
    double ball_radius = 0.0;
    double sup_norm_h1 = 0.0;
    double t_final = 0.0;
    std::vector<std::string> snapshot_files; // relative names, in write order

    static std::string csv_header();
    std::string to_csv() const;
};

struct SimulateOptions {
    double dt = 0.0;    // 0: default_dt
    double t_end = 0.0; // required > 0
    int sample_stride = 1;
    StepOptions step;
    double invariance_tol = 1e-6; // relative overshoot allowed before Violation
    int max_halvings = 20;
    int snapshot_stride = 0; // 0: no snapshots
    std::string snapshot_prefix;
};

/// Integrates to t_end, recording at the sampling stride. With a
/// feasible certificate the initial datum must lie in the certified set
/// (in_B, and the annulus when f_sup > 0); the run early-exits with a
/// Violation verdict if the renormed norm ever exceeds
/// u_plus/2 * (1 + invariance_tol). Violations are first-class results,
/// not assertion failures.
TrajectoryRecord simulate(const VelocityField& u0, double nu, const ForcingModel& f,
                          const RenormParams& renorm, const CertificateReport* cert,
                          const SimulateOptions& opts);

/// Max over interior rows of the energy-identity residual
/// |d/dt(0.5||u||_H^2) + nu ||u||_V^2 - <P f, u>_H| / (nu ||u||_V^2),
/// with d/dt by central differences. Throws when the record is too
/// sparse (< 3 rows).
double energy_balance_audit(const TrajectoryRecord& rec, double nu);

} // namespace nsrenorm
