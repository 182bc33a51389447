#pragma once

#include "nsrenorm/config.hpp"
#include "nsrenorm/evolution.hpp"
#include "nsrenorm/manifest.hpp"
#include "nsrenorm/ou.hpp"
#include "nsrenorm/sampling.hpp"

#include <iosfwd>

namespace nsrenorm {

/// Exit codes shared by the CLI and the command layer.
enum ExitCode {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInfeasible = 2,
    kExitAuditViolation = 3,
    kExitInvarianceViolation = 4,
};

/// Everything the spectral experiments share: lattice, spectrum, renorm
/// parameters (omega and r resolved from their modes) and the forcing.
struct StageSetup {
    LatticePtr lat;
    StokesSpectrum spec;
    RenormParams renorm;
    ForcingModel forcing = ForcingModel::zero(nullptr);
    double omega = 0.0;
    double r = 0.0;
    RMode r_mode = RMode::AutoRHat;
};

StageSetup build_stage(const RunConfig& cfg);

ConstantEstimate run_estimator(const RunConfig& cfg, const LatticePtr& lat);

/// Certificate without the audit battery (used by simulate and sweeps).
CertificateReport build_certificate_solo(const RunConfig& cfg, const StageSetup& stage,
                                         const ConstantEstimate& c);

struct PairAuditSummary {
    std::size_t pairs = 0;
    std::size_t violations = 0;
    double worst_excess = 0.0; // max over pairs of (lhs - bound)/dist2
};

struct CertifyOutcome {
    StageSetup stage;
    CertificateReport cert;
    int audit_rounds = 0;
    int audit_events = 0; // constant updates forced by violating samples
    AuditResult trilinear, preconditioned, renormed, bilinear_norm;
    std::size_t sphere_samples = 0;
    std::size_t sphere_violations = 0;
    double sphere_worst = 0.0; // max normalized <J(u),u>_{H,1} margin
    PairAuditSummary strong;
    PairAuditSummary aj;
    double holder_worst = 0.0;
    double holder_bound = 0.0;
    bool holder_ok = true;
    std::vector<std::uint64_t> replay_seeds;
    bool audits_ok = true;

    std::string audit_kv_block() const;
};

/// Full certify pipeline: estimate constants, build the certificate, run
/// every sampling audit with the self-consistency loop (a violating
/// sample raises c and the audits re-run on a fresh stream).
CertifyOutcome run_certify(const RunConfig& cfg);

int cmd_certify(const RunConfig& cfg, std::ostream& log);

struct SimulateOutcome {
    TrajectoryRecord record;
    bool certified = false;
    bool ran = false; // false: infeasible certificate stopped the run
    CertificateReport cert;
};

SimulateOutcome run_simulate(const RunConfig& cfg, const std::string& certificate_path);

int cmd_simulate(const RunConfig& cfg, const std::string& certificate_path, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_ou_validate(const RunConfig& cfg, std::ostream& log);
/// Re-runs the manifest's command from its embedded config into out_dir
/// and byte-compares outputs; exit 0 iff identical.
int cmd_replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& log);

/// Loads a certificate kv report back into a report (for simulate).
CertificateReport load_certificate_kv(const std::string& path);

} // namespace nsrenorm
