#pragma once

#include "nsrenorm/forcing.hpp"
#include "nsrenorm/nonlinear.hpp"

#include <optional>
#include <string>

namespace nsrenorm {

enum class RMode { AutoRHat, Manual };

/// All scalar certificate quantities, with closed forms
///   delta  = nu r^{1/4} / (M^3 c c1)
///   gamma  = 4 M^3 f_sup c c1 / (nu^2 lambda1 r^{1/4})
///   u_pm   = delta/2 (1 +- sqrt(1-gamma))         (gamma <= 1)
///   alpha  = (1 - sqrt(1-gamma)) / 2
///   a      = nu lambda1 (1 - sqrt(1-gamma))
///   nu_min = sqrt(4 M^3 f_sup c c1 / (r^{1/4} lambda1))
/// evaluated in extended precision so boundary cases (gamma near 1) stay
/// clean. Feasibility demands gamma < 1 strictly; at gamma > 1 the roots
/// are absent, never clamped.
struct CertificateReport {
    // inputs / provenance
    int grid_n = 0;
    double box_l = 0.0;
    double lambda1 = 0.0;
    double lambda_max = 0.0;
    double omega = 0.0;
    RMode r_mode = RMode::AutoRHat;
    double r = 0.0;
    double r_hat = 0.0;
    long double M = 1.0L;
    ConstantEstimate c;      // empirical trilinear constant, Rayleigh scan
    long double c1 = 0.0L;   // z = 1/4 smoothing constant
    long double c2 = 0.0L;   // z = 1 smoothing constant
    long double c3 = 0.0L;   // z = 1 smoothing constant (continuity term)
    double nu = 0.0;
    double f_sup = 0.0;
    ForcingKind f_kind = ForcingKind::Zero;

    // derived
    long double delta = 0.0L;
    long double gamma = 0.0L;
    bool feasible = false;
    std::optional<long double> u_minus;
    std::optional<long double> u_plus;
    std::optional<long double> alpha;
    std::optional<long double> a;
    long double nu_min = 0.0L;

    /// Ball radius u_plus/2 as a double (the monitoring threshold).
    double ball_radius() const;
    /// Flat key=value block (human-readable report).
    std::string to_kv_block() const;
    /// Fixed-order CSV row; see csv_header().
    static std::string csv_header();
    std::string to_csv_row() const;
};

struct BallMembership {
    bool in_D_of_A = true; // finite ||Au|| always holds on the truncation
    bool in_B = false;     // ||u||_{H,1} <= u_plus/2
    bool in_annulus_B_minus = false; // u_minus <= ||u||_{H,1} <= u_plus/2
};

/// J(u,t) = -u - nu^{-1} A^{-1} B(u,u) + nu^{-1} A^{-1} P f(t).
VelocityField apply_J(const VelocityField& u, double t, double nu, const ForcingModel& f,
                      TransformWorkspace& ws);
VelocityField apply_J(const VelocityField& u, double t, double nu, const ForcingModel& f);

struct CertificateInputs {
    double nu = 0.0;
    RMode r_mode = RMode::AutoRHat;
    double manual_r = 0.0;
    double omega = 0.0;
    ConstantEstimate c;
};

/// Fills every report field from the closed forms. Throws only on
/// structural errors; gamma >= 1 yields feasible = false with roots
/// absent (gamma > 1) or the double root reported (gamma == 1).
CertificateReport build_certificate(const CertificateInputs& in, const ForcingModel& f,
                                    const StokesSpectrum& spec, const RenormParams& renorm);

/// Convenience: resolves r (auto r-hat or manual) and omega, then builds.
CertificateReport certify(double nu, RMode r_mode, double manual_r, double omega,
                          const ConstantEstimate& c, const ForcingModel& f,
                          const StokesSpectrum& spec, RenormParams& renorm_out);

/// <J(u,t), u>_{H,1}; nonpositive whenever u_minus <= ||u||_{H,1} <= u_plus.
double check_zero_dissipative(const VelocityField& u, double t, const CertificateReport& cert,
                              const ForcingModel& f, const RenormParams& renorm,
                              TransformWorkspace& ws);

struct DissipativityMargin {
    double lhs = 0.0;
    double bound = 0.0;
    double dist2 = 0.0; // ||u - v||^2_{H,1}, the audit tolerance scale
};

/// <J(u,t)-J(v,t), u-v>_{H,1} against -alpha ||u-v||^2_{H,1}; requires
/// both arguments inside the certified ball (the theorem's hypothesis).
DissipativityMargin check_strong_dissipative(const VelocityField& u, const VelocityField& v,
                                             double t, const CertificateReport& cert,
                                             const ForcingModel& f, const RenormParams& renorm,
                                             TransformWorkspace& ws);

/// <A(t)u - A(t)v, u-v>_{H,1} with A(t) = nu A J(.,t) against
/// -a ||u-v||^2_{H,1}. include_B = false isolates the linear part
/// (diagnostic mode: lhs = -nu ||A^{1/2}(u-v)||^2_{H,1} exactly).
DissipativityMargin check_AJ_dissipative(const VelocityField& u, const VelocityField& v, double t,
                                         const CertificateReport& cert, const ForcingModel& f,
                                         const RenormParams& renorm, TransformWorkspace& ws,
                                         bool include_B = true);

/// max over time pairs of ||J(u,t)-J(u,tau)||_{H,1} / |t-tau|^theta;
/// the certified ceiling is d / (nu lambda1).
double holder_audit(const VelocityField& u, const ForcingModel& f, double nu,
                    const std::vector<double>& times, const RenormParams& renorm,
                    TransformWorkspace& ws);

BallMembership membership(const VelocityField& u, const CertificateReport& cert,
                          const RenormParams& renorm);

} // namespace nsrenorm
