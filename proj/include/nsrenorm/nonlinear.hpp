#pragma once

#include "nsrenorm/stokes.hpp"
#include "nsrenorm/transform.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace nsrenorm {

/// Exponent triple of the trilinear estimate
///   |<B(u,v), w>_H| <= c ||A^{a1/2}u|| ||A^{(1+a2)/2}v|| ||A^{a3/2}w||,
/// with the admissibility constraints of the C^k setting (k = 2 here).
struct TrilinearExponents {
    double alpha1 = 0.0;
    double alpha2 = 1.0;
    double alpha3 = 0.5;
    double k = 2.0;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// Empirical lower bound on a trilinear-form constant; the operational
/// value used downstream. Sample-certified, not proven.
struct ConstantEstimate {
    double value = 0.0;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    int hill_climb_steps = 0;
    std::string method = "random-scan"; // or "hill-climb"
    std::size_t attaining_sample = 0;   // replay descriptor
    int attaining_hill_step = -1;       // -1: plain scan sample
    std::string provenance = "sample-certified, not proven";
};

/// Projected advection B(u,v) = P[(u . grad) v], computed by alias-free
/// pseudo-spectral convolution on the padded grid (products are exact for
/// every retained mode, which restores the discrete skew symmetry
/// b(u,v,w) = -b(u,w,v) that the dissipativity algebra relies on).
VelocityField bilinear_B(const VelocityField& u, const VelocityField& v, TransformWorkspace& ws);
VelocityField bilinear_B(const VelocityField& u, const VelocityField& v);

/// b(u,v,w) = <B(u,v), w>_H evaluated as an exact physical-space integral
/// on the padded grid (no forward transforms).
double trilinear_b(const VelocityField& u, const VelocityField& v, const VelocityField& w,
                   TransformWorkspace& ws);
double trilinear_b(const VelocityField& u, const VelocityField& v, const VelocityField& w);

/// <B(u,v), w>_{H,1} = <S B(u,v), S w>_H.
double trilinear_b_renormed(const RenormParams& p, const VelocityField& u,
                            const VelocityField& v, const VelocityField& w,
                            TransformWorkspace& ws);

/// The Rayleigh-type ratio maximized by estimate_c. Returns 0 for
/// degenerate denominators.
double trilinear_ratio(const TrilinearExponents& e, const VelocityField& u,
                       const VelocityField& v, const VelocityField& w, TransformWorkspace& ws);

struct EstimateOptions {
    std::size_t n_samples = 400;
    std::uint64_t seed = 1;
    int hill_climb_steps = 200;
    double spectrum_decay = 2.0;
    int threads = 0; // 0 = hardware default (deterministic regardless)
};

/// Maximizes the trilinear ratio over random divergence-free triples plus
/// coordinate hill-climbing from the best sample. Deterministic per seed;
/// sample i draws from substream (seed, i), so a longer run extends a
/// shorter one and the running max is monotone in n_samples.
ConstantEstimate estimate_c(const LatticePtr& lat, const TrilinearExponents& e,
                            const EstimateOptions& opt);

/// One audited inequality: measured left side, certified bound, margin.
struct AuditSample {
    double lhs = 0.0;
    long double bound = 0.0L;
    std::uint64_t seed = 0;
    bool violated = false;
};

struct AuditResult {
    std::size_t samples = 0;
    std::size_t violations = 0;
    long double worst_margin = 0.0L; // max over samples of lhs - bound (negative = slack)
    std::vector<AuditSample> violating;
    /// Largest implied trilinear constant among violating samples; feeds
    /// the self-consistency update of c.
    double implied_c = 0.0;
};

/// Violation test used by every sampling audit: lhs > bound + abs + rel*bound.
bool audit_violates(double lhs, long double bound);

/// Fresh-sample audit of the plain trilinear bound with constant c.
AuditResult audit_trilinear_bound(const LatticePtr& lat, const TrilinearExponents& e, double c,
                                  std::size_t n_samples, std::uint64_t seed, double decay);

/// Audits of the renormed bounds:
///   |<A^{-1}B(u,v), w>_{H,1}| <= (M^3 c c1 / r^{1/4}) ||u|| ||w|| ||v||   (all H,1)
///   |<B(u,v), w>_{H,1}|      <= (M^4 c c1 c2 / r^{5/4}) ||u|| ||v|| ||w||
///   max(||B(u,v)||, ||B(v,u)||)_{H,1} <= (M^4 c c1 c2 / r^{5/4}) ||u|| ||v||
struct RenormedBoundConstants {
    double c = 0.0;
    long double c1 = 0.0L;
    long double c2 = 0.0L;
    RenormParams renorm;
};

AuditResult audit_preconditioned_bound(const LatticePtr& lat, const RenormedBoundConstants& k,
                                       std::size_t n_samples, std::uint64_t seed, double decay);
AuditResult audit_renormed_bound(const LatticePtr& lat, const RenormedBoundConstants& k,
                                 std::size_t n_samples, std::uint64_t seed, double decay);
AuditResult audit_bilinear_norm_bound(const LatticePtr& lat, const RenormedBoundConstants& k,
                                      std::size_t n_samples, std::uint64_t seed, double decay);

} // namespace nsrenorm
