#pragma once

#include "nsrenorm/field.hpp"

namespace nsrenorm {

/// Eigenvalue ladder of the Stokes operator A = -P(Laplacian) on the
/// truncation. On the torus A acts diagonally as |kphys|^2 on every
/// divergence-free mode, so the spectrum is exactly computable.
struct StokesSpectrum {
    std::vector<double> eigenvalues; // ascending, distinct
    double lambda1 = 0.0;
    double lambda_max = 0.0;

    static StokesSpectrum from_lattice(const Lattice& lat);
    /// Synthetic spectrum for oracle tests and closed-form checks.
    static StokesSpectrum from_values(std::vector<double> values);
};

/// Parameters of the equivalent norm ||u||_{H,1} = ||S(r)u||_H where
/// S(r) = e^{omega r} T(r) and T is the Stokes semigroup.
///
/// M = e^{(lambda_max - omega) r} is the exact norm-equivalence constant
/// on the truncation: ||S(r)u|| <= ||u|| <= M ||S(r)u||. It grows with
/// the truncation (see the m-scaling sweep), which is why it is stored
/// in extended precision.
struct RenormParams {
    double omega = 0.0; // decay rate; must satisfy omega <= lambda1
    double r = 0.0;     // renorming time, > 0 (r = 0 degenerates to the H norm)
    long double M = 1.0L;
};

/// Builds RenormParams with M computed exactly from the truncated spectrum.
RenormParams make_renorm_params(const StokesSpectrum& spec, double omega, double r);

/// Smallest fixed point of r = c_2(r)/lambda1 where c_2 is the tight z = 1
/// smoothing constant below. With omega = lambda1 this reduces to the
/// closed form log(lambda2/lambda1)/(lambda2 - lambda1).
double solve_r_hat(const StokesSpectrum& spec, double omega);

VelocityField apply_A(const VelocityField& u);
VelocityField apply_A_inverse(const VelocityField& u);
/// Per-mode lambda^z; negative z allowed since the spectrum is positive.
VelocityField apply_A_power(double z, const VelocityField& u);

/// T(t) = exp(-tA); throws for t < 0.
VelocityField semigroup_T(double t, const VelocityField& u);

/// S(r)u with S(r) = e^{omega r}T(r): per-mode factor e^{(omega-lambda)r}.
VelocityField renorm_apply_S(const RenormParams& p, const VelocityField& u);

/// <S(r)u, S(r)v>_H computed in one fused pass (no intermediate field).
double inner_product_H1(const RenormParams& p, const VelocityField& u, const VelocityField& v);
double norm_H1(const RenormParams& p, const VelocityField& u);

/// Tight analytic-smoothing constant of the truncated spectrum:
///   c_z = max_k (lambda_k r)^z e^{-(lambda_k - omega) r},
/// so that ||A^z T(r)u|| <= e^{-omega r} (c_z / r^z) ||u|| holds with
/// equality at the extremal eigenmode, and the renormed chain
/// ||A^z u||_{H,1} <= (M c_z / r^z) ||u||_{H,1} follows.
struct SmoothingConstant {
    long double value = 0.0L;
    double extremal_lambda = 0.0;
    std::size_t spectrum_index = 0;
};

SmoothingConstant smoothing_constant(double z, const RenormParams& p, const StokesSpectrum& spec);

} // namespace nsrenorm
