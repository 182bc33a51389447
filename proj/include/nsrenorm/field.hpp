#pragma once

#include "nsrenorm/lattice.hpp"

#include <functional>

namespace nsrenorm {

/// Divergence-free, zero-mean vector field stored as complex Fourier
/// coefficients on the half-lattice (conjugate modes implicit).
///
/// Invariants maintained by every operation in this library and audited
/// by the test suites:
///   - kphys . u(k) = 0 for every stored mode (relative tol 1e-12)
///   - no k = 0 mode (zero mean, by storage layout)
///   - u(-k) = conj(u(k)) (by half-lattice storage)
///
/// The same container also carries raw conjugate-symmetric fields on
/// their way into leray_project (forcing profiles, test inputs); those
/// are the only places a non-solenoidal instance may appear.
class VelocityField {
public:
    VelocityField() = default;
    explicit VelocityField(LatticePtr lat)
        : lat_(std::move(lat)), coef_(lat_->mode_count(), CVec3{}) {}
    VelocityField(LatticePtr lat, std::vector<CVec3> coef)
        : lat_(std::move(lat)), coef_(std::move(coef)) {}

    const Lattice& lattice() const { return *lat_; }
    const LatticePtr& lattice_ptr() const { return lat_; }
    std::size_t mode_count() const { return coef_.size(); }

    const CVec3& coef(std::size_t i) const { return coef_[i]; }
    CVec3& coef(std::size_t i) { return coef_[i]; }
    const std::vector<CVec3>& coeffs() const { return coef_; }

    /// Coefficient at an arbitrary lattice point (conjugate expanded).
    CVec3 at(const WaveVector& w) const;
    void set(const WaveVector& w, const CVec3& v);

    bool empty() const { return coef_.empty(); }

    VelocityField& operator+=(const VelocityField& o);
    VelocityField& operator-=(const VelocityField& o);
    VelocityField& operator*=(double s);

private:
    LatticePtr lat_;
    std::vector<CVec3> coef_;
};

/// Bundles two fields that must live on the same grid.
struct FieldPair {
    VelocityField u;
    VelocityField v;
    FieldPair(VelocityField a, VelocityField b);
};

/// Throws std::invalid_argument when the two fields disagree on (N, L).
void require_same_grid(const VelocityField& a, const VelocityField& b);

VelocityField operator+(VelocityField a, const VelocityField& b);
VelocityField operator-(VelocityField a, const VelocityField& b);
VelocityField operator*(double s, VelocityField a);

/// Per-mode orthogonal projection onto divergence-free fields:
/// u(k) <- (I - kk^T/|k|^2) u(k). Idempotent; the k = 0 mode never exists
/// in this storage, so the zero-mean part of the projection is implicit.
VelocityField leray_project(const VelocityField& f);

/// L^2(T^3_L) inner product via Parseval: L^3 * sum over the full lattice
/// of Re<u(k), v(k)>; conjugate pairs contribute twice their real part.
double inner_product_H(const VelocityField& u, const VelocityField& v);
double norm_H(const VelocityField& u);

/// ||A^{1/2} u||_H realized spectrally: sqrt(L^3 sum lambda_k |u(k)|^2).
double norm_V(const VelocityField& u);

/// max_k |kphys . u(k)| / max_k |u(k)|; 0 for the zero field.
double divergence_residual(const VelocityField& u);

/// Applies a per-mode scalar multiplier m(lambda_k) to every coefficient.
/// Diagonal operator calculus (powers of A, semigroups, renormings) is
/// built on this single fused pass.
template <class F>
VelocityField apply_diagonal(const VelocityField& u, F&& multiplier) {
    VelocityField out = u;
    const Lattice& lat = u.lattice();
    for (std::size_t i = 0; i < out.mode_count(); ++i) {
        double m = multiplier(lat.lambda(i));
        for (int c = 0; c < 3; ++c) out.coef(i)[c] *= m;
    }
    return out;
}

} // namespace nsrenorm
