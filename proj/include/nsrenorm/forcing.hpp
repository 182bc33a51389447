#pragma once

#include "nsrenorm/stokes.hpp"

#include <string>

namespace nsrenorm {

enum class ForcingKind { Zero, Steady, HolderFamily };

std::string to_string(ForcingKind k);
ForcingKind forcing_kind_from_string(const std::string& s);

/// Body-force model f(t) = phi(t) * profile with a divergence-free
/// profile. The Holder family uses phi(t) = min(1, |t - t0|^theta),
/// which is (1, theta)-Holder by construction, so the declared constant
/// d = ||profile||_{H,1} certifies ||f(t)-f(tau)||_{H,1} <= d |t-tau|^theta
/// without post-hoc measurement. Zero and steady forcing declare d = 0.
class ForcingModel {
public:
    /// Zero forcing on the given lattice.
    static ForcingModel zero(LatticePtr lat);
    /// profile is Leray-projected and rescaled to ||profile||_{H,1} = amplitude.
    static ForcingModel steady(VelocityField profile, double amplitude, const RenormParams& p);
    /// declared_d = 0 uses the tight construction constant (= amplitude);
    /// any larger declared value is also a valid Holder constant.
    static ForcingModel holder_family(VelocityField profile, double amplitude, double theta,
                                      double t0, const RenormParams& p, double declared_d = 0.0);

    ForcingKind kind() const { return kind_; }
    const VelocityField& profile() const { return profile_; }
    const LatticePtr& lattice_ptr() const { return lat_; }

    double phi(double t) const;
    /// P f(t); the profile is already divergence-free.
    VelocityField value(double t) const;
    /// Spectral coefficient view used by the time stepper (phi(t) * profile).
    void accumulate(double t, double weight, VelocityField& into) const;

    double f_sup() const { return f_sup_; } // sup_t ||P f(t)||_{H,1}
    double holder_d() const { return d_; }
    double holder_theta() const { return theta_; }
    bool declares_holder() const { return true; } // all built-in kinds declare (d, theta)

private:
    ForcingModel() = default;
    ForcingKind kind_ = ForcingKind::Zero;
    LatticePtr lat_;
    VelocityField profile_; // empty for zero forcing
    double f_sup_ = 0.0;
    double d_ = 0.0;
    double theta_ = 0.5;
    double t0_ = 0.0;
};

} // namespace nsrenorm
