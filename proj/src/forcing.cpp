#include "nsrenorm/forcing.hpp"

#include <cmath>
#include <stdexcept>

namespace nsrenorm {

std::string to_string(ForcingKind k) {
    switch (k) {
        case ForcingKind::Zero: return "zero";
        case ForcingKind::Steady: return "steady";
        case ForcingKind::HolderFamily: return "holder_family";
    }
    return "zero";
}

ForcingKind forcing_kind_from_string(const std::string& s) {
    if (s == "zero") return ForcingKind::Zero;
    if (s == "steady") return ForcingKind::Steady;
    if (s == "holder_family") return ForcingKind::HolderFamily;
    throw std::invalid_argument("forcing: unknown kind '" + s + "'");
}

ForcingModel ForcingModel::zero(LatticePtr lat) {
    ForcingModel f;
    f.kind_ = ForcingKind::Zero;
    f.lat_ = std::move(lat);
    f.f_sup_ = 0.0;
    f.d_ = 0.0;
    return f;
}

ForcingModel ForcingModel::steady(VelocityField profile, double amplitude,
                                  const RenormParams& p) {
    if (!(amplitude > 0.0)) throw std::invalid_argument("forcing: amplitude must be positive");
    ForcingModel f;
    f.kind_ = ForcingKind::Steady;
    f.lat_ = profile.lattice_ptr();
    f.profile_ = leray_project(profile);
    double n = norm_H1(p, f.profile_);
    if (!(n > 0.0)) throw std::invalid_argument("forcing: degenerate profile");
    f.profile_ *= amplitude / n;
    f.f_sup_ = amplitude;
    f.d_ = 0.0;
    return f;
}

ForcingModel ForcingModel::holder_family(VelocityField profile, double amplitude, double theta,
                                         double t0, const RenormParams& p, double declared_d) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("forcing: theta must lie in (0,1)");
    if (declared_d != 0.0 && declared_d < amplitude)
        throw std::invalid_argument("forcing: declared d below the construction constant");
    ForcingModel f = steady(std::move(profile), amplitude, p);
    f.kind_ = ForcingKind::HolderFamily;
    f.theta_ = theta;
    f.t0_ = t0;
    // |phi(t)-phi(tau)| <= |t-tau|^theta and sup phi = 1, so the tight
    // declared constant equals the profile's H,1 norm.
    f.d_ = declared_d == 0.0 ? amplitude : declared_d;
    return f;
}

double ForcingModel::phi(double t) const {
    switch (kind_) {
        case ForcingKind::Zero: return 0.0;
        case ForcingKind::Steady: return 1.0;
        case ForcingKind::HolderFamily:
            return std::min(1.0, std::pow(std::abs(t - t0_), theta_));
    }
    return 0.0;
}

VelocityField ForcingModel::value(double t) const {
    if (kind_ == ForcingKind::Zero) return VelocityField(lat_);
    VelocityField f = profile_;
    f *= phi(t);
    return f;
}

void ForcingModel::accumulate(double t, double weight, VelocityField& into) const {
    if (kind_ == ForcingKind::Zero) return;
    double s = weight * phi(t);
    for (std::size_t i = 0; i < into.mode_count(); ++i)
        for (int c = 0; c < 3; ++c) into.coef(i)[c] += s * profile_.coef(i)[c];
}

} // namespace nsrenorm
