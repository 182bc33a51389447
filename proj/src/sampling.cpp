#include "nsrenorm/sampling.hpp"
#include "nsrenorm/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace nsrenorm {

VelocityField random_raw_field(const LatticePtr& lat, std::uint64_t seed, double spectrum_decay) {
    VelocityField f(lat);
    Rng rng(seed);
    for (std::size_t i = 0; i < f.mode_count(); ++i) {
        const WaveVector& w = lat->modes()[i];
        double kabs = std::sqrt(static_cast<double>(
            w.k[0] * w.k[0] + w.k[1] * w.k[1] + w.k[2] * w.k[2]));
        double amp = std::pow(kabs, -spectrum_decay);
        for (int c = 0; c < 3; ++c)
            f.coef(i)[c] = amp * Complex(rng.gaussian(), rng.gaussian());
    }
    return f;
}

VelocityField random_field(const LatticePtr& lat, double radius, NormKind kind,
                           std::uint64_t seed, double spectrum_decay,
                           const RenormParams* renorm) {
    if (!(radius > 0.0)) throw std::invalid_argument("random_field: radius must be positive");
    if (kind == NormKind::H1 && renorm == nullptr)
        throw std::invalid_argument("random_field: H1 normalization needs renorm parameters");

    VelocityField f = leray_project(random_raw_field(lat, seed, spectrum_decay));
    double n = 0.0;
    switch (kind) {
        case NormKind::H: n = norm_H(f); break;
        case NormKind::H1: n = norm_H1(*renorm, f); break;
        case NormKind::V: n = norm_V(f); break;
    }
    if (!(n > 0.0)) throw std::runtime_error("random_field: degenerate draw (zero norm)");
    f *= radius / n;
    return f;
}

} // namespace nsrenorm
