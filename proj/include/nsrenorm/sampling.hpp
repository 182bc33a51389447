#pragma once

#include "nsrenorm/stokes.hpp"

#include <cstdint>

namespace nsrenorm {

enum class NormKind { H, H1, V };

/// Draws a divergence-free Gaussian field with spectral decay
/// |u(k)| ~ |k|^{-spectrum_decay}, Leray-projects it and rescales so the
/// requested norm equals radius exactly. Deterministic per seed.
/// NormKind::H1 requires the renorm parameters that define the norm.
VelocityField random_field(const LatticePtr& lat, double radius, NormKind kind,
                           std::uint64_t seed, double spectrum_decay,
                           const RenormParams* renorm = nullptr);

/// Raw conjugate-symmetric Gaussian field (no projection, no rescale);
/// feeds leray_project tests and forcing-profile construction.
VelocityField random_raw_field(const LatticePtr& lat, std::uint64_t seed, double spectrum_decay);

} // namespace nsrenorm
