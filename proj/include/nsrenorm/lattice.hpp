#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace nsrenorm {

using Vec3 = std::array<double, 3>;
using Complex = std::complex<double>;
/// One Fourier coefficient of a vector field: three complex components.
using CVec3 = std::array<Complex, 3>;

/// Integer lattice index of a Fourier mode on the periodic box.
struct WaveVector {
    std::array<int, 3> k{0, 0, 0};

    bool operator==(const WaveVector& o) const { return k == o.k; }
    WaveVector negated() const { return WaveVector{{-k[0], -k[1], -k[2]}}; }
};

/// Truncated wavevector lattice for the torus of period L.
///
/// Modes satisfy |k_i| <= N/2 and k != 0 (zero-mean fields). Only a
/// half-lattice is stored; the conjugate mode is implicit, which makes
/// conjugate symmetry of real fields unbreakable by construction.
/// Canonical (stored) representatives have k3 > 0, or k3 = 0 and k2 > 0,
/// or k3 = k2 = 0 and k1 > 0.
class Lattice {
public:
    Lattice(int grid_n, double box_l);

    int grid_n() const { return grid_n_; }
    double box_l() const { return box_l_; }
    int kmax() const { return kmax_; }
    /// Physical volume |T^3_L| = L^3; carried by all inner products.
    double volume() const { return box_l_ * box_l_ * box_l_; }

    std::size_t mode_count() const { return modes_.size(); }
    const std::vector<WaveVector>& modes() const { return modes_; }

    const Vec3& kphys(std::size_t i) const { return kphys_[i]; }
    /// Stokes eigenvalue |kphys|^2 of mode i.
    double lambda(std::size_t i) const { return lambda_[i]; }
    double lambda_min() const { return lambda_min_; }
    double lambda_max() const { return lambda_max_; }

    static bool canonical(const WaveVector& w);
    bool in_box(const WaveVector& w) const;

    /// Index of the stored representative of w (w itself or -w).
    /// Returns (index, conjugated). index == npos when w is not on the
    /// truncation or w == 0.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::pair<std::size_t, bool> lookup(const WaveVector& w) const;

    /// Padded physical grid size used for alias-free quadratic products:
    /// the smallest 5-smooth integer M >= 3*kmax + 1.
    int dealias_grid() const { return dealias_grid_; }

    bool same_as(const Lattice& o) const {
        return grid_n_ == o.grid_n_ && box_l_ == o.box_l_;
    }

private:
    int grid_n_;
    double box_l_;
    int kmax_;
    int dealias_grid_;
    double lambda_min_ = 0.0, lambda_max_ = 0.0;
    std::vector<WaveVector> modes_;
    std::vector<Vec3> kphys_;
    std::vector<double> lambda_;
    std::vector<int> index_; // dense box lookup, -1 where absent
    std::size_t box_index(const WaveVector& w) const;
};

using LatticePtr = std::shared_ptr<const Lattice>;

/// Shared lattice factory (fields on the same grid share one instance).
LatticePtr make_lattice(int grid_n, double box_l);

} // namespace nsrenorm
