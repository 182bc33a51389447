#include "nsrenorm/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace nsrenorm {

namespace {

bool five_smooth(int m) {
    for (int p : {2, 3, 5})
        while (m % p == 0) m /= p;
    return m == 1;
}

int next_five_smooth(int m) {
    while (!five_smooth(m)) ++m;
    return m;
}

} // namespace

Lattice::Lattice(int grid_n, double box_l) : grid_n_(grid_n), box_l_(box_l) {
    if (grid_n < 2 || grid_n % 2 != 0)
        throw std::invalid_argument("lattice: grid_n must be even and >= 2");
    if (!(box_l > 0.0))
        throw std::invalid_argument("lattice: box_l must be positive");
    kmax_ = grid_n / 2;
    dealias_grid_ = next_five_smooth(3 * kmax_ + 1);

    const int b = 2 * kmax_ + 1;
    index_.assign(static_cast<std::size_t>(b) * b * b, -1);

    const double k0 = 2.0 * M_PI / box_l;
    // Deterministic storage order: canonical representatives by (k3, k2, k1).
    for (int k3 = 0; k3 <= kmax_; ++k3) {
        int k2lo = (k3 == 0) ? 0 : -kmax_;
        for (int k2 = k2lo; k2 <= kmax_; ++k2) {
            int k1lo = (k3 == 0 && k2 == 0) ? 1 : -kmax_;
            for (int k1 = k1lo; k1 <= kmax_; ++k1) {
                WaveVector w{{k1, k2, k3}};
                if (!canonical(w)) continue;
                index_[box_index(w)] = static_cast<int>(modes_.size());
                modes_.push_back(w);
                Vec3 kp{k0 * k1, k0 * k2, k0 * k3};
                kphys_.push_back(kp);
                lambda_.push_back(kp[0] * kp[0] + kp[1] * kp[1] + kp[2] * kp[2]);
            }
        }
    }
    lambda_min_ = lambda_[0];
    lambda_max_ = lambda_[0];
    for (double l : lambda_) {
        lambda_min_ = std::min(lambda_min_, l);
        lambda_max_ = std::max(lambda_max_, l);
    }
}

bool Lattice::canonical(const WaveVector& w) {
    const auto& k = w.k;
    if (k[2] != 0) return k[2] > 0;
    if (k[1] != 0) return k[1] > 0;
    return k[0] > 0;
}

bool Lattice::in_box(const WaveVector& w) const {
    for (int c = 0; c < 3; ++c)
        if (w.k[c] < -kmax_ || w.k[c] > kmax_) return false;
    return !(w.k[0] == 0 && w.k[1] == 0 && w.k[2] == 0);
}

std::size_t Lattice::box_index(const WaveVector& w) const {
    const int b = 2 * kmax_ + 1;
    std::size_t i0 = static_cast<std::size_t>(w.k[0] + kmax_);
    std::size_t i1 = static_cast<std::size_t>(w.k[1] + kmax_);
    std::size_t i2 = static_cast<std::size_t>(w.k[2] + kmax_);
    return (i2 * b + i1) * b + i0;
}

std::pair<std::size_t, bool> Lattice::lookup(const WaveVector& w) const {
    if (!in_box(w)) return {npos, false};
    if (canonical(w)) {
        int i = index_[box_index(w)];
        return {i < 0 ? npos : static_cast<std::size_t>(i), false};
    }
    int i = index_[box_index(w.negated())];
    return {i < 0 ? npos : static_cast<std::size_t>(i), true};
}

LatticePtr make_lattice(int grid_n, double box_l) {
    return std::make_shared<const Lattice>(grid_n, box_l);
}

} // namespace nsrenorm
