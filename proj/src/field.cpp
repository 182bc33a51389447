#include "nsrenorm/field.hpp"

#include <cmath>
#include <stdexcept>

namespace nsrenorm {

void require_same_grid(const VelocityField& a, const VelocityField& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("field: uninitialized field");
    if (!a.lattice().same_as(b.lattice()))
        throw std::invalid_argument("field: grid metadata mismatch (grid_n or box_l differ)");
}

FieldPair::FieldPair(VelocityField a, VelocityField b) : u(std::move(a)), v(std::move(b)) {
    require_same_grid(u, v);
}

CVec3 VelocityField::at(const WaveVector& w) const {
    auto [i, conj] = lat_->lookup(w);
    if (i == Lattice::npos) return CVec3{};
    if (!conj) return coef_[i];
    return CVec3{std::conj(coef_[i][0]), std::conj(coef_[i][1]), std::conj(coef_[i][2])};
}

void VelocityField::set(const WaveVector& w, const CVec3& v) {
    auto [i, conj] = lat_->lookup(w);
    if (i == Lattice::npos)
        throw std::invalid_argument("field: wavevector outside truncation (or zero mode)");
    if (!conj) {
        coef_[i] = v;
    } else {
        coef_[i] = CVec3{std::conj(v[0]), std::conj(v[1]), std::conj(v[2])};
    }
}

VelocityField& VelocityField::operator+=(const VelocityField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < coef_.size(); ++i)
        for (int c = 0; c < 3; ++c) coef_[i][c] += o.coef_[i][c];
    return *this;
}

VelocityField& VelocityField::operator-=(const VelocityField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < coef_.size(); ++i)
        for (int c = 0; c < 3; ++c) coef_[i][c] -= o.coef_[i][c];
    return *this;
}

VelocityField& VelocityField::operator*=(double s) {
    for (auto& v : coef_)
        for (int c = 0; c < 3; ++c) v[c] *= s;
    return *this;
}

VelocityField operator+(VelocityField a, const VelocityField& b) { a += b; return a; }
VelocityField operator-(VelocityField a, const VelocityField& b) { a -= b; return a; }
VelocityField operator*(double s, VelocityField a) { a *= s; return a; }

VelocityField leray_project(const VelocityField& f) {
    if (f.empty()) throw std::invalid_argument("leray_project: uninitialized field");
    VelocityField out = f;
    const Lattice& lat = f.lattice();
    for (std::size_t i = 0; i < out.mode_count(); ++i) {
        const Vec3& kp = lat.kphys(i);
        const double k2 = lat.lambda(i);
        CVec3& v = out.coef(i);
        Complex kd = kp[0] * v[0] + kp[1] * v[1] + kp[2] * v[2];
        Complex s = kd / k2;
        for (int c = 0; c < 3; ++c) v[c] -= kp[c] * s;
    }
    return out;
}

double inner_product_H(const VelocityField& u, const VelocityField& v) {
    require_same_grid(u, v);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.mode_count(); ++i) {
        const CVec3& a = u.coef(i);
        const CVec3& b = v.coef(i);
        double re = 0.0;
        for (int c = 0; c < 3; ++c)
            re += a[c].real() * b[c].real() + a[c].imag() * b[c].imag();
        acc += re;
    }
    return 2.0 * u.lattice().volume() * acc;
}

double norm_H(const VelocityField& u) { return std::sqrt(inner_product_H(u, u)); }

double norm_V(const VelocityField& u) {
    if (u.empty()) throw std::invalid_argument("norm_V: uninitialized field");
    const Lattice& lat = u.lattice();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.mode_count(); ++i) {
        const CVec3& a = u.coef(i);
        double m2 = 0.0;
        for (int c = 0; c < 3; ++c) m2 += std::norm(a[c]);
        acc += lat.lambda(i) * m2;
    }
    return std::sqrt(2.0 * lat.volume() * acc);
}

double divergence_residual(const VelocityField& u) {
    if (u.empty()) throw std::invalid_argument("divergence_residual: uninitialized field");
    const Lattice& lat = u.lattice();
    double max_div = 0.0, max_amp = 0.0;
    for (std::size_t i = 0; i < u.mode_count(); ++i) {
        const Vec3& kp = lat.kphys(i);
        const CVec3& v = u.coef(i);
        Complex kd = kp[0] * v[0] + kp[1] * v[1] + kp[2] * v[2];
        max_div = std::max(max_div, std::abs(kd));
        double amp = 0.0;
        for (int c = 0; c < 3; ++c) amp += std::norm(v[c]);
        max_amp = std::max(max_amp, std::sqrt(amp));
    }
    if (max_amp == 0.0) return 0.0;
    return max_div / max_amp;
}

} // namespace nsrenorm
