#include "nsrenorm/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsrenorm {

StokesSpectrum StokesSpectrum::from_lattice(const Lattice& lat) {
    std::vector<double> vals(lat.mode_count());
    for (std::size_t i = 0; i < lat.mode_count(); ++i) vals[i] = lat.lambda(i);
    return from_values(std::move(vals));
}

StokesSpectrum StokesSpectrum::from_values(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("spectrum: empty eigenvalue list");
    std::sort(values.begin(), values.end());
    if (values.front() <= 0.0)
        throw std::invalid_argument("spectrum: eigenvalues must be strictly positive");
    std::vector<double> distinct;
    for (double v : values)
        if (distinct.empty() || v > distinct.back() * (1.0 + 1e-12)) distinct.push_back(v);
    StokesSpectrum s;
    s.eigenvalues = std::move(distinct);
    s.lambda1 = s.eigenvalues.front();
    s.lambda_max = s.eigenvalues.back();
    return s;
}

RenormParams make_renorm_params(const StokesSpectrum& spec, double omega, double r) {
    if (omega > spec.lambda1 * (1.0 + 1e-12))
        throw std::invalid_argument("renorm: omega must not exceed lambda1");
    if (r < 0.0) throw std::invalid_argument("renorm: r must be nonnegative");
    RenormParams p;
    p.omega = omega;
    p.r = r;
    p.M = std::exp(static_cast<long double>(spec.lambda_max - omega) * r);
    return p;
}

double solve_r_hat(const StokesSpectrum& spec, double omega) {
    const double l1 = spec.lambda1;
    if (spec.eigenvalues.size() == 1) {
        // Degenerate single-eigenvalue spectrum: every r is a fixed point
        // when omega = lambda1; return the natural time scale.
        return 1.0 / l1;
    }
    if (std::abs(omega - l1) <= 1e-14 * l1) {
        // lambda e^{-(lambda-l1)r} = l1 is first met by the smallest
        // eigenvalue above l1; the crossing time decreases in lambda.
        double l2 = spec.eigenvalues[1];
        return std::log(l2 / l1) / (l2 - l1);
    }
    auto g = [&](double r) {
        double m = 0.0;
        for (double l : spec.eigenvalues) m = std::max(m, l * std::exp(-(l - omega) * r));
        return m;
    };
    double lo = 0.0, hi = 1.0 / l1;
    while (g(hi) > l1) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) > l1) lo = mid; else hi = mid;
    }
    return hi;
}

VelocityField apply_A(const VelocityField& u) {
    return apply_diagonal(u, [](double l) { return l; });
}

VelocityField apply_A_inverse(const VelocityField& u) {
    return apply_diagonal(u, [](double l) { return 1.0 / l; });
}

VelocityField apply_A_power(double z, const VelocityField& u) {
    return apply_diagonal(u, [z](double l) { return std::pow(l, z); });
}

VelocityField semigroup_T(double t, const VelocityField& u) {
    if (t < 0.0) throw std::invalid_argument("semigroup_T: t must be nonnegative");
    return apply_diagonal(u, [t](double l) { return std::exp(-l * t); });
}

VelocityField renorm_apply_S(const RenormParams& p, const VelocityField& u) {
    const double w = p.omega, r = p.r;
    return apply_diagonal(u, [w, r](double l) { return std::exp((w - l) * r); });
}

double inner_product_H1(const RenormParams& p, const VelocityField& u, const VelocityField& v) {
    require_same_grid(u, v);
    const Lattice& lat = u.lattice();
    const double w = p.omega, r = p.r;
    double acc = 0.0;
    for (std::size_t i = 0; i < u.mode_count(); ++i) {
        const CVec3& a = u.coef(i);
        const CVec3& b = v.coef(i);
        double re = 0.0;
        for (int c = 0; c < 3; ++c)
            re += a[c].real() * b[c].real() + a[c].imag() * b[c].imag();
        double m = std::exp((w - lat.lambda(i)) * r);
        acc += m * m * re;
    }
    return 2.0 * lat.volume() * acc;
}

double norm_H1(const RenormParams& p, const VelocityField& u) {
    return std::sqrt(inner_product_H1(p, u, u));
}

SmoothingConstant smoothing_constant(double z, const RenormParams& p, const StokesSpectrum& spec) {
    if (!(z > 0.0)) throw std::invalid_argument("smoothing_constant: z must be positive");
    if (!(p.r > 0.0)) throw std::invalid_argument("smoothing_constant: r must be positive");
    SmoothingConstant best;
    best.value = -1.0L;
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
        const long double l = spec.eigenvalues[i];
        long double v = std::pow(static_cast<long double>(l) * p.r, static_cast<long double>(z)) *
                        std::exp(-(l - p.omega) * p.r);
        if (v > best.value) {
            best.value = v;
            best.extremal_lambda = spec.eigenvalues[i];
            best.spectrum_index = i;
        }
    }
    return best;
}

} // namespace nsrenorm
