/// Diagonal operator calculus: powers of A, the semigroup, the renormed
/// inner product and the tight smoothing constants.
///
/// Oracles: on the torus with L = 2pi the eigenvalue of mode k is |k|^2,
/// so single-mode actions have closed forms; the r-hat fixed point has
/// the closed form log(lambda2/lambda1)/(lambda2-lambda1) = log 2.

#include "test_harness.hpp"

#include "nsrenorm/sampling.hpp"
#include "nsrenorm/stokes.hpp"

#include <cmath>

using namespace nsrenorm;
using harness::qoi;
using harness::record;
using harness::throws;

namespace {

const double kTwoPi = 2.0 * M_PI;

VelocityField single_mode(const LatticePtr& lat, WaveVector k, CVec3 v) {
    VelocityField f(lat);
    f.set(k, v);
    return f;
}

void test_powers() {
    auto lat = make_lattice(8, kTwoPi);

    VelocityField u = single_mode(lat, {{1, 0, 0}}, {Complex(0), Complex(1.0), Complex(0.5)});
    record("apply_A: |k|^2 = 1 mode unchanged", norm_H(apply_A(u) - u) == 0.0);

    VelocityField w = single_mode(lat, {{1, 2, 2}}, {Complex(2.0), Complex(-1.0), Complex(0)});
    double ratio = norm_H(apply_A(w)) / norm_H(w);
    record("apply_A: |k|^2 = 9 multiplier", std::abs(ratio - 9.0) < 1e-13,
           qoi(std::abs(ratio - 9.0), 1e-13));

    VelocityField r = random_field(lat, 1.0, NormKind::H, 5, 2.0);
    double inv = norm_H(apply_A_inverse(apply_A(r)) - r) / norm_H(r);
    record("A o A^{-1} = identity", inv < 1e-15, qoi(inv, 1e-15));

    double half =
        norm_H(apply_A_power(0.5, apply_A_power(0.5, r)) - apply_A(r)) / norm_H(apply_A(r));
    record("A^{1/2} twice = A", half < 1e-15, qoi(half, 1e-15));

    double neg = norm_H(apply_A_power(-0.5, apply_A_power(-0.5, r)) - apply_A_inverse(r)) /
                 norm_H(apply_A_inverse(r));
    record("A^{-1/2} twice = A^{-1} (negative powers)", neg < 1e-15, qoi(neg, 1e-15));
}

void test_semigroup() {
    auto lat = make_lattice(8, kTwoPi);
    VelocityField u = random_field(lat, 1.0, NormKind::H, 6, 2.0);

    record("T(0) = identity", norm_H(semigroup_T(0.0, u) - u) == 0.0);

    VelocityField e1 = single_mode(lat, {{1, 0, 0}}, {Complex(0), Complex(1.0), Complex(0)});
    double halved = norm_H(semigroup_T(std::log(2.0), e1)) / norm_H(e1);
    record("T(ln 2) halves the lambda = 1 mode", std::abs(halved - 0.5) < 1e-15,
           qoi(std::abs(halved - 0.5), 1e-15));

    double lhs = norm_H(semigroup_T(0.3, u));
    double bound = std::exp(-0.3 * lat->lambda_min()) * norm_H(u);
    record("||T(t)u|| <= e^{-lambda1 t}||u||", lhs <= bound * (1.0 + 1e-15), qoi(lhs / bound, 1.0));

    double worst_law = 0.0, worst_comm = 0.0;
    for (int s = 0; s < 16; ++s) {
        VelocityField x = random_field(lat, 1.0, NormKind::H, 60 + s, 2.0);
        VelocityField ab = semigroup_T(0.17, semigroup_T(0.05, x));
        VelocityField once = semigroup_T(0.22, x);
        worst_law = std::max(worst_law, norm_H(ab - once) / norm_H(once));
        VelocityField c1 = apply_A(semigroup_T(0.11, x));
        VelocityField c2 = semigroup_T(0.11, apply_A(x));
        worst_comm = std::max(worst_comm, norm_H(c1 - c2) / norm_H(c1));
    }
    record("semigroup law T(s)T(t) = T(s+t)", worst_law < 1e-13, qoi(worst_law, 1e-13));
    record("commutation A T(t) = T(t) A (roundoff level)", worst_comm < 1e-15,
           qoi(worst_comm, 1e-15));

    record("negative t rejected", throws([&] { (void)semigroup_T(-0.1, u); }));
}

void test_renorm() {
    auto lat = make_lattice(8, kTwoPi);
    auto spec = StokesSpectrum::from_lattice(*lat);
    RenormParams p = make_renorm_params(spec, spec.lambda1, 0.37);

    // field supported on the lambda1 eigenspace: exponent cancels exactly
    VelocityField e1(lat);
    e1.set(WaveVector{{1, 0, 0}}, CVec3{Complex(0), Complex(1.0), Complex(0)});
    e1.set(WaveVector{{0, 1, 0}}, CVec3{Complex(0.5), Complex(0), Complex(-0.5)});
    record("S(r) fixes the lambda1 eigenspace when omega = lambda1",
           norm_H(renorm_apply_S(p, e1) - e1) == 0.0);

    RenormParams p0 = make_renorm_params(spec, 0.0, 0.37);
    VelocityField x = random_field(lat, 1.0, NormKind::H, 7, 2.0);
    record("omega = 0 gives S(r) = T(r)",
           norm_H(renorm_apply_S(p0, x) - semigroup_T(0.37, x)) == 0.0);

    // norm equivalence with the exact truncation constant
    int viol = 0;
    for (int s = 0; s < 200; ++s) {
        VelocityField u = random_field(lat, 1.0, NormKind::H, 500 + s, 1.0 + 0.02 * s);
        double nh = norm_H(u);
        double ns = norm_H(renorm_apply_S(p, u));
        if (!(ns <= nh * (1.0 + 1e-14))) ++viol;
        if (!(static_cast<long double>(nh) <= p.M * ns * (1.0L + 1e-14L))) ++viol;
    }
    record("||S(r)u|| <= ||u|| <= M||S(r)u||, 200 samples", viol == 0,
           "(violations=" + std::to_string(viol) + ")");

    // A^{-1} contracts by lambda1^{-1} in the renormed norm
    int viol_inv = 0;
    for (int s = 0; s < 200; ++s) {
        VelocityField h = random_field(lat, 1.0, NormKind::H, 900 + s, 2.0);
        if (!(norm_H1(p, apply_A_inverse(h)) <= norm_H1(p, h) / spec.lambda1 * (1.0 + 1e-14)))
            ++viol_inv;
    }
    record("||A^{-1}h||_{H,1} <= lambda1^{-1}||h||_{H,1}", viol_inv == 0,
           "(violations=" + std::to_string(viol_inv) + ")");

    record("omega above lambda1 rejected",
           throws([&] { (void)make_renorm_params(spec, 2.0 * spec.lambda1, 0.1); }));
}

void test_inner_product_h1() {
    auto lat = make_lattice(8, kTwoPi);
    auto spec = StokesSpectrum::from_lattice(*lat);

    RenormParams p0 = make_renorm_params(spec, spec.lambda1, 0.0);
    VelocityField u = random_field(lat, 1.0, NormKind::H, 8, 2.0);
    VelocityField v = random_field(lat, 1.0, NormKind::H, 9, 2.0);
    record("r = 0: <u,v>_{H,1} equals <u,v>_H exactly",
           inner_product_H1(p0, u, v) == inner_product_H(u, v));

    RenormParams p = make_renorm_params(spec, spec.lambda1, 0.42);
    VelocityField w = single_mode(lat, {{1, 2, 2}}, {Complex(2.0), Complex(-1.0), Complex(0)});
    double expect = std::exp((p.omega - 9.0) * p.r);
    double got = norm_H1(p, w) / norm_H(w);
    record("single mode: ||u||_{H,1} = e^{(omega-lambda)r}||u||_H",
           std::abs(got - expect) < 1e-14 * expect, qoi(std::abs(got - expect) / expect, 1e-14));

    double worst = 0.0;
    for (int s = 0; s < 32; ++s) {
        VelocityField a = random_field(lat, 1.0, NormKind::H, 700 + s, 2.0);
        VelocityField b = random_field(lat, 1.0, NormKind::H, 800 + s, 2.0);
        double cs = std::abs(inner_product_H1(p, a, b)) / (norm_H1(p, a) * norm_H1(p, b));
        worst = std::max(worst, cs);
    }
    record("Cauchy-Schwarz in the renormed product", worst <= 1.0 + 1e-14, qoi(worst, 1.0));
}

void test_smoothing_constant() {
    // single-eigenvalue oracle: lambda = 1, omega = 1 makes the scan
    // multiplier lambda e^{(omega-lambda)r} = 1, so c_1 = r exactly
    auto spec1 = StokesSpectrum::from_values({1.0});
    RenormParams p1 = make_renorm_params(spec1, 1.0, 0.3);
    SmoothingConstant c1 = smoothing_constant(1.0, p1, spec1);
    record("singleton spectrum: c_1 = r", std::abs(static_cast<double>(c1.value) - 0.3) < 1e-16);
    long double composite = p1.M * c1.value / 0.3L;
    record("singleton spectrum: M c_1 / r = lambda^1",
           std::abs(static_cast<double>(composite) - 1.0) < 1e-15);

    auto lat = make_lattice(8, kTwoPi);
    auto spec = StokesSpectrum::from_lattice(*lat);
    for (double r : {0.2, 0.4}) {
        RenormParams p = make_renorm_params(spec, spec.lambda1, r);
        for (double z : {0.25, 0.5, 1.0}) {
            SmoothingConstant cz = smoothing_constant(z, p, spec);
            // semigroup-stage equality at the extremal eigenmode:
            // ||A^z T(r) e|| = e^{-omega r} (c_z / r^z) ||e||
            double lam = cz.extremal_lambda;
            double lhs = std::pow(lam, z) * std::exp(-lam * r);
            double rhs = std::exp(-p.omega * r) * static_cast<double>(cz.value) / std::pow(r, z);
            record("extremal equality z=" + std::to_string(z) + " r=" + std::to_string(r),
                   std::abs(lhs - rhs) < 1e-14 * rhs, qoi(std::abs(lhs - rhs) / rhs, 1e-14));

            int viol = 0;
            long double bound_factor = p.M * cz.value / std::pow(static_cast<long double>(r), z);
            for (int s = 0; s < 200; ++s) {
                VelocityField u = random_field(lat, 1.0, NormKind::H, 4000 + s, 2.0);
                long double lhs2 = norm_H1(p, apply_A_power(z, u));
                long double rhs2 = bound_factor * norm_H1(p, u);
                if (!(lhs2 <= rhs2 * (1.0L + 1e-12L))) ++viol;
            }
            record("||A^z u||_{H,1} <= (M c_z/r^z)||u||_{H,1} z=" + std::to_string(z), viol == 0,
                   "(violations=" + std::to_string(viol) + ")");
        }
    }

    RenormParams p = make_renorm_params(spec, spec.lambda1, 0.2);
    record("z <= 0 rejected", throws([&] { (void)smoothing_constant(0.0, p, spec); }));
}

void test_r_hat() {
    auto lat = make_lattice(16, kTwoPi);
    auto spec = StokesSpectrum::from_lattice(*lat);
    double rh = solve_r_hat(spec, spec.lambda1);
    record("r-hat closed form log 2 at L = 2pi", std::abs(rh - std::log(2.0)) < 1e-15,
           qoi(std::abs(rh - std::log(2.0)), 1e-15));

    RenormParams p = make_renorm_params(spec, spec.lambda1, rh);
    long double c2 = smoothing_constant(1.0, p, spec).value;
    record("fixed point: c_2(r-hat)/lambda1 = r-hat",
           std::abs(static_cast<double>(c2) / spec.lambda1 - rh) < 1e-14);

    auto spec8 = StokesSpectrum::from_lattice(*make_lattice(8, kTwoPi));
    RenormParams p8 = make_renorm_params(spec8, spec8.lambda1, solve_r_hat(spec8, spec8.lambda1));
    record("M(8) < M(16)", p8.M < p.M);
}

} // namespace

int main() {
    return harness::run("stokes semigroup", [] {
        test_powers();
        test_semigroup();
        test_renorm();
        test_inner_product_h1();
        test_smoothing_constant();
        test_r_hat();
    });
}
