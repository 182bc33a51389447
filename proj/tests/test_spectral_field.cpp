/// Leray projection, inner products, sampling and snapshot round-trips.
///
/// Hand-derived oracles:
///   - leray of (1,1,0) at k=(1,0,0): P = I - kk^T/|k|^2 = diag(0,1,1),
///     so the projection is (0,1,0).
///   - Parseval on one conjugate pair of amplitude vector a:
///     <u,u> = L^3 * 2|a|^2.

#include "test_harness.hpp"

#include "nsrenorm/field.hpp"
#include "nsrenorm/field_io.hpp"
#include "nsrenorm/sampling.hpp"

#include <cmath>
#include <filesystem>

using namespace nsrenorm;
using harness::qoi;
using harness::record;
using harness::throws;

namespace {

const double kTwoPi = 2.0 * M_PI;

void test_leray() {
    auto lat = make_lattice(8, kTwoPi);

    // pure gradient mode: u parallel to k projects to zero
    VelocityField g(lat);
    g.set(WaveVector{{0, 0, 1}}, CVec3{Complex(0), Complex(0), Complex(2.0, 1.0)});
    VelocityField pg = leray_project(g);
    record("leray: gradient mode projects to zero", norm_H(pg) < 1e-14,
           qoi(norm_H(pg), 1e-14));

    // transverse mode unchanged
    VelocityField tr(lat);
    tr.set(WaveVector{{1, 0, 0}}, CVec3{Complex(0), Complex(3.0, -1.0), Complex(0)});
    VelocityField ptr_ = leray_project(tr);
    double diff = norm_H(ptr_ - tr);
    record("leray: transverse mode unchanged", diff < 1e-14 * norm_H(tr),
           qoi(diff, 1e-14));

    // hand-applied projector
    VelocityField h(lat);
    h.set(WaveVector{{1, 0, 0}}, CVec3{Complex(1.0), Complex(1.0), Complex(0)});
    VelocityField ph = leray_project(h);
    CVec3 got = ph.at(WaveVector{{1, 0, 0}});
    bool ok = std::abs(got[0]) < 1e-15 && std::abs(got[1] - Complex(1.0)) < 1e-15 &&
              std::abs(got[2]) < 1e-15;
    record("leray: (1,1,0) at k=(1,0,0) -> (0,1,0)", ok);

    // idempotence and projection orthogonality on random fields
    double worst_idem = 0.0, worst_orth = 0.0, worst_div = 0.0;
    for (int s = 0; s < 32; ++s) {
        VelocityField f = random_raw_field(lat, 1000 + s, 2.0);
        VelocityField p1 = leray_project(f);
        VelocityField p2 = leray_project(p1);
        worst_idem = std::max(worst_idem, norm_H(p2 - p1) / norm_H(p1));
        worst_div = std::max(worst_div, divergence_residual(p1));
        VelocityField g2 = random_field(lat, 1.0, NormKind::H, 2000 + s, 2.0);
        double ip_f = inner_product_H(f, g2);
        double ip_p = inner_product_H(p1, g2);
        worst_orth = std::max(worst_orth, std::abs(ip_f - ip_p) / std::abs(ip_f));
    }
    record("leray: idempotent on random fields", worst_idem < 1e-13, qoi(worst_idem, 1e-13));
    record("leray: output divergence residual", worst_div < 1e-12, qoi(worst_div, 1e-12));
    record("leray: <Pf,g> = <f,g> for div-free g", worst_orth < 1e-12, qoi(worst_orth, 1e-12));

    // structural error on grid mismatch
    auto lat2 = make_lattice(16, kTwoPi);
    VelocityField a(lat), b(lat2);
    record("grid mismatch raises", throws([&] { (void)inner_product_H(a, b); }));
    record("FieldPair enforces a shared grid", throws([&] { FieldPair p(a, b); }));
    FieldPair same(a, VelocityField(lat));
    record("FieldPair accepts matching grids", same.u.lattice().same_as(same.v.lattice()));
}

void test_inner_products() {
    auto lat = make_lattice(8, kTwoPi);
    const double vol = lat->volume();

    VelocityField u(lat);
    u.set(WaveVector{{1, 0, 0}}, CVec3{Complex(0), Complex(0.7, 0.4), Complex(0)});
    double a2 = 0.7 * 0.7 + 0.4 * 0.4;
    double expect = vol * 2.0 * a2;
    double got = inner_product_H(u, u);
    record("parseval: single conjugate pair", std::abs(got - expect) < 1e-13 * expect,
           qoi(std::abs(got - expect) / expect, 1e-13));

    VelocityField v(lat);
    v.set(WaveVector{{0, 1, 0}}, CVec3{Complex(1.0), Complex(0), Complex(0)});
    record("orthogonality: disjoint supports", inner_product_H(u, v) == 0.0);

    double worst = 0.0;
    for (int s = 0; s < 16; ++s) {
        VelocityField x = random_field(lat, 1.0, NormKind::H, 31 + s, 2.0);
        VelocityField y = random_field(lat, 2.0, NormKind::H, 97 + s, 2.0);
        worst = std::max(worst, std::abs(inner_product_H(x, y) - inner_product_H(y, x)));
    }
    record("symmetry on random fields", worst < 1e-14, qoi(worst, 1e-14));
}

void test_norm_V() {
    auto lat = make_lattice(8, kTwoPi);

    VelocityField u(lat);
    u.set(WaveVector{{1, 0, 0}}, CVec3{Complex(0), Complex(1.5), Complex(0)});
    record("norm_V: lambda = 1 mode equals norm_H",
           std::abs(norm_V(u) - norm_H(u)) < 1e-14 * norm_H(u));

    VelocityField w(lat);
    // k = (1,2,2): |k|^2 = 9, and u must be orthogonal to k
    w.set(WaveVector{{1, 2, 2}}, CVec3{Complex(2.0), Complex(-1.0), Complex(0)});
    double ratio = norm_V(w) / norm_H(w);
    record("norm_V: k=(1,2,2) gives 3x norm_H", std::abs(ratio - 3.0) < 1e-13,
           qoi(std::abs(ratio - 3.0), 1e-13));

    VelocityField z(lat);
    record("norm_V: zero field", norm_V(z) == 0.0);
}

void test_random_field() {
    auto lat = make_lattice(8, kTwoPi);

    VelocityField a = random_field(lat, 2.5, NormKind::H, 42, 2.0);
    VelocityField b = random_field(lat, 2.5, NormKind::H, 42, 2.0);
    record("determinism: same seed, same field", norm_H(a - b) == 0.0);

    record("post-projection divergence residual", divergence_residual(a) < 1e-12,
           qoi(divergence_residual(a), 1e-12));
    record("H norm equals radius", std::abs(norm_H(a) - 2.5) < 1e-12 * 2.5,
           qoi(std::abs(norm_H(a) - 2.5) / 2.5, 1e-12));

    VelocityField v = random_field(lat, 0.25, NormKind::V, 43, 2.0);
    record("V norm equals radius", std::abs(norm_V(v) - 0.25) < 1e-12 * 0.25);

    record("radius <= 0 rejected",
           throws([&] { (void)random_field(lat, 0.0, NormKind::H, 1, 2.0); }));
}

void test_snapshot_io() {
    auto lat = make_lattice(8, kTwoPi);
    VelocityField f = random_field(lat, 1.0, NormKind::H, 7, 2.0);

    std::string path = std::filesystem::temp_directory_path() / "nsrenorm_field_test.fld";
    save_field(f, path);
    VelocityField g = load_field(path);

    bool bits_equal = f.mode_count() == g.mode_count();
    for (std::size_t i = 0; bits_equal && i < f.mode_count(); ++i)
        for (int c = 0; c < 3; ++c)
            if (f.coef(i)[c] != g.coef(i)[c]) bits_equal = false;
    record("snapshot: bit-exact coefficient round-trip", bits_equal);

    std::string once = field_to_string(f);
    std::string twice = field_to_string(g);
    record("snapshot: byte-identical rewrite", once == twice);
    std::filesystem::remove(path);
}

} // namespace

int main() {
    return harness::run("spectral field", [] {
        test_leray();
        test_inner_products();
        test_norm_V();
        test_random_field();
        test_snapshot_io();
    });
}
