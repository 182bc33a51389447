#include "nsrenorm/nonlinear.hpp"
#include "nsrenorm/rng.hpp"
#include "nsrenorm/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace nsrenorm {

namespace {

constexpr double kAuditAbsTol = 1e-12;
constexpr double kAuditRelTol = 1e-10;

double norm_A_power(double z, const VelocityField& f) {
    if (z == 0.0) return norm_H(f);
    const Lattice& lat = f.lattice();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.mode_count(); ++i) {
        double m2 = 0.0;
        for (int c = 0; c < 3; ++c) m2 += std::norm(f.coef(i)[c]);
        acc += std::pow(lat.lambda(i), 2.0 * z) * m2;
    }
    return std::sqrt(2.0 * lat.volume() * acc);
}

/// S(r)^2 A^{-1} w and S(r)^2 w, used to map renormed-bound samples back
/// to plain trilinear triples when updating the constant c.
VelocityField apply_S2(const RenormParams& p, const VelocityField& w, double apow) {
    const double om = p.omega, r = p.r;
    return apply_diagonal(w, [om, r, apow](double l) {
        return std::exp(2.0 * (om - l) * r) * std::pow(l, apow);
    });
}

} // namespace

void TrilinearExponents::validate() const {
    auto fail = [](const std::string& what) {
        throw std::invalid_argument("trilinear exponents: " + what);
    };
    if (alpha1 < 0.0 || alpha1 > k) fail("alpha1 must satisfy 0 <= alpha1 <= k");
    if (alpha2 < 0.0 || alpha2 > k - 1.0) fail("alpha2 must satisfy 0 <= alpha2 <= k-1");
    if (alpha3 < 0.0 || alpha3 > k) fail("alpha3 must satisfy 0 <= alpha3 <= k");
    if (alpha1 + alpha2 + alpha3 < 1.5) fail("alpha1+alpha2+alpha3 must be >= 3/2");
    auto is = [](double a, double b) { return std::abs(a - b) < 1e-14; };
    if ((is(alpha1, 1.5) && is(alpha2, 0.0) && is(alpha3, 0.0)) ||
        (is(alpha1, 0.0) && is(alpha2, 1.5) && is(alpha3, 0.0)) ||
        (is(alpha1, 0.0) && is(alpha2, 0.0) && is(alpha3, 1.5)))
        fail("(alpha1,alpha2,alpha3) must avoid the excluded triples (3/2,0,0),(0,3/2,0),(0,0,3/2)");
}

VelocityField bilinear_B(const VelocityField& u, const VelocityField& v, TransformWorkspace& ws) {
    require_same_grid(u, v);
    if (!ws.lattice().same_as(u.lattice()))
        throw std::invalid_argument("bilinear_B: workspace grid mismatch");

    const std::size_t n = ws.real_size();
    for (int c = 0; c < 3; ++c) ws.to_physical(u, c, c);

    std::vector<CVec3> out(u.mode_count(), CVec3{});
    double* acc = ws.real_buffer(4);
    double* tmp = ws.real_buffer(3);
    for (int i = 0; i < 3; ++i) {
        for (std::size_t x = 0; x < n; ++x) acc[x] = 0.0;
        for (int j = 0; j < 3; ++j) {
            ws.to_physical_derivative(v, i, j, 3);
            const double* uj = ws.real_buffer(j);
            for (std::size_t x = 0; x < n; ++x) acc[x] += uj[x] * tmp[x];
        }
        ws.to_spectral(4, out, i);
    }

    VelocityField g(u.lattice_ptr(), std::move(out));
    return leray_project(g);
}

VelocityField bilinear_B(const VelocityField& u, const VelocityField& v) {
    auto ws = workspace_pool().acquire(u.lattice_ptr());
    return bilinear_B(u, v, *ws);
}

double trilinear_b(const VelocityField& u, const VelocityField& v, const VelocityField& w,
                   TransformWorkspace& ws) {
    require_same_grid(u, v);
    require_same_grid(u, w);
    if (!ws.lattice().same_as(u.lattice()))
        throw std::invalid_argument("trilinear_b: workspace grid mismatch");

    const std::size_t n = ws.real_size();
    for (int c = 0; c < 3; ++c) ws.to_physical(u, c, c);

    double* acc = ws.real_buffer(4);
    double* tmp = ws.real_buffer(3);
    double* wph = ws.real_buffer(5);
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (std::size_t x = 0; x < n; ++x) acc[x] = 0.0;
        for (int j = 0; j < 3; ++j) {
            ws.to_physical_derivative(v, i, j, 3);
            const double* uj = ws.real_buffer(j);
            for (std::size_t x = 0; x < n; ++x) acc[x] += uj[x] * tmp[x];
        }
        ws.to_physical(w, i, 5);
        double s = 0.0;
        for (std::size_t x = 0; x < n; ++x) s += acc[x] * wph[x];
        total += s;
    }
    // Quadrature weight: the products are band-limited below the padded
    // grid, so the discrete mean times L^3 is the exact integral.
    return total * u.lattice().volume() / static_cast<double>(n);
}

double trilinear_b(const VelocityField& u, const VelocityField& v, const VelocityField& w) {
    auto ws = workspace_pool().acquire(u.lattice_ptr());
    return trilinear_b(u, v, w, *ws);
}

double trilinear_b_renormed(const RenormParams& p, const VelocityField& u,
                            const VelocityField& v, const VelocityField& w,
                            TransformWorkspace& ws) {
    VelocityField b = bilinear_B(u, v, ws);
    return inner_product_H1(p, b, w);
}

double trilinear_ratio(const TrilinearExponents& e, const VelocityField& u,
                       const VelocityField& v, const VelocityField& w, TransformWorkspace& ws) {
    double den = norm_A_power(0.5 * e.alpha1, u) * norm_A_power(0.5 * (1.0 + e.alpha2), v) *
                 norm_A_power(0.5 * e.alpha3, w);
    if (!(den > 1e-300)) return 0.0;
    return std::abs(trilinear_b(u, v, w, ws)) / den;
}

namespace {

struct ScanBest {
    double value = -1.0;
    std::size_t sample = 0;
};

VelocityField sample_field(const LatticePtr& lat, std::uint64_t root, std::uint64_t stream,
                           std::uint64_t index, double decay) {
    return random_field(lat, 1.0, NormKind::H, substream_seed(root, stream, index), decay);
}

} // namespace

ConstantEstimate estimate_c(const LatticePtr& lat, const TrilinearExponents& e,
                            const EstimateOptions& opt) {
    e.validate();
    if (opt.n_samples == 0) throw std::invalid_argument("estimate_c: need at least one sample");

    unsigned n_threads = opt.threads > 0 ? static_cast<unsigned>(opt.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, 8);
    n_threads = std::min<std::size_t>(n_threads, opt.n_samples);

    std::vector<ScanBest> best_per_chunk(n_threads);
    auto run_chunk = [&](unsigned t) {
        auto ws = workspace_pool().acquire(lat);
        ScanBest best;
        for (std::size_t i = t; i < opt.n_samples; i += n_threads) {
            VelocityField u = sample_field(lat, opt.seed, 0, i, opt.spectrum_decay);
            VelocityField v = sample_field(lat, opt.seed, 1, i, opt.spectrum_decay);
            VelocityField w = sample_field(lat, opt.seed, 2, i, opt.spectrum_decay);
            double r = trilinear_ratio(e, u, v, w, *ws);
            if (r > best.value || (r == best.value && i < best.sample)) {
                best.value = r;
                best.sample = i;
            }
        }
        best_per_chunk[t] = best;
    };
    if (n_threads == 1) {
        run_chunk(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(run_chunk, t);
        for (auto& th : pool) th.join();
    }
    ScanBest best;
    for (const auto& b : best_per_chunk)
        if (b.value > best.value || (b.value == best.value && b.sample < best.sample)) best = b;

    ConstantEstimate est;
    est.seed = opt.seed;
    est.samples = opt.n_samples;
    est.hill_climb_steps = opt.hill_climb_steps;
    est.value = best.value;
    est.attaining_sample = best.sample;
    est.method = opt.hill_climb_steps > 0 ? "hill-climb" : "random-scan";

    if (opt.hill_climb_steps > 0) {
        auto ws = workspace_pool().acquire(lat);
        VelocityField f[3] = {sample_field(lat, opt.seed, 0, best.sample, opt.spectrum_decay),
                              sample_field(lat, opt.seed, 1, best.sample, opt.spectrum_decay),
                              sample_field(lat, opt.seed, 2, best.sample, opt.spectrum_decay)};
        Rng hc(substream_seed(opt.seed, 3, best.sample));
        const std::size_t nm = lat->mode_count();
        for (int step = 0; step < opt.hill_climb_steps; ++step) {
            int which = static_cast<int>(hc.next_u64() % 3);
            std::size_t mode = static_cast<std::size_t>(hc.next_u64() % nm);
            int comp = static_cast<int>(hc.next_u64() % 3);
            bool imag = (hc.next_u64() & 1) != 0;
            double g = hc.gaussian();

            VelocityField trial = f[which];
            Complex cur = trial.coef(mode)[comp];
            double scale = 0.25 * (std::abs(cur) + norm_H(trial) * 1e-2);
            Complex delta = imag ? Complex(0.0, scale * g) : Complex(scale * g, 0.0);
            trial.coef(mode)[comp] = cur + delta;
            VelocityField projected = leray_project(trial);

            VelocityField* args[3] = {&f[0], &f[1], &f[2]};
            args[which] = &projected;
            double r = trilinear_ratio(e, *args[0], *args[1], *args[2], *ws);
            if (r > est.value) {
                est.value = r;
                est.attaining_hill_step = step;
                f[which] = std::move(projected);
            }
        }
    }
    return est;
}

bool audit_violates(double lhs, long double bound) {
    return static_cast<long double>(lhs) > bound + kAuditAbsTol + kAuditRelTol * bound;
}

namespace {

// implied(u,v,w) is evaluated only on violation: it maps the sample back
// to a plain trilinear triple whose ratio repairs the constant c.
template <class EvalFn, class ImpliedFn>
AuditResult run_audit(const LatticePtr& lat, std::size_t n_samples, std::uint64_t seed,
                      double decay, std::uint64_t stream_base, EvalFn&& eval,
                      ImpliedFn&& implied) {
    AuditResult res;
    res.samples = n_samples;
    res.worst_margin = -1e300L;
    auto ws = workspace_pool().acquire(lat);
    for (std::size_t i = 0; i < n_samples; ++i) {
        VelocityField u = sample_field(lat, seed, stream_base + 0, i, decay);
        VelocityField v = sample_field(lat, seed, stream_base + 1, i, decay);
        VelocityField w = sample_field(lat, seed, stream_base + 2, i, decay);
        auto [lhs, bound] = eval(u, v, w, *ws);
        long double margin = static_cast<long double>(lhs) - bound;
        res.worst_margin = std::max(res.worst_margin, margin);
        if (audit_violates(lhs, bound)) {
            ++res.violations;
            res.violating.push_back({lhs, bound, substream_seed(seed, stream_base, i), true});
            res.implied_c = std::max(res.implied_c, implied(u, v, w, *ws));
        }
    }
    return res;
}

} // namespace

AuditResult audit_trilinear_bound(const LatticePtr& lat, const TrilinearExponents& e, double c,
                                  std::size_t n_samples, std::uint64_t seed, double decay) {
    return run_audit(
        lat, n_samples, seed, decay, 10,
        [&](const VelocityField& u, const VelocityField& v, const VelocityField& w,
            TransformWorkspace& ws) {
            double lhs = std::abs(trilinear_b(u, v, w, ws));
            long double den = static_cast<long double>(norm_A_power(0.5 * e.alpha1, u)) *
                              norm_A_power(0.5 * (1.0 + e.alpha2), v) *
                              norm_A_power(0.5 * e.alpha3, w);
            return std::pair<double, long double>(lhs, static_cast<long double>(c) * den);
        },
        [&](const VelocityField& u, const VelocityField& v, const VelocityField& w,
            TransformWorkspace& ws) { return trilinear_ratio(e, u, v, w, ws); });
}

AuditResult audit_preconditioned_bound(const LatticePtr& lat, const RenormedBoundConstants& k,
                                       std::size_t n_samples, std::uint64_t seed, double decay) {
    const RenormParams& p = k.renorm;
    const long double factor = p.M * p.M * p.M * static_cast<long double>(k.c) * k.c1 /
                               std::pow(static_cast<long double>(p.r), 0.25L);
    TrilinearExponents e; // (0, 1, 1/2)
    return run_audit(
        lat, n_samples, seed, decay, 20,
        [&](const VelocityField& u, const VelocityField& v, const VelocityField& w,
            TransformWorkspace& ws) {
            VelocityField b = bilinear_B(u, v, ws);
            double lhs = std::abs(inner_product_H1(p, apply_A_inverse(b), w));
            long double bound = factor * norm_H1(p, u) * norm_H1(p, w) * norm_H1(p, v);
            return std::pair<double, long double>(lhs, bound);
        },
        // A violating sample maps to the plain trilinear triple
        // (u, A^{-1}S^2 w, v), whose ratio repairs c.
        [&](const VelocityField& u, const VelocityField& v, const VelocityField& w,
            TransformWorkspace& ws) {
            VelocityField x = apply_S2(p, w, -1.0);
            return trilinear_ratio(e, u, x, v, ws);
        });
}

AuditResult audit_renormed_bound(const LatticePtr& lat, const RenormedBoundConstants& k,
                                 std::size_t n_samples, std::uint64_t seed, double decay) {
    const RenormParams& p = k.renorm;
    const long double m4 = p.M * p.M * p.M * p.M;
    const long double factor = m4 * static_cast<long double>(k.c) * k.c1 * k.c2 /
                               std::pow(static_cast<long double>(p.r), 1.25L);
    TrilinearExponents e;
    return run_audit(
        lat, n_samples, seed, decay, 30,
        [&](const VelocityField& u, const VelocityField& v, const VelocityField& w,
            TransformWorkspace& ws) {
            double lhs = std::abs(trilinear_b_renormed(p, u, v, w, ws));
            long double bound = factor * norm_H1(p, u) * norm_H1(p, v) * norm_H1(p, w);
            return std::pair<double, long double>(lhs, bound);
        },
        [&](const VelocityField& u, const VelocityField& v, const VelocityField& w,
            TransformWorkspace& ws) {
            VelocityField x = apply_S2(p, w, 0.0);
            return trilinear_ratio(e, u, x, v, ws);
        });
}

AuditResult audit_bilinear_norm_bound(const LatticePtr& lat, const RenormedBoundConstants& k,
                                      std::size_t n_samples, std::uint64_t seed, double decay) {
    const RenormParams& p = k.renorm;
    const long double m4 = p.M * p.M * p.M * p.M;
    const long double factor = m4 * static_cast<long double>(k.c) * k.c1 * k.c2 /
                               std::pow(static_cast<long double>(p.r), 1.25L);
    TrilinearExponents e;
    return run_audit(
        lat, n_samples, seed, decay, 40,
        [&](const VelocityField& u, const VelocityField& v, const VelocityField& w,
            TransformWorkspace& ws) {
            (void)w;
            VelocityField buv = bilinear_B(u, v, ws);
            VelocityField bvu = bilinear_B(v, u, ws);
            double lhs = std::max(norm_H1(p, buv), norm_H1(p, bvu));
            long double bound = factor * norm_H1(p, u) * norm_H1(p, v);
            return std::pair<double, long double>(lhs, bound);
        },
        [&](const VelocityField& u, const VelocityField& v, const VelocityField& w,
            TransformWorkspace& ws) {
            (void)w;
            VelocityField buv = bilinear_B(u, v, ws);
            VelocityField bvu = bilinear_B(v, u, ws);
            const VelocityField& worst = norm_H1(p, buv) >= norm_H1(p, bvu) ? buv : bvu;
            VelocityField x = apply_S2(p, worst, 0.0);
            double r1 = trilinear_ratio(e, u, x, v, ws);
            double r2 = trilinear_ratio(e, v, x, u, ws);
            return std::max(r1, r2);
        });
}

} // namespace nsrenorm
