#include "nsrenorm/ou.hpp"
#include "nsrenorm/rng.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace nsrenorm {

HermiteFunctionExpansion::HermiteFunctionExpansion(int max_degree) : max_degree_(max_degree) {
    if (max_degree < 0) throw std::invalid_argument("hermite: max_degree must be >= 0");
    const int n = max_degree;
    offset_.assign(static_cast<std::size_t>(n + 1) * (n + 1), static_cast<std::size_t>(-1));
    for (int n1 = 0; n1 <= n; ++n1) {
        for (int n2 = 0; n2 + n1 <= n; ++n2) {
            offset_[static_cast<std::size_t>(n1) * (n + 1) + n2] = idx_.size();
            for (int n3 = 0; n3 + n1 + n2 <= n; ++n3) idx_.push_back({n1, n2, n3});
        }
    }
    coef_.assign(idx_.size(), 0.0);
}

std::size_t HermiteFunctionExpansion::index(int n1, int n2, int n3) const {
    if (n1 < 0 || n2 < 0 || n3 < 0 || n1 + n2 + n3 > max_degree_)
        throw std::out_of_range("hermite: multi-index outside truncation");
    return offset_[static_cast<std::size_t>(n1) * (max_degree_ + 1) + n2] +
           static_cast<std::size_t>(n3);
}

double HermiteFunctionExpansion::parseval_norm() const {
    double s = 0.0;
    for (double c : coef_) s += c * c;
    return std::sqrt(s);
}

double hermite_h(int n, double x) {
    // He_{k+1} = x He_k - k He_{k-1}, normalized on the fly.
    double hm = 0.0, h = 1.0; // h_0 = 1
    for (int k = 0; k < n; ++k) {
        double hn = (x * h - std::sqrt(static_cast<double>(k)) * hm) /
                    std::sqrt(static_cast<double>(k + 1));
        hm = h;
        h = hn;
    }
    return h;
}

double evaluate(const HermiteFunctionExpansion& e, double x1, double x2, double x3) {
    const int n = e.max_degree();
    std::array<std::vector<double>, 3> h;
    const double xs[3] = {x1, x2, x3};
    for (int a = 0; a < 3; ++a) {
        h[a].resize(n + 1);
        for (int m = 0; m <= n; ++m) h[a][m] = hermite_h(m, xs[a]);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        auto mi = e.multi_index(i);
        s += e.raw()[i] * h[0][mi[0]] * h[1][mi[1]] * h[2][mi[2]];
    }
    return s;
}

HermiteFunctionExpansion ou_generator(const HermiteFunctionExpansion& e) {
    HermiteFunctionExpansion out = e;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.raw()[i] *= -static_cast<double>(out.total_degree(i));
    return out;
}

HermiteFunctionExpansion ou_semigroup(double t, const HermiteFunctionExpansion& e) {
    if (t < 0.0) throw std::invalid_argument("ou_semigroup: t must be nonnegative");
    HermiteFunctionExpansion out = e;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.raw()[i] *= std::exp(-t * out.total_degree(i));
    return out;
}

double ou_norm_renormed(double gamma, double omega, const HermiteFunctionExpansion& e) {
    double s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        double m = std::exp((omega - e.total_degree(i)) * gamma);
        s += m * m * e.raw()[i] * e.raw()[i];
    }
    return std::sqrt(s);
}

HermiteFunctionExpansion random_expansion(int max_degree, std::uint64_t seed) {
    HermiteFunctionExpansion e(max_degree);
    Rng rng(seed);
    for (std::size_t i = 0; i < e.size(); ++i) {
        double d = 1.0 + e.total_degree(i);
        e.raw()[i] = rng.gaussian() / (d * d);
    }
    return e;
}

OuAuditResult ou_renorm_bound_audit(double gamma, std::size_t samples, std::uint64_t seed,
                                    int max_degree, double omega) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("ou_renorm_bound_audit: gamma must lie in (0,1)");
    OuAuditResult res;
    res.samples = samples;
    res.m_constant = std::exp((max_degree - omega) * gamma);
    double cmax = 0.0;
    for (int m = 0; m <= max_degree; ++m)
        cmax = std::max(cmax, m * std::exp(-(m - omega) * gamma));
    res.c_constant = gamma * cmax;
    res.bound = res.m_constant * res.c_constant / gamma;

    for (std::size_t i = 0; i < samples; ++i) {
        HermiteFunctionExpansion w = random_expansion(max_degree, substream_seed(seed, 0, i));
        HermiteFunctionExpansion dw = ou_generator(w);
        double num = ou_norm_renormed(gamma, omega, dw);
        if (num == 0.0) {
            ++res.skipped;
            continue;
        }
        double den = ou_norm_renormed(gamma, omega, w);
        double ratio = num / den;
        res.worst_ratio = std::max(res.worst_ratio, ratio);
        if (ratio > res.bound * (1.0 + 1e-10) + 1e-12) ++res.violations;
    }
    return res;
}

} // namespace nsrenorm
