#include "nsrenorm/transform.hpp"

#include <fftw3.h>

#include <cstring>
#include <stdexcept>

namespace nsrenorm {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution on
// distinct plans/buffers is.
std::mutex g_fftw_mutex;
} // namespace

TransformWorkspace::TransformWorkspace(LatticePtr lat) : lat_(std::move(lat)) {
    m_ = lat_->dealias_grid();
    const std::size_t rsize = real_size();
    csize_ = static_cast<std::size_t>(m_) * m_ * (m_ / 2 + 1);
    mult_scratch_.resize(lat_->mode_count());

    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    cbuf_ = fftw_malloc(sizeof(fftw_complex) * csize_);
    rbuf_.resize(kRealSlots);
    for (int s = 0; s < kRealSlots; ++s)
        rbuf_[s] = static_cast<double*>(fftw_malloc(sizeof(double) * rsize));
    if (!cbuf_) throw std::bad_alloc();
    plan_c2r_ = fftw_plan_dft_c2r_3d(m_, m_, m_, static_cast<fftw_complex*>(cbuf_), rbuf_[0],
                                     FFTW_ESTIMATE);
    plan_r2c_ = fftw_plan_dft_r2c_3d(m_, m_, m_, rbuf_[0], static_cast<fftw_complex*>(cbuf_),
                                     FFTW_ESTIMATE);
    if (!plan_c2r_ || !plan_r2c_) throw std::runtime_error("transform: FFTW planning failed");
}

TransformWorkspace::~TransformWorkspace() {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
    if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
    for (double* p : rbuf_) fftw_free(p);
    fftw_free(cbuf_);
}

double* TransformWorkspace::real_buffer(int slot) { return rbuf_[slot]; }

void TransformWorkspace::scatter(const VelocityField& f, int component,
                                 const Complex* mult_per_mode) {
    auto* cb = static_cast<fftw_complex*>(cbuf_);
    std::memset(cb, 0, sizeof(fftw_complex) * csize_);
    const Lattice& lat = *lat_;
    const int m = m_;
    const int hw = m / 2 + 1;
    auto put = [&](int k1, int k2, int k3, Complex v) {
        int i1 = k1 >= 0 ? k1 : k1 + m;
        int i2 = k2 >= 0 ? k2 : k2 + m;
        std::size_t idx = (static_cast<std::size_t>(i1) * m + i2) * hw + k3;
        cb[idx][0] = v.real();
        cb[idx][1] = v.imag();
    };
    for (std::size_t i = 0; i < f.mode_count(); ++i) {
        const WaveVector& w = lat.modes()[i];
        Complex v = f.coef(i)[component];
        if (mult_per_mode) v *= mult_per_mode[i];
        // Canonical modes have k3 >= 0 and fit the r2c half-spectrum
        // directly; their conjugates at -k are implied by the transform
        // except in the k3 = 0 plane, where both entries must be written.
        put(w.k[0], w.k[1], w.k[2], v);
        if (w.k[2] == 0) put(-w.k[0], -w.k[1], 0, std::conj(v));
    }
}

void TransformWorkspace::to_physical(const VelocityField& f, int component, int slot) {
    scatter(f, component, nullptr);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_), static_cast<fftw_complex*>(cbuf_),
                         rbuf_[slot]);
}

void TransformWorkspace::to_physical_derivative(const VelocityField& f, int component, int axis,
                                                int slot) {
    const Lattice& lat = *lat_;
    for (std::size_t i = 0; i < f.mode_count(); ++i)
        mult_scratch_[i] = Complex(0.0, lat.kphys(i)[axis]);
    scatter(f, component, mult_scratch_.data());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_), static_cast<fftw_complex*>(cbuf_),
                         rbuf_[slot]);
}

void TransformWorkspace::to_spectral(int slot, std::vector<CVec3>& out, int component) {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), rbuf_[slot],
                         static_cast<fftw_complex*>(cbuf_));
    auto* cb = static_cast<fftw_complex*>(cbuf_);
    const Lattice& lat = *lat_;
    const int m = m_;
    const int hw = m / 2 + 1;
    const double scale = 1.0 / (static_cast<double>(m) * m * m);
    for (std::size_t i = 0; i < lat.mode_count(); ++i) {
        const WaveVector& w = lat.modes()[i];
        int i1 = w.k[0] >= 0 ? w.k[0] : w.k[0] + m;
        int i2 = w.k[1] >= 0 ? w.k[1] : w.k[1] + m;
        std::size_t idx = (static_cast<std::size_t>(i1) * m + i2) * hw + w.k[2];
        out[i][component] = Complex(cb[idx][0] * scale, cb[idx][1] * scale);
    }
}

WorkspacePool::Handle WorkspacePool::acquire(const LatticePtr& lat) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        for (auto it = idle_.begin(); it != idle_.end(); ++it) {
            if ((*it)->lattice().same_as(*lat)) {
                auto ws = std::move(*it);
                idle_.erase(it);
                return Handle(this, std::move(ws));
            }
        }
    }
    return Handle(this, std::make_unique<TransformWorkspace>(lat));
}

WorkspacePool::Handle::~Handle() {
    if (ws_ && pool_) {
        std::lock_guard<std::mutex> lock(pool_->mu_);
        pool_->idle_.push_back(std::move(ws_));
    }
}

WorkspacePool& workspace_pool() {
    static WorkspacePool pool;
    return pool;
}

} // namespace nsrenorm
