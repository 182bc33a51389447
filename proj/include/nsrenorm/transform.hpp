#pragma once

#include "nsrenorm/field.hpp"

#include <memory>
#include <mutex>
#include <vector>

namespace nsrenorm {

/// FFT scratch space for one dealiased physical grid (size M^3 with
/// M >= 3*kmax + 1, alias-free for quadratic products of truncated
/// fields). Each concurrent evaluation owns one workspace; plans use
/// FFTW_ESTIMATE so planning is deterministic and replay-stable.
class TransformWorkspace {
public:
    explicit TransformWorkspace(LatticePtr lat);
    ~TransformWorkspace();
    TransformWorkspace(const TransformWorkspace&) = delete;
    TransformWorkspace& operator=(const TransformWorkspace&) = delete;

    const Lattice& lattice() const { return *lat_; }
    int grid() const { return m_; }
    std::size_t real_size() const { return static_cast<std::size_t>(m_) * m_ * m_; }

    /// Inverse transform of one spectral component (optionally with a
    /// per-mode complex multiplier, e.g. i*kphys_j for derivatives)
    /// into the real buffer `slot`.
    void to_physical(const VelocityField& f, int component, int slot);
    void to_physical_derivative(const VelocityField& f, int component, int axis, int slot);

    /// Forward transform of real buffer `slot`; gathers normalized
    /// coefficients for the stored modes into out[mode][component].
    void to_spectral(int slot, std::vector<CVec3>& out, int component);

    double* real_buffer(int slot);
    static constexpr int kRealSlots = 6;

private:
    LatticePtr lat_;
    int m_;
    void* plan_c2r_ = nullptr;
    void* plan_r2c_ = nullptr;
    void* cbuf_ = nullptr; // fftw_complex scratch, m*m*(m/2+1)
    std::vector<double*> rbuf_;
    std::size_t csize_;

    void scatter(const VelocityField& f, int component, const Complex* mult_per_mode);
    std::vector<Complex> mult_scratch_;
};

/// Pool of workspaces keyed by lattice; concurrent evaluations check one
/// out and return it automatically (RAII handle).
class WorkspacePool {
public:
    class Handle {
    public:
        Handle(WorkspacePool* pool, std::unique_ptr<TransformWorkspace> ws)
            : pool_(pool), ws_(std::move(ws)) {}
        ~Handle();
        Handle(Handle&&) = default;
        TransformWorkspace& operator*() { return *ws_; }
        TransformWorkspace* operator->() { return ws_.get(); }

    private:
        WorkspacePool* pool_;
        std::unique_ptr<TransformWorkspace> ws_;
        friend class WorkspacePool;
    };

    Handle acquire(const LatticePtr& lat);

private:
    std::mutex mu_;
    std::vector<std::unique_ptr<TransformWorkspace>> idle_;
    friend class Handle;
};

/// Process-wide default pool.
WorkspacePool& workspace_pool();

} // namespace nsrenorm
