#include "inls/fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <fftw3.h>

namespace inls {

namespace {

// FFTW's planner is not thread-safe; creation is serialized. Execution on
// a workspace's own buffer is safe as long as the workspace is not shared,
// which the thread-local cache below guarantees.
std::mutex g_planner_mutex;

class Workspace {
  public:
    Workspace(int dim, int M) : n_(1) {
        int sizes[3] = {M, M, M};
        for (int d = 0; d < dim; ++d) n_ *= static_cast<std::size_t>(M);
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_));
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        fwd_ = fftw_plan_dft(dim, sizes, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft(dim, sizes, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Workspace() {
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    cplx* buffer() { return reinterpret_cast<cplx*>(buf_); }
    std::size_t size() const { return n_; }
    void run_forward() { fftw_execute(fwd_); }
    void run_backward() { fftw_execute(bwd_); }

  private:
    std::size_t n_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

Workspace& workspace_for(const Grid& g) {
    thread_local std::map<std::pair<int, int>, Workspace> cache;
    auto key = std::make_pair(g.dim, g.M);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.try_emplace(key, g.dim, g.M).first;
    return it->second;
}

int index_parity(const Grid& g, std::size_t idx) {
    auto j = g.unflatten(idx);
    int p = 0;
    for (int d = 0; d < g.dim; ++d) p += j[d];
    return p & 1;
}

}  // namespace

void forward_inplace(const Grid& g, std::vector<cplx>& v) {
    Workspace& ws = workspace_for(g);
    std::copy(v.begin(), v.end(), ws.buffer());
    ws.run_forward();
    const double scale = std::pow(static_cast<double>(g.M), -g.dim / 2.0);
    const cplx* out = ws.buffer();
    for (std::size_t i = 0; i < v.size(); ++i) {
        double sgn = index_parity(g, i) ? -scale : scale;
        v[i] = sgn * out[i];
    }
}

void backward_inplace(const Grid& g, std::vector<cplx>& v) {
    Workspace& ws = workspace_for(g);
    cplx* in = ws.buffer();
    for (std::size_t i = 0; i < v.size(); ++i)
        in[i] = index_parity(g, i) ? -v[i] : v[i];
    ws.run_backward();
    const double scale = std::pow(static_cast<double>(g.M), -g.dim / 2.0);
    const cplx* out = ws.buffer();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * out[i];
}

Field to_frequency(const Field& f) {
    if (f.space != Space::Physical)
        throw DomainError("to_frequency expects a physical-space field");
    Field out = f;
    forward_inplace(f.grid, out.values);
    out.space = Space::Frequency;
    return out;
}

Field to_physical(const Field& f) {
    if (f.space != Space::Frequency)
        throw DomainError("to_physical expects a frequency-space field");
    Field out = f;
    backward_inplace(f.grid, out.values);
    out.space = Space::Physical;
    return out;
}

Field fractional_derivative(const Field& f, double sigma) {
    if (sigma < 0.0) throw DomainError("derivative order must be >= 0");
    Field hat = (f.space == Space::Physical) ? to_frequency(f) : f;
    const Grid& g = hat.grid;
    for (std::size_t i = 0; i < hat.values.size(); ++i)
        hat.values[i] *= std::pow(g.freq_sq(i), sigma / 2.0);
    return to_physical(hat);
}

Field apply_symbol(const Field& f, const std::function<cplx(double)>& m) {
    Field hat = (f.space == Space::Physical) ? to_frequency(f) : f;
    const Grid& g = hat.grid;
    for (std::size_t i = 0; i < hat.values.size(); ++i) hat.values[i] *= m(g.freq_sq(i));
    return (f.space == Space::Physical) ? to_physical(hat) : hat;
}

Field sample_physical(const Grid& g,
                      const std::function<cplx(const std::array<double, 3>&)>& f) {
    Field out(g, Space::Physical);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        auto j = g.unflatten(i);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int d = 0; d < g.dim; ++d) x[d] = g.coord(j[d]);
        out.values[i] = f(x);
    }
    return out;
}

}  // namespace inls
