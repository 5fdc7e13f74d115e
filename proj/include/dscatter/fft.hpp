#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "dscatter/grid.hpp"

namespace dscatter {

// Shared FFTW plan cache. Plans are created once per (dim, n) with
// FFTW_UNALIGNED so they can be executed on any buffer; fftw_execute_dft on a
// shared plan with distinct arrays is thread-safe, only plan creation needs
// the lock. Each worker transforms its own field buffer in place.
class FftPlans {
  public:
    static FftPlans& instance() {
        static FftPlans plans;
        return plans;
    }

    void forward(const Grid& g, std::complex<double>* data) { execute(g, data, true); }
    void inverse(const Grid& g, std::complex<double>* data) {
        execute(g, data, false);
        const double scale = 1.0 / static_cast<double>(g.npoints());
        const std::size_t n = g.npoints();
        for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
    }

  private:
    struct PlanPair {
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
    };

    FftPlans() = default;
    ~FftPlans() {
        for (auto& [key, pp] : plans_) {
            fftw_destroy_plan(pp.fwd);
            fftw_destroy_plan(pp.bwd);
        }
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;

    void execute(const Grid& g, std::complex<double>* data, bool fwd) {
        const PlanPair& pp = get(g);
        auto* ptr = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(fwd ? pp.fwd : pp.bwd, ptr, ptr);
    }

    const PlanPair& get(const Grid& g) {
        const std::pair<int, int> key{g.dim, g.points_per_axis};
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::vector<std::complex<double>> scratch(g.npoints());
        auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
        int dims[3] = {g.points_per_axis, g.points_per_axis, g.points_per_axis};
        PlanPair pp;
        pp.fwd = fftw_plan_dft(g.dim, dims, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        pp.bwd = fftw_plan_dft(g.dim, dims, ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        return plans_.emplace(key, pp).first->second;
    }

    std::mutex mutex_;
    std::map<std::pair<int, int>, PlanPair> plans_;
};

}  // namespace dscatter
