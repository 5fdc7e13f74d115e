#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "dscatter/fft.hpp"
#include "dscatter/grid.hpp"

namespace dscatter {

using Complex = std::complex<double>;

enum class View { physical, frequency };

// C^N-valued field on a periodic grid, stored component-major, carrying its
// current view. Transform convention: forward DFT is unnormalized, the
// inverse carries 1/n^d, so a plane wave exp(i xi0.x) has coefficient n^d at
// xi0 in the frequency view.
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(const Grid& g, int ncomp, View v = View::physical)
        : grid_(g), ncomp_(ncomp), view_(v), data_(g.npoints() * static_cast<std::size_t>(ncomp)) {
        if (ncomp < 1) throw ConfigError("field: component count must be >= 1");
    }

    const Grid& grid() const { return grid_; }
    int components() const { return ncomp_; }
    View view() const { return view_; }
    std::size_t npoints() const { return grid_.npoints(); }

    std::span<Complex> comp(int c) {
        return {data_.data() + static_cast<std::size_t>(c) * npoints(), npoints()};
    }
    std::span<const Complex> comp(int c) const {
        return {data_.data() + static_cast<std::size_t>(c) * npoints(), npoints()};
    }
    std::vector<Complex>& raw() { return data_; }
    const std::vector<Complex>& raw() const { return data_; }

    void to_view(View v) {
        if (v == view_) return;
        auto& plans = FftPlans::instance();
        for (int c = 0; c < ncomp_; ++c) {
            Complex* ptr = data_.data() + static_cast<std::size_t>(c) * npoints();
            if (v == View::frequency)
                plans.forward(grid_, ptr);
            else
                plans.inverse(grid_, ptr);
        }
        view_ = v;
    }
    void to_physical() { to_view(View::physical); }
    void to_frequency() { to_view(View::frequency); }

    SpectralField in_view(View v) const {
        SpectralField out = *this;
        out.to_view(v);
        return out;
    }

    // discrete L^2 norm with the cell-volume weight; valid in either view via
    // Parseval (frequency data carries an extra factor n^d in the squared sum)
    double l2_norm() const {
        double s = 0.0;
        for (const Complex& z : data_) s += std::norm(z);
        double w = grid_.cell_volume();
        if (view_ == View::frequency) w /= static_cast<double>(grid_.npoints());
        return std::sqrt(s * w);
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    bool all_finite() const {
        for (const Complex& z : data_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    SpectralField& operator+=(const SpectralField& o) { return axpy(1.0, o); }
    SpectralField& operator-=(const SpectralField& o) { return axpy(-1.0, o); }
    SpectralField& axpy(Complex a, const SpectralField& o) {
        require_compatible(o, "field axpy");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * o.data_[i];
        return *this;
    }
    SpectralField& operator*=(Complex a) {
        for (Complex& z : data_) z *= a;
        return *this;
    }

    void require_compatible(const SpectralField& o, const char* what) const {
        require_same_grid(grid_, o.grid_, what);
        if (ncomp_ != o.ncomp_ || view_ != o.view_)
            throw ConfigError(std::string(what) + ": field layout/view mismatch");
    }

  private:
    Grid grid_{};
    int ncomp_ = 0;
    View view_ = View::physical;
    std::vector<Complex> data_;
};

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
inline SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }

inline double l2_distance(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    d -= b;
    return d.l2_norm();
}

}  // namespace dscatter
