#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "dscatter/field.hpp"

namespace dscatter {

// ---------------------------------------------------------------------------
// Lattice iteration: fn(linear_index, xi) over the full frequency lattice.
// ---------------------------------------------------------------------------
template <class Fn>
inline void for_each_mode(const Grid& g, Fn&& fn) {
    const int n = g.points_per_axis;
    std::vector<double> freq(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) freq[static_cast<std::size_t>(i)] = g.frequency(i);

    std::size_t idx = 0;
    Wavevector xi{0.0, 0.0, 0.0};
    if (g.dim == 1) {
        for (int i0 = 0; i0 < n; ++i0) {
            xi[0] = freq[static_cast<std::size_t>(i0)];
            fn(idx++, xi);
        }
    } else if (g.dim == 2) {
        for (int i0 = 0; i0 < n; ++i0) {
            xi[0] = freq[static_cast<std::size_t>(i0)];
            for (int i1 = 0; i1 < n; ++i1) {
                xi[1] = freq[static_cast<std::size_t>(i1)];
                fn(idx++, xi);
            }
        }
    } else {
        for (int i0 = 0; i0 < n; ++i0) {
            xi[0] = freq[static_cast<std::size_t>(i0)];
            for (int i1 = 0; i1 < n; ++i1) {
                xi[1] = freq[static_cast<std::size_t>(i1)];
                for (int i2 = 0; i2 < n; ++i2) {
                    xi[2] = freq[static_cast<std::size_t>(i2)];
                    fn(idx++, xi);
                }
            }
        }
    }
}

// physical-space analogue
template <class Fn>
inline void for_each_point(const Grid& g, Fn&& fn) {
    const int n = g.points_per_axis;
    std::vector<double> coord(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) coord[static_cast<std::size_t>(i)] = g.coordinate(i);

    std::size_t idx = 0;
    Wavevector x{0.0, 0.0, 0.0};
    if (g.dim == 1) {
        for (int i0 = 0; i0 < n; ++i0) {
            x[0] = coord[static_cast<std::size_t>(i0)];
            fn(idx++, x);
        }
    } else if (g.dim == 2) {
        for (int i0 = 0; i0 < n; ++i0) {
            x[0] = coord[static_cast<std::size_t>(i0)];
            for (int i1 = 0; i1 < n; ++i1) {
                x[1] = coord[static_cast<std::size_t>(i1)];
                fn(idx++, x);
            }
        }
    } else {
        for (int i0 = 0; i0 < n; ++i0) {
            x[0] = coord[static_cast<std::size_t>(i0)];
            for (int i1 = 0; i1 < n; ++i1) {
                x[1] = coord[static_cast<std::size_t>(i1)];
                for (int i2 = 0; i2 < n; ++i2) {
                    x[2] = coord[static_cast<std::size_t>(i2)];
                    fn(idx++, x);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Scalar Fourier multipliers
// ---------------------------------------------------------------------------

enum class ZeroModePolicy { keep, zero };

struct FourierSymbol {
    std::function<Complex(const Wavevector&)> eval;
    ZeroModePolicy zero_mode = ZeroModePolicy::keep;

    std::vector<Complex> table(const Grid& g) const {
        std::vector<Complex> out(g.npoints());
        for_each_mode(g, [&](std::size_t idx, const Wavevector& xi) {
            out[idx] = (norm2(xi) == 0.0 && zero_mode == ZeroModePolicy::zero) ? Complex(0.0)
                                                                               : eval(xi);
        });
        return out;
    }
};

namespace detail {
inline void multiply_table(SpectralField& f, const std::vector<Complex>& tab, int c) {
    auto comp = f.comp(c);
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= tab[i];
}
}  // namespace detail

// Pointwise multiplication of the frequency view by sym(xi) on the masked
// components (empty mask = all). The output is returned in the input's view.
inline SpectralField apply_symbol(const SpectralField& field, const FourierSymbol& sym,
                                  const std::vector<int>& component_mask = {}) {
    SpectralField out = field;
    const View original = out.view();
    out.to_frequency();
    const auto tab = sym.table(out.grid());
    if (component_mask.empty()) {
        for (int c = 0; c < out.components(); ++c) detail::multiply_table(out, tab, c);
    } else {
        for (int c : component_mask) {
            if (c < 0 || c >= out.components()) throw ConfigError("apply_symbol: component out of range");
            detail::multiply_table(out, tab, c);
        }
    }
    out.to_view(original);
    return out;
}

// ---------------------------------------------------------------------------
// Free propagators
// ---------------------------------------------------------------------------

// u_hat(t) = exp(-i t M_c |xi|^2) u_hat(0), component-wise (unitary group).
inline SpectralField free_propagate(const SpectralField& field, const std::vector<double>& masses,
                                    double t) {
    if (static_cast<int>(masses.size()) != field.components())
        throw ConfigError("free_propagate: mass matrix size does not match component count");
    for (double m : masses)
        if (m == 0.0) throw ConfigError("free_propagate: zero diagonal entry in mass matrix");

    SpectralField out = field;
    const View original = out.view();
    out.to_frequency();
    for (int c = 0; c < out.components(); ++c) {
        const double mc = masses[static_cast<std::size_t>(c)];
        auto comp = out.comp(c);
        for_each_mode(out.grid(), [&](std::size_t idx, const Wavevector& xi) {
            comp[idx] *= std::polar(1.0, -t * mc * norm2(xi));
        });
    }
    out.to_view(original);
    return out;
}

// GP linearized dispersion H(xi) = sqrt(|xi|^2 (2 + |xi|^2)) and the
// low-frequency weight U(xi) = sqrt(|xi|^2 / (2 + |xi|^2)).
inline double gp_H(double m2) { return std::sqrt(m2 * (2.0 + m2)); }
inline double gp_U(double m2) { return std::sqrt(m2 / (2.0 + m2)); }

// zeta_hat(t) = exp(-i t H(xi)) zeta_hat(0); H(0)=0 so the zero mode is fixed.
inline SpectralField gp_propagate(const SpectralField& field, double t) {
    if (field.components() != 1) throw ConfigError("gp_propagate: field must be single-component");
    SpectralField out = field;
    const View original = out.view();
    out.to_frequency();
    auto comp = out.comp(0);
    for_each_mode(out.grid(), [&](std::size_t idx, const Wavevector& xi) {
        comp[idx] *= std::polar(1.0, -t * gp_H(norm2(xi)));
    });
    out.to_view(original);
    return out;
}

// ---------------------------------------------------------------------------
// Combined GP operator chains.
//
// Every operator in the chain is radial of the form |xi|^a (2+|xi|^2)^{h/2},
// except that HinvDiv additionally contributes the vector factor i xi_j. The
// chain is reduced to the exponent pair (a, h) before evaluation so singular
// factors cancel algebraically; a residual singular zero mode is set to 0 and
// flagged.
// ---------------------------------------------------------------------------

enum class GpOp {
    U,                // |xi| (2+|xi|^2)^{-1/2}
    Uinv,             // |xi|^{-1} (2+|xi|^2)^{1/2}
    Upow,             // U^s
    H,                // |xi| (2+|xi|^2)^{1/2}
    Hinv,             // |xi|^{-1} (2+|xi|^2)^{-1/2}
    HinvDiv,          // H^{-1} nabla. : radial part of each component, plus i xi_j
    InvTwoMinusDelta, // (2+|xi|^2)^{-1}
    AbsGrad,          // |xi|^s
    Bessel            // (2+|xi|^2)^{s/2}   (GP convention <nabla> = sqrt(2-Delta))
};

struct GpChainOp {
    GpOp op;
    double s = 1.0;  // exponent for Upow / AbsGrad / Bessel
};

struct CombinedSymbol {
    double xi_pow = 0.0;   // power of |xi|
    double lat_pow = 0.0;  // power of sqrt(2+|xi|^2)
    int grad_order = 0;    // number of i xi_j vector factors (0 or 1 supported)
    bool had_singular = false;  // some factor in the chain was singular at 0
    bool zero_mode_flagged = false;

    double radial(double m2) const {
        if (m2 == 0.0) {
            // any singular factor in the chain drops the zero mode, even when
            // the reduced exponents are regular (e.g. U . U^{-1})
            if (had_singular || xi_pow != 0.0 || grad_order > 0) return 0.0;
            return std::pow(2.0, 0.5 * lat_pow);
        }
        return std::pow(std::sqrt(m2), xi_pow) * std::pow(2.0 + m2, 0.5 * lat_pow);
    }

    FourierSymbol scalar_symbol() const {
        if (grad_order != 0)
            throw ConfigError("combined symbol: gradient factor requires the divergence applier");
        return FourierSymbol{[*this](const Wavevector& xi) { return Complex(radial(norm2(xi))); },
                             ZeroModePolicy::keep};
    }

    // sup over the lattice of the full symbol magnitude (incl. |xi| from the
    // gradient factor), a diagnostic for boundedness checks
    double sup_abs_on_grid(const Grid& g) const {
        double m = 0.0;
        for_each_mode(g, [&](std::size_t, const Wavevector& xi) {
            const double m2 = norm2(xi);
            double v = std::abs(radial(m2));
            if (grad_order > 0) v *= std::pow(std::sqrt(m2), grad_order);
            m = std::max(m, v);
        });
        return m;
    }
};

inline CombinedSymbol combined_symbol(const std::vector<GpChainOp>& chain) {
    CombinedSymbol cs;
    for (const auto& [op, s] : chain) {
        switch (op) {
            case GpOp::U: cs.xi_pow += 1; cs.lat_pow -= 1; break;
            case GpOp::Uinv: cs.xi_pow -= 1; cs.lat_pow += 1; cs.had_singular = true; break;
            case GpOp::Upow:
                cs.xi_pow += s; cs.lat_pow -= s;
                if (s < 0) cs.had_singular = true;
                break;
            case GpOp::H: cs.xi_pow += 1; cs.lat_pow += 1; break;
            case GpOp::Hinv: cs.xi_pow -= 1; cs.lat_pow -= 1; cs.had_singular = true; break;
            case GpOp::HinvDiv:
                cs.xi_pow -= 1; cs.lat_pow -= 1; cs.grad_order += 1; cs.had_singular = true;
                break;
            case GpOp::InvTwoMinusDelta: cs.lat_pow -= 2; break;
            case GpOp::AbsGrad:
                cs.xi_pow += s;
                if (s < 0) cs.had_singular = true;
                break;
            case GpOp::Bessel: cs.lat_pow += s; break;
        }
    }
    if (cs.grad_order > 1) throw ConfigError("combined symbol: at most one divergence factor");
    cs.zero_mode_flagged = cs.had_singular || cs.xi_pow < 0.0;
    return cs;
}

inline SpectralField apply_combined(const SpectralField& field, const CombinedSymbol& cs) {
    return apply_symbol(field, cs.scalar_symbol());
}

// ---------------------------------------------------------------------------
// Spectral differentiation: plain i xi_j multipliers, the unpaired Nyquist
// mode included. Keeping the full symbol makes the energy identity and the
// combined-chain algebra exact per lattice mode; resolved real fields stay
// real to the size of their Nyquist content.
// ---------------------------------------------------------------------------

inline SpectralField spectral_gradient(const SpectralField& field, int axis) {
    if (axis < 0 || axis >= field.grid().dim) throw ConfigError("spectral_gradient: bad axis");
    SpectralField out = field;
    const View original = out.view();
    out.to_frequency();
    for (int c = 0; c < out.components(); ++c) {
        auto comp = out.comp(c);
        for_each_mode(out.grid(), [&](std::size_t idx, const Wavevector& xi) {
            comp[idx] *= Complex(0.0, xi[static_cast<std::size_t>(axis)]);
        });
    }
    out.to_view(original);
    return out;
}

// (i xi_axis) * radial(xi) applied to one field; realizes per-axis chains
// like [nabla U^{-1}]_j with the singular radial part already cancelled.
inline SpectralField gradient_with_radial(const SpectralField& field, int axis,
                                          const CombinedSymbol& cs) {
    if (axis < 0 || axis >= field.grid().dim) throw ConfigError("gradient_with_radial: bad axis");
    SpectralField out = field;
    const View original = out.view();
    out.to_frequency();
    for (int c = 0; c < out.components(); ++c) {
        auto comp = out.comp(c);
        for_each_mode(out.grid(), [&](std::size_t idx, const Wavevector& xi) {
            comp[idx] *=
                Complex(0.0, xi[static_cast<std::size_t>(axis)]) * cs.radial(norm2(xi));
        });
    }
    out.to_view(original);
    return out;
}

// sum_j (i xi_j) * radial(xi) * V_j_hat for a d-vector of single-component
// fields; realizes chains like H^{-1} nabla. W with the singular radial part
// already cancelled.
inline SpectralField divergence_with_radial(const std::vector<SpectralField>& vec,
                                            const CombinedSymbol& cs) {
    if (vec.empty()) throw ConfigError("divergence_with_radial: empty vector field");
    const Grid& g = vec.front().grid();
    if (static_cast<int>(vec.size()) != g.dim)
        throw ConfigError("divergence_with_radial: need one component per axis");

    SpectralField out(g, 1, View::frequency);
    auto acc = out.comp(0);
    for (int axis = 0; axis < g.dim; ++axis) {
        SpectralField f = vec[static_cast<std::size_t>(axis)];
        if (f.components() != 1) throw ConfigError("divergence_with_radial: components must be scalar");
        require_same_grid(g, f.grid(), "divergence_with_radial");
        f.to_frequency();
        auto comp = f.comp(0);
        for_each_mode(g, [&](std::size_t idx, const Wavevector& xi) {
            acc[idx] += Complex(0.0, xi[static_cast<std::size_t>(axis)]) *
                        cs.radial(norm2(xi)) * comp[idx];
        });
    }
    out.to_physical();
    return out;
}

// Applies exp(+/- i t omega(xi)) with a caller-supplied dispersion relation
// per component; shared by the Duhamel engines.
using Dispersion = std::function<double(int component, double m2)>;

inline void phase_multiply_in_place(SpectralField& freq_field, const Dispersion& omega, double t) {
    if (freq_field.view() != View::frequency)
        throw ConfigError("phase_multiply: field must be in frequency view");
    for (int c = 0; c < freq_field.components(); ++c) {
        auto comp = freq_field.comp(c);
        for_each_mode(freq_field.grid(), [&](std::size_t idx, const Wavevector& xi) {
            comp[idx] *= std::polar(1.0, -t * omega(c, norm2(xi)));
        });
    }
}

inline Dispersion nls_dispersion(std::vector<double> masses) {
    return [masses = std::move(masses)](int c, double m2) {
        return masses[static_cast<std::size_t>(c)] * m2;
    };
}
inline Dispersion gp_dispersion() {
    return [](int, double m2) { return gp_H(m2); };
}

}  // namespace dscatter
