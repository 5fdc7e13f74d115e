#pragma once

#include <cmath>
#include <vector>

#include "dscatter/errors.hpp"
#include "dscatter/norms.hpp"

namespace dscatter {

struct FitResult {
    double exponent = 0.0;   // slope of log y vs log t
    double amplitude = 0.0;  // y ~ amplitude * t^exponent
    double r_squared = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int n_used = 0;
};

// least squares on (log t, log y) restricted to the window
inline FitResult fit_power_law(const std::vector<double>& ts, const std::vector<double>& ys,
                               double window_lo = 0.0, double window_hi = kInf,
                               int min_samples = 8) {
    if (ts.size() != ys.size()) throw ConfigError("fit_power_law: mismatched samples");
    std::vector<double> X, Y;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < window_lo || ts[i] > window_hi) continue;
        if (!(ys[i] > 0.0)) throw ConfigError("fit_power_law: nonpositive sample in window");
        X.push_back(std::log(ts[i]));
        Y.push_back(std::log(ys[i]));
    }
    const int n = static_cast<int>(X.size());
    if (n < min_samples) throw ConfigError("fit_power_law: need at least 8 samples in window");

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sx += X[static_cast<std::size_t>(i)];
        sy += Y[static_cast<std::size_t>(i)];
        sxx += X[static_cast<std::size_t>(i)] * X[static_cast<std::size_t>(i)];
        sxy += X[static_cast<std::size_t>(i)] * Y[static_cast<std::size_t>(i)];
        syy += Y[static_cast<std::size_t>(i)] * Y[static_cast<std::size_t>(i)];
    }
    const double dn = n;
    const double denom = dn * sxx - sx * sx;
    FitResult fr;
    fr.exponent = (dn * sxy - sx * sy) / denom;
    fr.amplitude = std::exp((sy - fr.exponent * sx) / dn);
    const double sst = syy - sy * sy / dn;
    double ssr = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pred = std::log(fr.amplitude) + fr.exponent * X[static_cast<std::size_t>(i)];
        ssr += (Y[static_cast<std::size_t>(i)] - pred) * (Y[static_cast<std::size_t>(i)] - pred);
    }
    fr.r_squared = sst > 0 ? 1.0 - ssr / sst : 1.0;
    fr.window_lo = window_lo;
    fr.window_hi = window_hi;
    fr.n_used = n;
    return fr;
}

}  // namespace dscatter
