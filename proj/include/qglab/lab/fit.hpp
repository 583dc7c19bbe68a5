#pragma once

#include <vector>

namespace qglab::lab {

/// Least squares line through (log x, log y).
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0; ///< log of the fitted constant
    double standard_error = 0.0;
    double ci_low = 0.0;  ///< 95% Student t interval for the slope
    double ci_high = 0.0;
    int points = 0;

    double constant() const;
    double predict(double x) const;
};

inline constexpr int kMinSlopePoints = 4;

/// Needs at least three points with positive coordinates.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

} // namespace qglab::lab
