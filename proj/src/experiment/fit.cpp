#include "qglab/lab/fit.hpp"

#include "qglab/errors.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>

namespace qglab::lab {

double SlopeFit::constant() const { return std::exp(intercept); }

double SlopeFit::predict(double x) const { return std::exp(intercept + slope * std::log(x)); }

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw InvalidParameter("slope fit needs matching x and y");
    const auto n = static_cast<int>(x.size());
    if (n < 3)
        throw InvalidParameter("slope fit needs at least three points");
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw InvalidParameter("log-log fit needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += lx[static_cast<std::size_t>(i)];
        my += ly[static_cast<std::size_t>(i)];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = lx[static_cast<std::size_t>(i)] - mx;
        sxx += dx * dx;
        sxy += dx * (ly[static_cast<std::size_t>(i)] - my);
    }
    if (!(sxx > 0.0))
        throw InvalidParameter("slope fit needs distinct x values");
    SlopeFit f;
    f.points = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ly[static_cast<std::size_t>(i)] - (f.intercept + f.slope * lx[static_cast<std::size_t>(i)]);
        ssr += r * r;
    }
    f.standard_error = std::sqrt(ssr / (n - 2) / sxx);
    const boost::math::students_t dist(n - 2);
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    f.ci_low = f.slope - t * f.standard_error;
    f.ci_high = f.slope + t * f.standard_error;
    return f;
}

} // namespace qglab::lab
