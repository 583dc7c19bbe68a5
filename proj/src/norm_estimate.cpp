#include "qglab/norm_estimate.hpp"

#include "qglab/errors.hpp"

#include <cmath>
#include <random>

namespace qglab {

Eigen::VectorXcd seeded_start(Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        x[i] = {re, im};
    }
    return x;
}

NormEstimate power_iteration(Eigen::VectorXcd x, const std::function<PowerStep(const Eigen::VectorXcd&)>& step,
                             const std::function<double(const Eigen::VectorXcd&)>& norm, const PowerOptions& opts) {
    double nx = norm(x);
    if (!(nx > 0.0))
        throw InvalidParameter("power iteration needs a nonzero start vector");
    x /= nx;
    double previous = -1.0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        PowerStep s = step(x);
        if (!std::isfinite(s.gain))
            throw EstimationFailure("power iteration produced a non-finite gain", previous);
        if (s.gain == 0.0)
            return {0.0, it};
        if (previous >= 0.0 && std::abs(s.gain - previous) <= opts.relative_tolerance * s.gain)
            return {s.gain, it};
        previous = s.gain;
        nx = norm(s.normal);
        if (!(nx > 0.0))
            return {s.gain, it};
        x = s.normal / nx;
    }
    throw EstimationFailure("power iteration did not stagnate within " + std::to_string(opts.max_iterations) +
                                " iterations",
                            previous);
}

NormEstimate estimate_operator_norm(Eigen::Index dim, const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                                    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply_adjoint,
                                    const PowerOptions& opts) {
    auto step = [&](const Eigen::VectorXcd& x) {
        Eigen::VectorXcd y = apply(x);
        return PowerStep{y.norm(), apply_adjoint(y)};
    };
    auto norm = [](const Eigen::VectorXcd& v) { return v.norm(); };
    return power_iteration(seeded_start(dim, opts.seed), step, norm, opts);
}

} // namespace qglab
