#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>

namespace qglab {

struct PowerOptions {
    int max_iterations = 500;
    double relative_tolerance = 1e-6;
    std::uint64_t seed = 0x5eed;
};

struct NormEstimate {
    double value = 0.0;
    int iterations = 0;
};

/// Result of one application of A to a unit vector x: gain = ||A x|| and
/// normal = A* A x (in the same coordinates as x).
struct PowerStep {
    double gain = 0.0;
    Eigen::VectorXcd normal;
};

/// Power iteration on A* A for ||A||. `norm` is the norm of the input space
/// in the chosen coordinates. Stops when the gain stagnates to the relative
/// tolerance; throws EstimationFailure otherwise.
NormEstimate power_iteration(Eigen::VectorXcd start, const std::function<PowerStep(const Eigen::VectorXcd&)>& step,
                             const std::function<double(const Eigen::VectorXcd&)>& norm, const PowerOptions& opts);

/// Convenience form for operators on C^n with a uniformly weighted inner
/// product (the weight cancels in the norm ratio).
NormEstimate estimate_operator_norm(Eigen::Index dim, const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                                    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply_adjoint,
                                    const PowerOptions& opts = {});

/// Deterministic complex Gaussian start vector.
Eigen::VectorXcd seeded_start(Eigen::Index dim, std::uint64_t seed);

} // namespace qglab
