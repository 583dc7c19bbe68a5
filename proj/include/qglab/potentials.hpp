#pragma once

#include "qglab/lattice.hpp"

#include <Eigen/Core>

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qglab {

/// A real potential V on R^nu together with an optional certified lower bound.
class Potential {
public:
    using Evaluator = std::function<double(std::span<const double>)>;

    Potential(std::string label, Evaluator evaluator, std::optional<double> lower_bound);

    double operator()(std::span<const double> x) const { return evaluator_(x); }
    const std::string& label() const noexcept { return label_; }
    /// nullopt means "unverified".
    std::optional<double> lower_bound() const noexcept { return lower_bound_; }

private:
    std::string label_;
    Evaluator evaluator_;
    std::optional<double> lower_bound_;
};

Potential zero_potential();
/// V(x) = omega^2 |x|^2.
Potential harmonic_potential(double omega = 1.0);
/// V(x) = -depth exp(-|x|^2 / width^2): bounded, attractive.
Potential gaussian_well(double depth, double width);
/// V(x) = height / (1 + |x - center e_1|^2 / width^2): bounded, smooth.
Potential smooth_bump(double height, double width, double center = 0.0);

/// Built-in potentials by label: "zero", "harmonic" (omega), "well" (depth,
/// width), "bump" (height, width, center). Missing parameters take defaults.
Potential make_potential(const std::string& label, const std::map<std::string, double>& params = {});

/// Axis-aligned box [lower_d, upper_d] used for sampling.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    static Box cube(int nu, double lo, double hi);
    int dim() const { return static_cast<int>(lower.size()); }
};

struct ModulusSample {
    double delta = 0.0;
    double sup_difference = 0.0;
};

/// Sampled diagnostics for the standing assumption on V: lower bound,
/// comparability of V + M within unit distance, and the modulus of
/// continuity of (V + M)^-1.
struct AssumptionReport {
    double m_shift = 0.0;
    double c1_estimate = 1.0;
    std::vector<ModulusSample> modulus_samples; ///< delta descending
    bool bounded_below_ok = true;
    double sampled_minimum = 0.0;
    Box region;
};

/// Samples V on a uniform grid of spacing 1/sample_density over `region` and
/// scans every pair with |x - y| <= 1. Throws ShiftTooSmall if V + M <= 0 at
/// any sample point.
AssumptionReport assumption_report(const Potential& v, double m_shift, const Box& region, int sample_density);

/// V_j = V(j) on every lattice vertex.
Eigen::VectorXd sample_on_vertices(const Potential& v, const LatticeGraph& g);

} // namespace qglab
