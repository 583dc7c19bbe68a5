#include "qglab/potentials.hpp"

#include "qglab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qglab {

Potential::Potential(std::string label, Evaluator evaluator, std::optional<double> lower_bound)
    : label_(std::move(label)), evaluator_(std::move(evaluator)), lower_bound_(lower_bound) {}

namespace {

double norm_sq(std::span<const double> x) {
    double s = 0.0;
    for (double xi : x)
        s += xi * xi;
    return s;
}

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::string format_point(std::span<const double> x) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < x.size(); ++i)
        os << (i ? ", " : "") << x[i];
    os << ')';
    return os.str();
}

} // namespace

Potential zero_potential() {
    return {"zero", [](std::span<const double>) { return 0.0; }, 0.0};
}

Potential harmonic_potential(double omega) {
    const double w2 = omega * omega;
    return {"harmonic", [w2](std::span<const double> x) { return w2 * norm_sq(x); }, 0.0};
}

Potential gaussian_well(double depth, double width) {
    if (!(width > 0.0))
        throw InvalidParameter("well width must be positive");
    return {"well",
            [depth, width](std::span<const double> x) { return -depth * std::exp(-norm_sq(x) / (width * width)); },
            std::min(0.0, -depth)};
}

Potential smooth_bump(double height, double width, double center) {
    if (!(width > 0.0))
        throw InvalidParameter("bump width must be positive");
    return {"bump",
            [height, width, center](std::span<const double> x) {
                double r2 = 0.0;
                for (std::size_t d = 0; d < x.size(); ++d) {
                    const double c = d == 0 ? x[d] - center : x[d];
                    r2 += c * c;
                }
                return height / (1.0 + r2 / (width * width));
            },
            std::min(0.0, height)};
}

Potential make_potential(const std::string& label, const std::map<std::string, double>& params) {
    if (label == "zero")
        return zero_potential();
    if (label == "harmonic")
        return harmonic_potential(param(params, "omega", 1.0));
    if (label == "well")
        return gaussian_well(param(params, "depth", 1.0), param(params, "width", 1.0));
    if (label == "bump")
        return smooth_bump(param(params, "height", 1.0), param(params, "width", 1.0), param(params, "center", 0.0));
    throw InvalidParameter("unknown potential label '" + label + "'");
}

Box Box::cube(int nu, double lo, double hi) {
    return {std::vector<double>(nu, lo), std::vector<double>(nu, hi)};
}

AssumptionReport assumption_report(const Potential& v, double m_shift, const Box& region, int sample_density) {
    if (sample_density < 1)
        throw InvalidParameter("sample density must be positive");
    const int nu = region.dim();
    if (nu < 1 || region.upper.size() != region.lower.size())
        throw InvalidParameter("malformed sampling box");

    const double h = 1.0 / sample_density;
    std::vector<int> counts(nu);
    std::size_t total = 1;
    for (int d = 0; d < nu; ++d) {
        const double width = region.upper[d] - region.lower[d];
        if (width < 0.0)
            throw InvalidParameter("sampling box has negative width");
        counts[d] = static_cast<int>(std::floor(width * sample_density + 1e-9)) + 1;
        total *= static_cast<std::size_t>(counts[d]);
    }

    // Evaluate V + M on the grid (lexicographic order).
    std::vector<double> shifted(total);
    std::vector<int> idx(nu);
    std::vector<double> x(nu);
    double vmin = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < total; ++p) {
        std::size_t rest = p;
        for (int d = nu - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(rest % counts[d]);
            rest /= counts[d];
            x[d] = region.lower[d] + idx[d] * h;
        }
        const double val = v(x);
        vmin = std::min(vmin, val);
        shifted[p] = val + m_shift;
        if (!(shifted[p] > 0.0))
            throw ShiftTooSmall("V + M = " + std::to_string(shifted[p]) + " <= 0 at " + format_point(x));
    }

    // Modulus levels delta = 1, 1/2, 1/4, ... down to the grid spacing.
    std::vector<double> deltas{1.0};
    while (deltas.back() / 2.0 >= h * (1.0 - 1e-12))
        deltas.push_back(deltas.back() / 2.0);
    std::vector<double> sup_at_level(deltas.size(), 0.0);

    // Offsets with |o| h <= 1, half-space only (pairs are unordered for the
    // modulus, ordered for c1 so both ratios are taken).
    const int reach = sample_density;
    std::vector<std::vector<int>> offsets;
    std::vector<int> o(nu, -reach);
    while (true) {
        double r2 = 0.0;
        for (int d = 0; d < nu; ++d)
            r2 += static_cast<double>(o[d]) * o[d];
        bool positive = false;
        for (int d = 0; d < nu; ++d) {
            if (o[d] != 0) {
                positive = o[d] > 0;
                break;
            }
        }
        if (positive && std::sqrt(r2) * h <= 1.0 + 1e-12)
            offsets.push_back(o);
        int d = nu - 1;
        while (d >= 0 && o[d] == reach) {
            o[d] = -reach;
            --d;
        }
        if (d < 0)
            break;
        ++o[d];
    }

    double c1 = 1.0;
    std::vector<int> q(nu);
    for (std::size_t p = 0; p < total; ++p) {
        std::size_t rest = p;
        for (int d = nu - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(rest % counts[d]);
            rest /= counts[d];
        }
        for (const auto& off : offsets) {
            std::size_t qi = 0;
            bool inside = true;
            double r2 = 0.0;
            for (int d = 0; d < nu; ++d) {
                q[d] = idx[d] + off[d];
                if (q[d] < 0 || q[d] >= counts[d]) {
                    inside = false;
                    break;
                }
                qi = qi * counts[d] + static_cast<std::size_t>(q[d]);
                r2 += static_cast<double>(off[d]) * off[d];
            }
            if (!inside)
                continue;
            const double a = shifted[p];
            const double b = shifted[qi];
            c1 = std::max({c1, a / b, b / a});
            const double diff = std::abs(1.0 / a - 1.0 / b);
            const double r = std::sqrt(r2) * h;
            // Smallest level still containing this pair.
            std::size_t level = 0;
            while (level + 1 < deltas.size() && deltas[level + 1] >= r * (1.0 - 1e-12))
                ++level;
            sup_at_level[level] = std::max(sup_at_level[level], diff);
        }
    }
    // A pair at distance r counts for every delta >= r.
    for (std::size_t l = deltas.size() - 1; l-- > 0;)
        sup_at_level[l] = std::max(sup_at_level[l], sup_at_level[l + 1]);

    AssumptionReport rep;
    rep.m_shift = m_shift;
    rep.c1_estimate = c1;
    rep.sampled_minimum = vmin;
    rep.bounded_below_ok = v.lower_bound().has_value() && vmin >= *v.lower_bound();
    rep.region = region;
    for (std::size_t l = 0; l < deltas.size(); ++l)
        rep.modulus_samples.push_back({deltas[l], sup_at_level[l]});
    return rep;
}

Eigen::VectorXd sample_on_vertices(const Potential& v, const LatticeGraph& g) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(g.vertex_count()));
    for (std::size_t j = 0; j < g.vertex_count(); ++j)
        out[static_cast<Eigen::Index>(j)] = v(g.point(j));
    return out;
}

} // namespace qglab
