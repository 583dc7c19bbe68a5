#pragma once

#include "qglab/norm_estimate.hpp"
#include "qglab/potentials.hpp"
#include "qglab/profiles.hpp"
#include "qglab/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qglab::lab {

/// One experiment: sweep parameters, tolerances and output location.
///
/// `radius` is the Dirichlet wall: lattice vertices fill |x|_inf <= R - ell
/// and the boundary stubs end on the wall when ell divides R.
struct ExperimentConfig {
    int nu = 1;
    std::string potential = "harmonic";
    std::map<std::string, double> potential_params;
    double m_shift = 1.0;
    std::vector<cplx> z_list{cplx{0.0, 1.0}};
    std::vector<double> ell_list{0.2, 0.1, 0.05, 0.025};
    double radius = 6.0;
    double fine_h = 0.00625;

    int probes = 200;
    int adjoint_pairs = 100;
    int bubble_modes = 1;
    bool h1_form = true;

    Window window{0.0, 8.0};
    int eigen_count = 3;

    double noise_band = 1e-4;
    double slope_threshold = 0.9;
    double secular_tol = 1e-10;
    double richardson_tol = 1e-3;
    double adjoint_tol = 1e-10;
    double nonvacuity = 0.3;
    PowerOptions power{};

    std::string out_dir = "qglab-out";
    std::uint64_t seed = 1;

    Potential make_potential() const;
    /// Lattice half-width passed to build_lattice for one ell.
    double lattice_radius(double ell) const { return radius - ell; }
};

/// Throws InvalidParameter naming the first violated invariant.
void validate(const ExperimentConfig& c);

nlohmann::json to_json(const ExperimentConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected (ParseError).
ExperimentConfig from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a over the canonical JSON dump without out_dir, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

/// "1", "-2.5", "i", "-i", "3i", "1+2i", "0.5-1e-3i".
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);
/// Comma-separated list of reals.
std::vector<double> parse_real_list(const std::string& text);

} // namespace qglab::lab
