#pragma once

#include "qglab/hilbert.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace qglab::lab {

/// Probe families for lower estimates of the identification-operator norms:
/// interpolated vertex data, sine bubbles (invisible to K), and mixtures.
/// The uniform bubble (amplitude 1, m = 1 on every segment) is the
/// near-extremal case for the I* - K estimate.
enum class ProbeFamily { Interpolated, Bubble, Mixed, UniformBubble };

std::string family_name(ProbeFamily f);

struct Probe {
    ProbeFamily family;
    GraphFunction function;
};

/// Independent stream per key tuple, so parallel sweeps merge deterministically.
std::mt19937_64 derived_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

Probe make_probe(const GraphPtr& g, ProbeFamily family, std::mt19937_64& rng);

/// `count` probes cycling through the random families, then one uniform bubble.
std::vector<Probe> probe_suite(const GraphPtr& g, int count, std::mt19937_64& rng);

/// Random vertex data with standard Gaussian real and imaginary parts.
VertexFunction random_vertex_function(const GraphPtr& g, std::mt19937_64& rng);

} // namespace qglab::lab
