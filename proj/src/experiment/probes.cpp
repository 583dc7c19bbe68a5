#include "qglab/lab/probes.hpp"

namespace qglab::lab {

std::string family_name(ProbeFamily f) {
    switch (f) {
    case ProbeFamily::Interpolated:
        return "interpolated";
    case ProbeFamily::Bubble:
        return "bubble";
    case ProbeFamily::Mixed:
        return "mixed";
    case ProbeFamily::UniformBubble:
        return "uniform-bubble";
    }
    return "unknown";
}

std::mt19937_64 derived_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    for (auto k : keys) {
        words.push_back(static_cast<std::uint32_t>(k));
        words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

VertexFunction random_vertex_function(const GraphPtr& g, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd u(static_cast<Eigen::Index>(g->vertex_count()));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        u[i] = {re, im};
    }
    return {g, std::move(u)};
}

namespace {

GraphFunction random_bubbles(const GraphPtr& g, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    std::uniform_int_distribution<int> mode(1, 3);
    std::vector<EdgeProfile> p;
    p.reserve(g->segment_count());
    for (std::size_t s = 0; s < g->segment_count(); ++s) {
        const int m = mode(rng);
        const double re = gauss(rng);
        const double im = gauss(rng);
        p.emplace_back(SinusoidalProfile::bubble({re, im}, m, g->ell()));
    }
    return {g, std::move(p)};
}

} // namespace

Probe make_probe(const GraphPtr& g, ProbeFamily family, std::mt19937_64& rng) {
    switch (family) {
    case ProbeFamily::Interpolated:
        return {family, embed_I(random_vertex_function(g, rng))};
    case ProbeFamily::Bubble:
        return {family, random_bubbles(g, rng)};
    case ProbeFamily::Mixed: {
        const GraphFunction a = embed_I(random_vertex_function(g, rng));
        const GraphFunction b = random_bubbles(g, rng);
        std::uniform_real_distribution<double> weight(0.1, 2.0);
        return {family, combine(1.0, a, weight(rng), b)};
    }
    case ProbeFamily::UniformBubble: {
        std::vector<EdgeProfile> p(g->segment_count(), SinusoidalProfile::bubble(1.0, 1, g->ell()));
        return {family, GraphFunction(g, std::move(p))};
    }
    }
    return {family, GraphFunction::zeros(g)};
}

std::vector<Probe> probe_suite(const GraphPtr& g, int count, std::mt19937_64& rng) {
    static constexpr ProbeFamily cycle[] = {ProbeFamily::Interpolated, ProbeFamily::Bubble, ProbeFamily::Mixed};
    std::vector<Probe> out;
    out.reserve(static_cast<std::size_t>(count) + 1);
    for (int i = 0; i < count; ++i)
        out.push_back(make_probe(g, cycle[i % 3], rng));
    out.push_back(make_probe(g, ProbeFamily::UniformBubble, rng));
    return out;
}

} // namespace qglab::lab
