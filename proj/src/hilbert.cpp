#include "qglab/hilbert.hpp"

#include "qglab/errors.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace qglab {

namespace {

void require_same_graph(const GraphPtr& a, const GraphPtr& b) {
    if (!a || !b || (a != b && !a->compatible(*b)))
        throw Incompatible("functions live on different lattices");
}

} // namespace

VertexFunction::VertexFunction(GraphPtr graph, Eigen::VectorXcd values)
    : graph_(std::move(graph)), values_(std::move(values)) {
    if (!graph_)
        throw InvalidParameter("vertex function needs a graph");
    if (static_cast<std::size_t>(values_.size()) != graph_->vertex_count())
        throw Incompatible("vertex function length " + std::to_string(values_.size()) + " does not match " +
                           std::to_string(graph_->vertex_count()) + " vertices");
}

VertexFunction VertexFunction::zeros(GraphPtr graph) {
    const auto n = static_cast<Eigen::Index>(graph->vertex_count());
    return {std::move(graph), Eigen::VectorXcd::Zero(n)};
}

double VertexFunction::norm() const { return std::sqrt(graph_->vertex_weight()) * values_.norm(); }

cplx h2_inner(const VertexFunction& u, const VertexFunction& v) {
    require_same_graph(u.graph(), v.graph());
    return u.graph()->vertex_weight() * u.values().dot(v.values());
}

GraphFunction::GraphFunction(GraphPtr graph, std::vector<EdgeProfile> profiles)
    : graph_(std::move(graph)), profiles_(std::move(profiles)) {
    if (!graph_)
        throw InvalidParameter("graph function needs a graph");
    if (profiles_.size() != graph_->segment_count())
        throw Incompatible("graph function has " + std::to_string(profiles_.size()) + " profiles for " +
                           std::to_string(graph_->segment_count()) + " segments");
}

GraphFunction GraphFunction::zeros(GraphPtr graph) {
    std::vector<EdgeProfile> p(graph->segment_count(), LinearProfile{0.0, 0.0});
    return {std::move(graph), std::move(p)};
}

cplx GraphFunction::end_value(std::size_t segment, bool at_tail) const {
    return evaluate(profiles_[segment], at_tail ? 0.0 : graph_->ell(), graph_->ell());
}

cplx GraphFunction::outward_derivative(std::size_t segment, bool at_tail) const {
    const double ell = graph_->ell();
    return at_tail ? derivative(profiles_[segment], 0.0, ell) : -derivative(profiles_[segment], ell, ell);
}

GraphFunction combine(cplx alpha, const GraphFunction& f, cplx beta, const GraphFunction& g) {
    require_same_graph(f.graph(), g.graph());
    const double ell = f.graph()->ell();
    std::vector<EdgeProfile> out;
    out.reserve(f.profiles().size());
    for (std::size_t s = 0; s < f.profiles().size(); ++s)
        out.push_back(combine(alpha, f[s], beta, g[s], ell));
    return {f.graph(), std::move(out)};
}

GraphFunction operator-(const GraphFunction& f, const GraphFunction& g) { return combine(1.0, f, -1.0, g); }

GraphFunction scale(cplx s, const GraphFunction& f) {
    const double ell = f.graph()->ell();
    std::vector<EdgeProfile> out;
    out.reserve(f.profiles().size());
    const EdgeProfile zero = LinearProfile{0.0, 0.0};
    for (const auto& p : f.profiles())
        out.push_back(combine(s, p, 0.0, zero, ell));
    return {f.graph(), std::move(out)};
}

cplx h1_inner(const GraphFunction& phi, const GraphFunction& psi) {
    require_same_graph(phi.graph(), psi.graph());
    const double ell = phi.graph()->ell();
    cplx sum = 0.0;
    for (std::size_t s = 0; s < phi.profiles().size(); ++s)
        sum += inner(phi[s], psi[s], ell);
    return phi.graph()->segment_weight() * sum;
}

double h1_norm(const GraphFunction& phi) { return std::sqrt(std::max(0.0, h1_inner(phi, phi).real())); }

double derivative_norm(const GraphFunction& phi) {
    const double ell = phi.graph()->ell();
    double sum = 0.0;
    for (const auto& p : phi.profiles())
        sum += derivative_inner(p, p, ell).real();
    return std::sqrt(std::max(0.0, phi.graph()->segment_weight() * sum));
}

double h1_sobolev_norm(const GraphFunction& phi) {
    const double a = h1_norm(phi);
    const double b = derivative_norm(phi);
    return std::sqrt(a * a + b * b);
}

ContinuityDefect continuity_defect(const GraphFunction& phi) {
    const auto& g = *phi.graph();
    ContinuityDefect worst;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const auto inc = g.incident(v);
        if (inc.empty())
            continue;
        const cplx ref = phi.end_value(inc[0].segment, inc[0].at_tail);
        for (const auto& i : inc.subspan(1)) {
            const double d = std::abs(phi.end_value(i.segment, i.at_tail) - ref);
            if (d > worst.discrepancy)
                worst = {d, static_cast<int>(v), false};
        }
    }
    const auto segs = g.segments();
    for (std::size_t s = g.edge_count(); s < segs.size(); ++s) {
        const double d = std::abs(phi.end_value(s, false));
        if (d > worst.discrepancy)
            worst = {d, segs[s].tail, true};
    }
    return worst;
}

GraphFunction embed_I(const VertexFunction& u) {
    const auto& g = *u.graph();
    std::vector<EdgeProfile> p;
    p.reserve(g.segment_count());
    for (const auto& s : g.segments())
        p.push_back(LinearProfile{u[s.tail], s.is_stub() ? cplx{0.0} : u[s.head]});
    return {u.graph(), std::move(p)};
}

VertexFunction trace_K(const GraphFunction& phi) {
    const auto defect = continuity_defect(phi);
    if (defect.discrepancy > kContinuityTolerance) {
        std::ostringstream os;
        os << "function is not in H^1 of the graph: discrepancy " << defect.discrepancy << " at vertex "
           << defect.vertex << (defect.at_ghost ? " (stub ghost end)" : "");
        throw NotInH1(os.str());
    }
    const auto& g = *phi.graph();
    Eigen::VectorXcd out(static_cast<Eigen::Index>(g.vertex_count()));
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        cplx sum = 0.0;
        const auto inc = g.incident(v);
        for (const auto& i : inc)
            sum += phi.end_value(i.segment, i.at_tail);
        out[static_cast<Eigen::Index>(v)] = inc.empty() ? cplx{0.0} : sum / static_cast<double>(inc.size());
    }
    return {phi.graph(), std::move(out)};
}

VertexFunction adjoint_Istar(const GraphFunction& phi) {
    const auto& g = *phi.graph();
    const double ell = g.ell();
    const double pre = 1.0 / (g.nu() * ell);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(g.vertex_count()));
    const auto segs = g.segments();
    for (std::size_t s = 0; s < segs.size(); ++s) {
        out[segs[s].tail] += pre * hat_moment(phi[s], ell, true);
        if (!segs[s].is_stub())
            out[segs[s].head] += pre * hat_moment(phi[s], ell, false);
    }
    return {phi.graph(), std::move(out)};
}

namespace {

double checked_sobolev(const GraphFunction& phi) {
    const double n = h1_sobolev_norm(phi);
    if (!(n > 0.0))
        throw UndefinedRatio("probe has zero Sobolev norm");
    return n;
}

} // namespace

BoundCheck ik_defect_check(const GraphFunction& phi) {
    const double denom = checked_sobolev(phi);
    const auto diff = embed_I(trace_K(phi)) - phi;
    return {h1_norm(diff) / denom, phi.graph()->ell()};
}

BoundCheck adjoint_gap_check(const GraphFunction& phi) {
    const double denom = checked_sobolev(phi);
    const auto k = trace_K(phi);
    const auto istar = adjoint_Istar(phi);
    const VertexFunction diff(phi.graph(), istar.values() - k.values());
    return {diff.norm() / denom, phi.graph()->ell() / std::sqrt(5.0)};
}

BoundCheck identification_defect(const GraphFunction& phi) {
    const double denom = checked_sobolev(phi);
    const auto diff = embed_I(adjoint_Istar(phi)) - phi;
    return {h1_norm(diff) / denom, phi.graph()->ell()};
}

namespace {

void write_c(std::ostream& os, cplx c) { os << ' ' << c.real() << ' ' << c.imag(); }

cplx read_c(std::istream& is) {
    double re = 0.0, im = 0.0;
    if (!(is >> re >> im))
        throw ParseError("expected a complex number");
    return {re, im};
}

} // namespace

void write_graph_function(std::ostream& os, const GraphFunction& phi) {
    const auto& g = *phi.graph();
    const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
    os << "qglab-graph-function 1\n";
    os << "lattice " << g.nu() << ' ' << g.ell() << ' ' << g.half_width() << ' ' << g.segment_count() << '\n';
    const auto segs = g.segments();
    for (std::size_t s = 0; s < segs.size(); ++s) {
        os << "segment " << s << ' ' << segs[s].tail << ' ' << segs[s].head << ' ';
        std::visit(
            [&os](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, LinearProfile>) {
                    os << "linear";
                    write_c(os, p.a);
                    write_c(os, p.b);
                } else if constexpr (std::is_same_v<T, SinusoidalProfile>) {
                    os << "sinusoidal";
                    write_c(os, p.c0);
                    write_c(os, p.c1);
                    os << ' ' << p.modes.size();
                    for (const auto& m : p.modes) {
                        write_c(os, m.wavenumber);
                        write_c(os, m.sin_coef);
                        write_c(os, m.cos_coef);
                        os << ' ' << (m.subtracted ? 1 : 0);
                    }
                } else {
                    os << "sampled " << p.values.size() << ' ' << (p.derivatives.empty() ? 0 : 1);
                    for (const auto& v : p.values)
                        write_c(os, v);
                    for (const auto& d : p.derivatives)
                        write_c(os, d);
                }
            },
            phi[s]);
        os << '\n';
    }
    os.precision(old_precision);
}

GraphFunction read_graph_function(std::istream& is, GraphPtr graph) {
    std::string word;
    int version = 0;
    if (!(is >> word >> version) || word != "qglab-graph-function" || version != 1)
        throw ParseError("missing graph-function header");
    int nu = 0, m = 0;
    double ell = 0.0;
    std::size_t count = 0;
    if (!(is >> word >> nu >> ell >> m >> count) || word != "lattice")
        throw ParseError("missing lattice line");
    if (nu != graph->nu() || ell != graph->ell() || m != graph->half_width() || count != graph->segment_count())
        throw Incompatible("serialized function belongs to a different lattice");
    std::vector<EdgeProfile> profiles;
    profiles.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        std::size_t id = 0;
        int tail = 0, head = 0;
        std::string kind;
        if (!(is >> word >> id >> tail >> head >> kind) || word != "segment" || id != s)
            throw ParseError("malformed segment line " + std::to_string(s));
        if (kind == "linear") {
            const cplx a = read_c(is);
            const cplx b = read_c(is);
            profiles.push_back(LinearProfile{a, b});
        } else if (kind == "sinusoidal") {
            SinusoidalProfile p;
            p.c0 = read_c(is);
            p.c1 = read_c(is);
            std::size_t modes = 0;
            if (!(is >> modes))
                throw ParseError("missing mode count");
            for (std::size_t k = 0; k < modes; ++k) {
                TrigMode t;
                t.wavenumber = read_c(is);
                t.sin_coef = read_c(is);
                t.cos_coef = read_c(is);
                int flag = 0;
                if (!(is >> flag) || (flag != 0 && flag != 1))
                    throw ParseError("malformed mode flag");
                t.subtracted = flag == 1;
                p.modes.push_back(t);
            }
            profiles.push_back(std::move(p));
        } else if (kind == "sampled") {
            std::size_t n = 0;
            int with_deriv = 0;
            if (!(is >> n >> with_deriv))
                throw ParseError("missing sample count");
            SampledProfile p;
            for (std::size_t k = 0; k < n; ++k)
                p.values.push_back(read_c(is));
            if (with_deriv)
                for (std::size_t k = 0; k < n; ++k)
                    p.derivatives.push_back(read_c(is));
            profiles.push_back(std::move(p));
        } else {
            throw ParseError("unknown profile kind '" + kind + "'");
        }
    }
    return {std::move(graph), std::move(profiles)};
}

} // namespace qglab
