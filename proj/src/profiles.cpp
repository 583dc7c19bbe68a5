#include "qglab/profiles.hpp"

#include "qglab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace qglab {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kSeriesRadius = 0.5;
constexpr int kSeriesTerms = 14;

// sum_{n >= first} (-1)^n w^{2(n - first)} / (2n + offset)!
cplx alternating_series(cplx w, int first, int offset) {
    const cplx w2 = w * w;
    cplx sum = 0.0;
    cplx power = 1.0;
    for (int n = first; n < first + kSeriesTerms; ++n) {
        double fact = 1.0;
        for (int i = 2; i <= 2 * n + offset; ++i)
            fact *= i;
        sum += ((n % 2) ? -1.0 : 1.0) * power / fact;
        power *= w2;
    }
    return sum;
}

// sin u - u and cos u - 1 without cancellation
cplx sin_minus_arg(cplx u) { return u * u * u * sinm(u); }
cplx cos_minus_one(cplx u) { return -0.5 * u * u * cosc(u); }

// c x^p e^{gamma x}
struct Term {
    cplx coef;
    int power;
    cplx gamma;
};

using Terms = std::vector<Term>;

void push_merged(Terms& out, const Term& t) {
    for (auto& u : out) {
        if (u.power == t.power && u.gamma == t.gamma) {
            u.coef += t.coef;
            return;
        }
    }
    out.push_back(t);
}

Terms to_terms(const SinusoidalProfile& profile, double ell) {
    const SinusoidalProfile p = plain_form(profile, ell);
    Terms t;
    push_merged(t, {p.c0, 0, 0.0});
    push_merged(t, {p.c1 / ell, 1, 0.0});
    for (const auto& m : p.modes) {
        const cplx g = kI * m.wavenumber;
        push_merged(t, {-0.5 * kI * m.sin_coef + 0.5 * m.cos_coef, 0, g});
        push_merged(t, {0.5 * kI * m.sin_coef + 0.5 * m.cos_coef, 0, -g});
    }
    return t;
}

Terms to_terms(const EdgeProfile& p, double ell) { return to_terms(to_sinusoidal(p), ell); }

Terms differentiate(const Terms& in) {
    Terms out;
    for (const auto& t : in) {
        if (t.power > 0)
            push_merged(out, {t.coef * static_cast<double>(t.power), t.power - 1, t.gamma});
        if (t.gamma != 0.0)
            push_merged(out, {t.coef * t.gamma, t.power, t.gamma});
    }
    return out;
}

cplx integrate_term(const Term& t, double ell) {
    return t.coef * std::pow(ell, t.power + 1) * exp_moment(t.power, t.gamma * ell);
}

cplx integrate_product(const Terms& a, const Terms& b, double ell) {
    cplx sum = 0.0;
    for (const auto& s : a)
        for (const auto& t : b)
            sum += integrate_term({std::conj(s.coef) * t.coef, s.power + t.power, std::conj(s.gamma) + t.gamma}, ell);
    return sum;
}

// Gauss-Legendre, 8 nodes on [-1, 1].
constexpr std::array<double, 8> kGlNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

int sample_intervals(const EdgeProfile& p) {
    if (const auto* s = std::get_if<SampledProfile>(&p))
        return static_cast<int>(s->values.size()) - 1;
    return 1;
}

template <class F>
cplx quadrature(int intervals, double ell, F&& f) {
    const double h = ell / intervals;
    cplx sum = 0.0;
    for (int i = 0; i < intervals; ++i) {
        const double mid = (i + 0.5) * h;
        for (std::size_t q = 0; q < kGlNodes.size(); ++q)
            sum += kGlWeights[q] * f(mid + 0.5 * h * kGlNodes[q]);
    }
    return 0.5 * h * sum;
}

int common_intervals(const EdgeProfile& p, const EdgeProfile& q) {
    const int a = sample_intervals(p);
    const int b = sample_intervals(q);
    return std::lcm(a, b);
}

cplx sampled_slope(const SampledProfile& s, int i, double h) {
    if (!s.derivatives.empty())
        return s.derivatives[i];
    const auto& v = s.values;
    const int m = static_cast<int>(v.size()) - 1;
    if (i == 0)
        return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    if (i == m)
        return (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * h);
    return (v[i + 1] - v[i - 1]) / (2.0 * h);
}

void check_sampled(const SampledProfile& s) {
    if (s.values.size() < 3)
        throw InvalidParameter("sampled profile needs at least 3 samples (m >= 2)");
    if (!s.derivatives.empty() && s.derivatives.size() != s.values.size())
        throw InvalidParameter("sampled profile derivative count does not match value count");
}

// Cubic Hermite evaluation; order 0 gives the value, 1 the derivative.
cplx eval_sampled(const SampledProfile& s, double x, double ell, int order) {
    check_sampled(s);
    const int m = static_cast<int>(s.values.size()) - 1;
    const double h = ell / m;
    int i = static_cast<int>(std::floor(x / h));
    i = std::clamp(i, 0, m - 1);
    const double t = (x - i * h) / h;
    const cplx v0 = s.values[i], v1 = s.values[i + 1];
    const cplx d0 = sampled_slope(s, i, h), d1 = sampled_slope(s, i + 1, h);
    if (order == 0) {
        const double h00 = (2 * t - 3) * t * t + 1, h10 = ((t - 2) * t + 1) * t;
        const double h01 = (3 - 2 * t) * t * t, h11 = (t - 1) * t * t;
        return h00 * v0 + h10 * h * d0 + h01 * v1 + h11 * h * d1;
    }
    const double g00 = (6 * t - 6) * t, g10 = (3 * t - 4) * t + 1;
    const double g01 = (6 - 6 * t) * t, g11 = (3 * t - 2) * t;
    return (g00 * v0 + g01 * v1) / h + g10 * d0 + g11 * d1;
}

} // namespace

cplx exp_moment(int p, cplx w) {
    if (std::abs(w) < 2.0) {
        // sum_k w^k / (k! (p + k + 1))
        cplx term = 1.0;
        cplx sum = 1.0 / static_cast<double>(p + 1);
        for (int k = 1; k < 80; ++k) {
            term *= w / static_cast<double>(k);
            const cplx add = term / static_cast<double>(p + k + 1);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum))
                break;
        }
        return sum;
    }
    const cplx ew = std::exp(w);
    cplx e = (ew - 1.0) / w;
    for (int q = 1; q <= p; ++q)
        e = (ew - static_cast<double>(q) * e) / w;
    return e;
}

SinusoidalProfile SinusoidalProfile::from_resolvent(cplx psi_j, cplx psi_n, cplx phi_j, cplx phi_n, cplx k_prime,
                                                    double ell, int nu) {
    const cplx w = k_prime * ell;
    const cplx sw = std::sin(w);
    if (std::abs(sw) <= 1e-12 * std::max(1.0, std::abs(w)))
        throw EdgeSingular("sin(k' ell) vanishes: Dirichlet edge resonance");
    const cplx scale = static_cast<double>(nu) * k_prime * k_prime;
    const cplx pj = phi_j / scale;
    const cplx pn = phi_n / scale;
    // psi = -p(x) + a sin(k'x)/sin w + b sin(k'(ell - x))/sin w with p linear
    // and a, b the shifted end values; regrouped around the Taylor terms so
    // the large multiples of 1/k'^2 never meet in a sum
    const cplx b = psi_j + pj;
    const cplx s = ((psi_n - psi_j * std::cos(w)) + (pn - pj * std::cos(w))) / sw;
    SinusoidalProfile out;
    out.c0 = psi_j;
    out.c1 = psi_n - psi_j - s * sin_minus_arg(w) - b * cos_minus_one(w);
    out.modes.push_back({k_prime, s, b, true});
    return out;
}

SinusoidalProfile SinusoidalProfile::bubble(cplx amplitude, int m, double ell) {
    SinusoidalProfile out;
    out.modes.push_back({std::numbers::pi * m / ell, amplitude, 0.0});
    return out;
}

bool is_analytic(const EdgeProfile& p) noexcept { return !std::holds_alternative<SampledProfile>(p); }

bool has_derivative(const EdgeProfile& p) noexcept {
    if (const auto* s = std::get_if<SampledProfile>(&p))
        return !s->derivatives.empty();
    return true;
}

SinusoidalProfile plain_form(const SinusoidalProfile& p, double ell) {
    SinusoidalProfile out{p.c0, p.c1, {}};
    for (const auto& m : p.modes) {
        if (m.subtracted) {
            out.c0 -= m.cos_coef;
            out.c1 -= m.sin_coef * m.wavenumber * ell;
        }
        out.modes.push_back({m.wavenumber, m.sin_coef, m.cos_coef, false});
    }
    return out;
}

SinusoidalProfile to_sinusoidal(const EdgeProfile& p) {
    if (const auto* l = std::get_if<LinearProfile>(&p))
        return {l->a, l->b - l->a, {}};
    if (const auto* s = std::get_if<SinusoidalProfile>(&p))
        return *s;
    throw InvalidParameter("sampled profile has no closed form");
}

cplx evaluate(const EdgeProfile& p, double x, double ell) {
    if (const auto* l = std::get_if<LinearProfile>(&p))
        return l->a + (l->b - l->a) * (x / ell);
    if (const auto* s = std::get_if<SinusoidalProfile>(&p)) {
        cplx v = s->c0 + s->c1 * (x / ell);
        for (const auto& m : s->modes) {
            const cplx u = m.wavenumber * x;
            v += m.subtracted ? m.sin_coef * sin_minus_arg(u) + m.cos_coef * cos_minus_one(u)
                              : m.sin_coef * std::sin(u) + m.cos_coef * std::cos(u);
        }
        return v;
    }
    return eval_sampled(std::get<SampledProfile>(p), x, ell, 0);
}

cplx derivative(const EdgeProfile& p, double x, double ell) {
    if (const auto* l = std::get_if<LinearProfile>(&p))
        return (l->b - l->a) / ell;
    if (const auto* s = std::get_if<SinusoidalProfile>(&p)) {
        cplx v = s->c1 / ell;
        for (const auto& m : s->modes) {
            const cplx u = m.wavenumber * x;
            const cplx c = m.subtracted ? cos_minus_one(u) : std::cos(u);
            v += m.wavenumber * (m.sin_coef * c - m.cos_coef * std::sin(u));
        }
        return v;
    }
    const auto& s = std::get<SampledProfile>(p);
    if (s.derivatives.empty())
        throw MissingDerivative("sampled profile carries no derivative samples");
    return eval_sampled(s, x, ell, 1);
}

cplx second_derivative(const EdgeProfile& p, double x, double /*ell*/) {
    if (std::holds_alternative<LinearProfile>(p))
        return 0.0;
    if (const auto* s = std::get_if<SinusoidalProfile>(&p)) {
        cplx v = 0.0;
        for (const auto& m : s->modes) {
            const cplx k2 = m.wavenumber * m.wavenumber;
            v -= k2 * (m.sin_coef * std::sin(m.wavenumber * x) + m.cos_coef * std::cos(m.wavenumber * x));
        }
        return v;
    }
    throw InvalidParameter("second derivative is only available in closed form");
}

cplx inner(const EdgeProfile& p, const EdgeProfile& q, double ell) {
    if (const auto* l = std::get_if<LinearProfile>(&p)) {
        if (const auto* r = std::get_if<LinearProfile>(&q)) {
            const cplx a = std::conj(l->a), b = std::conj(l->b);
            return ell * (a * r->a / 3.0 + (a * r->b + b * r->a) / 6.0 + b * r->b / 3.0);
        }
    }
    if (is_analytic(p) && is_analytic(q))
        return integrate_product(to_terms(p, ell), to_terms(q, ell), ell);
    return quadrature(common_intervals(p, q), ell,
                      [&](double x) { return std::conj(evaluate(p, x, ell)) * evaluate(q, x, ell); });
}

cplx derivative_inner(const EdgeProfile& p, const EdgeProfile& q, double ell) {
    if (is_analytic(p) && is_analytic(q))
        return integrate_product(differentiate(to_terms(p, ell)), differentiate(to_terms(q, ell)), ell);
    if (!has_derivative(p) || !has_derivative(q))
        throw MissingDerivative("sampled profile carries no derivative samples");
    return quadrature(common_intervals(p, q), ell,
                      [&](double x) { return std::conj(derivative(p, x, ell)) * derivative(q, x, ell); });
}

cplx hat_moment(const EdgeProfile& p, double ell, bool from_tail) {
    if (const auto* l = std::get_if<LinearProfile>(&p))
        return from_tail ? ell * (l->a / 3.0 + l->b / 6.0) : ell * (l->a / 6.0 + l->b / 3.0);
    const EdgeProfile hat = from_tail ? LinearProfile{1.0, 0.0} : LinearProfile{0.0, 1.0};
    return inner(hat, p, ell);
}

EdgeProfile combine(cplx alpha, const EdgeProfile& p, cplx beta, const EdgeProfile& q, double ell) {
    if (is_analytic(p) && is_analytic(q)) {
        const auto* lp = std::get_if<LinearProfile>(&p);
        const auto* lq = std::get_if<LinearProfile>(&q);
        if (lp && lq)
            return LinearProfile{alpha * lp->a + beta * lq->a, alpha * lp->b + beta * lq->b};
        const auto sp = to_sinusoidal(p);
        const auto sq = to_sinusoidal(q);
        SinusoidalProfile out{alpha * sp.c0 + beta * sq.c0, alpha * sp.c1 + beta * sq.c1, {}};
        auto add = [&out](const TrigMode& m, cplx f) {
            for (auto& o : out.modes) {
                if (o.wavenumber == m.wavenumber && o.subtracted == m.subtracted) {
                    o.sin_coef += f * m.sin_coef;
                    o.cos_coef += f * m.cos_coef;
                    return;
                }
            }
            out.modes.push_back({m.wavenumber, f * m.sin_coef, f * m.cos_coef, m.subtracted});
        };
        for (const auto& m : sp.modes)
            add(m, alpha);
        for (const auto& m : sq.modes)
            add(m, beta);
        return out;
    }
    const int m = std::max(sample_intervals(p), sample_intervals(q));
    const bool with_deriv = has_derivative(p) && has_derivative(q);
    SampledProfile out;
    out.values.resize(m + 1);
    if (with_deriv)
        out.derivatives.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        const double x = ell * i / m;
        out.values[i] = alpha * evaluate(p, x, ell) + beta * evaluate(q, x, ell);
        if (with_deriv)
            out.derivatives[i] = alpha * derivative(p, x, ell) + beta * derivative(q, x, ell);
    }
    return out;
}

cplx sinc(cplx w) {
    if (std::abs(w) < kSeriesRadius)
        return alternating_series(w, 0, 1);
    return std::sin(w) / w;
}

cplx sinc_minus_one(cplx w) {
    if (std::abs(w) < kSeriesRadius)
        return w * w * alternating_series(w, 1, 1);
    return std::sin(w) / w - 1.0;
}

cplx cosc(cplx w) {
    if (std::abs(w) < kSeriesRadius)
        return -2.0 * alternating_series(w, 1, 0);
    return (1.0 - std::cos(w)) / (0.5 * w * w);
}

cplx cosc_minus_one(cplx w) {
    if (std::abs(w) < kSeriesRadius)
        return -2.0 * w * w * alternating_series(w, 2, 0);
    return (1.0 - std::cos(w)) / (0.5 * w * w) - 1.0;
}

cplx sinm(cplx w) {
    if (std::abs(w) < kSeriesRadius)
        return alternating_series(w, 1, 1);
    return (std::sin(w) - w) / (w * w * w);
}

} // namespace qglab
