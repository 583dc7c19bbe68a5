#pragma once

#include <complex>
#include <variant>
#include <vector>

namespace qglab {

using cplx = std::complex<double>;

/// a (1 - x/ell) + b x/ell.
struct LinearProfile {
    cplx a;
    cplx b;
};

/// One trigonometric component s sin(kappa x) + c cos(kappa x); kappa may be complex.
///
/// With `subtracted` set the component is s (sin kappa x - kappa x) +
/// c (cos kappa x - 1). Resolvent solutions at small |kappa| carry large
/// cancelling coefficients; this form keeps their evaluation accurate.
struct TrigMode {
    cplx wavenumber;
    cplx sin_coef;
    cplx cos_coef;
    bool subtracted = false;
};

/// c0 + c1 x/ell + sum of trigonometric modes.
///
/// The closed-form edge resolvent solution has a single mode with
/// wavenumber k'; probe bubbles sin(m pi x/ell) and sums of resolvent
/// outputs carry a few more. Everything here is integrated exactly.
struct SinusoidalProfile {
    cplx c0;
    cplx c1;
    std::vector<TrigMode> modes;

    /// Solution of -nu psi'' - k^2 psi = phi_j (1 - x/ell) + phi_n x/ell on
    /// [0, ell] with psi(0) = psi_j and psi(ell) = psi_n, where k = sqrt(nu) k'.
    static SinusoidalProfile from_resolvent(cplx psi_j, cplx psi_n, cplx phi_j, cplx phi_n, cplx k_prime, double ell,
                                            int nu);
    /// amplitude sin(m pi x/ell).
    static SinusoidalProfile bubble(cplx amplitude, int m, double ell);
};

/// m+1 equally spaced samples on [0, ell], optionally with derivative samples.
/// Between nodes the profile is the cubic Hermite interpolant; without
/// derivative samples, slopes come from finite differences.
struct SampledProfile {
    std::vector<cplx> values;
    std::vector<cplx> derivatives; ///< empty or same length as values
};

using EdgeProfile = std::variant<LinearProfile, SinusoidalProfile, SampledProfile>;

bool is_analytic(const EdgeProfile& p) noexcept;
bool has_derivative(const EdgeProfile& p) noexcept;

cplx evaluate(const EdgeProfile& p, double x, double ell);
/// d/dx; throws MissingDerivative for Sampled without derivative data.
cplx derivative(const EdgeProfile& p, double x, double ell);
/// d^2/dx^2 for Linear and Sinusoidal profiles.
cplx second_derivative(const EdgeProfile& p, double x, double ell);

/// int_0^ell conj(p) q dx.
cplx inner(const EdgeProfile& p, const EdgeProfile& q, double ell);
/// int_0^ell conj(p') q' dx.
cplx derivative_inner(const EdgeProfile& p, const EdgeProfile& q, double ell);
/// int_0^ell w(x) p(x) dx with w = 1 - x/ell (from_tail) or x/ell.
cplx hat_moment(const EdgeProfile& p, double ell, bool from_tail);

/// alpha p + beta q. Analytic inputs stay analytic (modes of equal
/// wavenumber are merged); any Sampled input gives a Sampled result on the
/// finer of the two grids.
EdgeProfile combine(cplx alpha, const EdgeProfile& p, cplx beta, const EdgeProfile& q, double ell);

/// Converts any analytic profile to the Sinusoidal form.
SinusoidalProfile to_sinusoidal(const EdgeProfile& p);
/// Same function with every subtracted mode rewritten as a plain one.
SinusoidalProfile plain_form(const SinusoidalProfile& p, double ell);

// Entire functions of w, by series for |w| < 0.5.
cplx sinc(cplx w);            ///< sin w / w
cplx sinc_minus_one(cplx w);  ///< sin w / w - 1
cplx cosc(cplx w);            ///< (1 - cos w) / (w^2/2)
cplx cosc_minus_one(cplx w);  ///< (1 - cos w) / (w^2/2) - 1
cplx sinm(cplx w);            ///< (sin w - w) / w^3

/// int_0^1 s^p e^{w s} ds, stable for small |w|.
cplx exp_moment(int p, cplx w);

} // namespace qglab
