#pragma once

// Abel transform A(phi)(y) = int_R phi(y + x^2) dx and its inversion
// phi = -(1/pi) A(q'), by adaptive Gauss-Kronrod quadrature in x with a
// tail bound from decay metadata.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "pgt/errors.hpp"

namespace pgt {

/// |f(x)| <= c (1 + x)^{-mu} on [0, inf).
struct Decay {
    double c = 1;
    double mu = 1;
};

/// Decay constant of e^{-x} for a chosen exponent: sup (1+x)^mu e^{-x}.
inline Decay exponential_decay(double mu) {
    // maximum at x = mu - 1
    return {std::exp(mu * std::log(mu) - (mu - 1)), mu};
}

struct SampledFunction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;  ///< optional analytic derivative
    std::optional<Decay> decay;
    std::optional<Decay> derivative_decay;
    int smoothness = 1;  ///< claimed order of continuous derivatives
};

struct AbelOptions {
    double abs_tol = 1e-10;
    unsigned max_depth = 12;
    double rel_tol = 1e-12;  ///< per-panel relative target handed to the Kronrod rule
};

struct AbelValue {
    double value = 0;
    double quadrature_error = 0;  ///< estimate from the Kronrod/Gauss difference
    double tail_bound = 0;        ///< certified bound on the truncated tail
    double cutoff = 0;            ///< integration range [0, cutoff] in x
    bool finite_difference = false;
    double nominal_tolerance = 0;  ///< accuracy the caller may expect
};

namespace detail {

/// int_X^inf c (1 + y + x^2)^{-mu} dx <= c X^{1-2mu} / (2mu - 1).
inline double abel_tail(const Decay& d, double x) { return d.c * std::pow(x, 1 - 2 * d.mu) / (2 * d.mu - 1); }

/// 2 int_0^inf f(y + x^2) dx.
inline AbelValue abel_integral(const std::function<double(double)>& f, const Decay& d, double y, const AbelOptions& opt) {
    if (!(d.mu > 0.5)) throw TailBoundUnavailable("abel: decay exponent must exceed 1/2");
    AbelValue out;
    // cutoff with 2 * tail <= abs_tol / 4
    const double target = opt.abs_tol / 8;
    double x = std::pow(d.c / ((2 * d.mu - 1) * target), 1.0 / (2 * d.mu - 1));
    x = std::max(x, 1.0);
    out.cutoff = x;
    out.tail_bound = 2 * abel_tail(d, x);
    const auto g = [&](double t) { return f(y + t * t); };
    for (double rel = opt.rel_tol;; rel /= 100) {
        double sum = 0, err = 0;
        double a = 0, b = 1;
        while (a < x) {
            b = std::min(b, x);
            double e = 0;
            sum += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, a, b, opt.max_depth, rel, &e);
            err += e;
            a = b;
            b *= 2;
        }
        out.value = 2 * sum;
        out.quadrature_error = 2 * err;
        if (out.quadrature_error <= opt.abs_tol / 2 && std::isfinite(out.value)) break;
        if (rel < 1e-15) {
            char msg[96];
            std::snprintf(msg, sizeof msg, "abel: quadrature error %.3g at y = %.17g", out.quadrature_error, y);
            throw QuadratureNotConverged(msg);
        }
    }
    out.nominal_tolerance = opt.abs_tol;
    return out;
}

}  // namespace detail

inline AbelValue abel_forward(const SampledFunction& phi, double y, const AbelOptions& opt = {}) {
    if (!(y >= 0)) throw DomainError("abel_forward: y must be non-negative");
    if (!phi.decay) throw TailBoundUnavailable("abel_forward: decay metadata missing");
    return detail::abel_integral(phi.value, *phi.decay, y, opt);
}

/// Finite-difference step at y.
inline double abel_fd_step(double y) { return std::max(1e-6, 1e-8 * (1 + y)); }

/// Second-order difference quotient of q at y >= 0; one-sided near 0.
inline double fd_derivative(const std::function<double(double)>& q, double y) {
    const double h = abel_fd_step(y);
    if (y >= h) return (q(y + h) - q(y - h)) / (2 * h);
    return (-3 * q(y) + 4 * q(y + h) - q(y + 2 * h)) / (2 * h);
}

/// -(1/pi) A(q')(x).
inline AbelValue abel_inverse(const SampledFunction& q, double x, const AbelOptions& opt = {}) {
    if (!(x >= 0)) throw DomainError("abel_inverse: x must be non-negative");
    if (q.smoothness < 1) throw DerivativeUnavailable("abel_inverse: q is not continuously differentiable");
    if (!q.derivative_decay) throw TailBoundUnavailable("abel_inverse: decay metadata of q' missing");
    const bool fd = !q.derivative;
    if (fd && !q.value) throw DerivativeUnavailable("abel_inverse: neither q nor q' available");
    const std::function<double(double)> dq = fd ? std::function<double(double)>([&](double y) { return fd_derivative(q.value, y); })
                                                : q.derivative;
    AbelOptions o = opt;
    if (fd) {
        // difference quotients amplify the noise of q by 1/h
        o.abs_tol = std::max(opt.abs_tol, 1e-5);
        o.rel_tol = std::max(opt.rel_tol, 1e-8);
    }
    AbelValue v = detail::abel_integral(dq, *q.derivative_decay, x, o);
    v.value *= -1 / std::numbers::pi;
    v.quadrature_error /= std::numbers::pi;
    v.tail_bound /= std::numbers::pi;
    v.finite_difference = fd;
    v.nominal_tolerance = fd ? 1e-5 : 1e-6;
    return v;
}

/// q = A(phi) as a sampled function; its derivative is A(phi') when phi'
/// is available, and q, q' inherit the decay exponent shifted by 1/2.
inline SampledFunction abel_forward_function(const SampledFunction& phi, const AbelOptions& opt = {}) {
    if (!phi.decay) throw TailBoundUnavailable("abel_forward_function: decay metadata missing");
    SampledFunction q;
    q.value = [phi, opt](double y) { return abel_forward(phi, y, opt).value; };
    // int_R c (1 + y + x^2)^{-mu} dx = c sqrt(pi) Gamma(mu - 1/2) / Gamma(mu) (1 + y)^{1/2 - mu}
    auto shifted = [](const Decay& d) {
        return Decay{d.c * std::sqrt(std::numbers::pi) * std::tgamma(d.mu - 0.5) / std::tgamma(d.mu), d.mu - 0.5};
    };
    q.decay = shifted(*phi.decay);
    q.smoothness = phi.smoothness;
    if (phi.derivative && phi.derivative_decay) {
        SampledFunction dphi;
        dphi.value = phi.derivative;
        dphi.decay = phi.derivative_decay;
        q.derivative = [dphi, opt](double y) { return abel_forward(dphi, y, opt).value; };
        q.derivative_decay = shifted(*phi.derivative_decay);
    }
    return q;
}

}  // namespace pgt
