#pragma once

// Self-validation suites run by `pgt validate`, and the exponent enumeration
// of chamber units from a certified fundamental pair.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pgt/abel.hpp"
#include "pgt/theta.hpp"

namespace pgt {

/// Units of O_F, up to sign, with chamber point in (1, T1] x (1, T2], as a
/// count per canonical characteristic polynomial. Built from powers
/// e1^i e2^j of the certified fundamental pair.
inline std::map<CubicPoly, int> chamber_units_by_exponents(const CubicPoly& field_poly, double t1, double t2) {
    const NumberFieldCubic F(field_poly);
    const OrderLattice ok = maximal_order(F);
    std::optional<FieldElem> hint;
    if (std::llabs(field_poly.c) == 1) hint = NumberFieldCubic::gen();
    const UnitGroupData ud = fundamental_units(F, ok, hint);
    const Vec3d l1 = ud.log_vector(0), l2 = ud.log_vector(1);
    // chamber units have all |log sigma_j| <= log X
    const double bound = std::log(coefficient_box(t1, t2).x) + 1e-9;
    const double det = l1[0] * l2[1] - l2[0] * l1[1];
    const long imax = static_cast<long>(std::ceil(bound * (std::fabs(l2[1]) + std::fabs(l2[0])) / std::fabs(det))) + 1;
    const long jmax = static_cast<long>(std::ceil(bound * (std::fabs(l1[1]) + std::fabs(l1[0])) / std::fabs(det))) + 1;
    std::map<CubicPoly, int> out;
    for (long i = -imax; i <= imax; ++i)
        for (long j = -jmax; j <= jmax; ++j) {
            if (i == 0 && j == 0) continue;
            double worst = 0;
            for (int k = 0; k < 3; ++k) worst = std::max(worst, std::fabs(double(i) * l1[k] + double(j) * l2[k]));
            if (worst > bound + 1e-6) continue;
            const FieldElem u = F.mul(F.pow(ud.fundamental[0], i), F.pow(ud.fundamental[1], j));
            const CubicPoly p = F.charpoly_integral(u);
            if (has_opposite_roots(p)) continue;
            if (decide_chamber(p, t1, t2).inside) ++out[canonical_sign_rep(p)];
        }
    return out;
}

/// Same count read off enumeration records: each record of the field counts
/// once per root of its polynomial lying in O_F.
inline std::map<CubicPoly, int> chamber_units_from_records(const std::vector<PolyClassRecord>& records, const mpz_class& disc_field) {
    std::map<CubicPoly, int> out;
    for (const auto& r : records)
        if (r.disc_field == disc_field) out[r.poly] += r.orders.back().roots_in_order;
    return out;
}

// ---------------------------------------------------------------------------

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct ValidateOptions {
    bool full = false;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool mutate_conductor = false;
    ThetaCaps caps;
};

namespace detail {

inline SuiteResult timed(const std::string& name, const std::function<std::string()>& body) {
    SuiteResult r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        r.detail = body();
        r.pass = r.detail.rfind("ok", 0) == 0;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace detail

/// eta(reciprocal) = -eta and eta = 0 when p(1) p(-1) = 0, over |a|, |b| <= bound.
inline SuiteResult suite_eta(long bound) {
    return detail::timed("eta-antisymmetry", [bound]() -> std::string {
        long checked = 0, parabolic = 0;
        for (long a = -bound; a <= bound; ++a)
            for (long b = -bound; b <= bound; ++b)
                for (long c : {-1L, 1L}) {
                    const CubicPoly p{a, b, c};
                    if (p.eval_at_one() == 0 || p.eval_at_minus_one() == 0) {
                        ++parabolic;
                        if (eta_trace_exact(p) != 0) return "parabolic eta nonzero at " + p.to_string();
                    }
                    if (!is_admissible_unit_poly(p)) continue;
                    ++checked;
                    if (eta_trace_exact(reciprocal_poly(p)) != -eta_trace_exact(p)) return "failed at " + p.to_string();
                }
        return "ok: " + std::to_string(checked) + " admissible, " + std::to_string(parabolic) + " parabolic";
    });
}

/// Normalized eta deep in the chamber, at seeded random points. The value is
/// (1 - x1^{-2})(1 - alpha1^{-2/3})(1 - x3^2), so the 0.999 band needs
/// alpha1 >= 10^{4.5}; it is checked from 10^5 on.
inline SuiteResult suite_eta_limit(std::uint64_t seed) {
    return detail::timed("eta-limit", [seed]() -> std::string {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0, 1);
        for (auto [lo, band] : {std::pair{100.0, 0.9}, std::pair{1e5, 0.999}}) {
            for (int i = 0; i < 1000; ++i) {
                // log-uniform on [lo, 1e3 lo]
                const double a1 = lo * std::pow(1e3, u(rng)), a2 = lo * std::pow(1e3, u(rng));
                const double v = eta_normalized(a1, a2);
                if (!(v >= band && v <= 1.0)) {
                    std::ostringstream os;
                    os << "value " << v << " at (" << a1 << ", " << a2 << ")";
                    return os.str();
                }
            }
        }
        return "ok: 2000 points";
    });
}

inline SuiteResult suite_abel() {
    return detail::timed("abel-round-trip", []() -> std::string {
        SampledFunction e, c;
        e.value = [](double x) { return std::exp(-x); };
        e.derivative = [](double x) { return -std::exp(-x); };
        e.decay = e.derivative_decay = exponential_decay(10);
        c.value = [](double x) { return std::pow(1 + x, -3); };
        c.derivative = [](double x) { return -3 * std::pow(1 + x, -4); };
        c.decay = Decay{1, 3};
        c.derivative_decay = Decay{3, 4};
        double fwd = 0;
        for (int i = 0; i <= 100; ++i) {
            const double y = 0.1 * i;
            fwd = std::max(fwd, std::fabs(abel_forward(e, y).value - std::sqrt(std::numbers::pi) * std::exp(-y)));
        }
        if (fwd > 1e-8) return "forward error " + std::to_string(fwd);
        AbelOptions inner;
        inner.abs_tol = 1e-12;
        double worst = 0, worst_fd = 0;
        for (const SampledFunction* phi : {&e, &c}) {
            SampledFunction q = abel_forward_function(*phi, inner);
            for (int i = 0; i <= 100; ++i) {
                const double x = 0.1 * i;
                worst = std::max(worst, std::fabs(abel_inverse(q, x).value - phi->value(x)));
            }
            q.derivative = nullptr;
            for (int i = 0; i <= 20; ++i) {
                const double x = 0.5 * i;
                worst_fd = std::max(worst_fd, std::fabs(abel_inverse(q, x).value - phi->value(x)));
            }
        }
        std::ostringstream os;
        os << (worst <= 1e-6 && worst_fd <= 1e-5 ? "ok" : "failed") << ": forward " << fwd << ", round trip " << worst
           << ", finite-difference round trip " << worst_fd;
        return os.str();
    });
}

/// Conductor formula against direct enumeration for every order of the
/// T = (t, t) sweep with |disc| <= caps.direct_disc.
inline SuiteResult suite_dual_class_numbers(double t, const ValidateOptions& opt) {
    return detail::timed("dual-class-numbers", [t, &opt]() -> std::string {
        ThetaQuery q;
        q.t1 = q.t2 = t;
        q.caps = opt.caps;
        q.threads = opt.threads;
        q.dual_check = true;
        q.drop_unit_index = opt.mutate_conductor;
        const ThetaResult r = enumerate_admissible(q);
        if (!r.flagged.empty()) return "flagged: " + r.warnings.front();
        long compared = 0, orders = 0;
        for (const auto& rec : r.records)
            for (const auto& o : rec.orders) {
                ++orders;
                if (o.method == ClassMethod::both) ++compared;
            }
        return "ok: " + std::to_string(compared) + " of " + std::to_string(orders) + " orders compared over " +
               std::to_string(r.records.size()) + " polynomials";
    });
}

inline const std::vector<std::pair<CubicPoly, long>>& smallest_fields() {
    static const std::vector<std::pair<CubicPoly, long>> f = {
        {{1, -2, -1}, 49}, {{0, -3, 1}, 81}, {{1, -3, -1}, 148}, {{1, -4, 1}, 169}, {{0, -4, 1}, 229}};
    return f;
}

inline SuiteResult suite_unit_completeness(double t, size_t n_fields, const ValidateOptions& opt) {
    return detail::timed("unit-completeness", [t, n_fields, &opt]() -> std::string {
        ThetaQuery q;
        q.t1 = q.t2 = t;
        q.caps = opt.caps;
        q.threads = opt.threads;
        const ThetaResult r = enumerate_admissible(q);
        long units = 0;
        for (size_t i = 0; i < n_fields && i < smallest_fields().size(); ++i) {
            const auto& [poly, disc] = smallest_fields()[i];
            const auto a = chamber_units_from_records(r.records, disc);
            const auto b = chamber_units_by_exponents(poly, t, t);
            if (a != b) return "mismatch for the field of discriminant " + std::to_string(disc);
            for (const auto& [p, n] : a) units += n;
        }
        return "ok: " + std::to_string(units) + " chamber units in " + std::to_string(n_fields) + " fields";
    });
}

/// The quick profile covers all suites at reduced size; the full profile
/// includes the T = (15, 15) dual sweep and T = (20, 20) completeness.
inline std::vector<SuiteResult> run_validation(const ValidateOptions& opt, const std::function<void(const SuiteResult&)>& on_done = {}) {
    std::vector<SuiteResult> out;
    auto add = [&](SuiteResult r) {
        if (on_done) on_done(r);
        out.push_back(std::move(r));
    };
    add(suite_eta(opt.full ? 50 : 20));
    add(suite_eta_limit(opt.seed));
    add(suite_abel());
    add(suite_dual_class_numbers(opt.full ? 15 : 8, opt));
    add(suite_unit_completeness(opt.full ? 20 : 10, opt.full ? 5 : 2, opt));
    return out;
}

}  // namespace pgt
