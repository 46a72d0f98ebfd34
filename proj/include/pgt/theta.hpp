#pragma once

// Enumeration of admissible unit polynomials in the chamber box, per-polynomial
// dossiers (orders, class numbers, regulators) and the summatory function
// theta(T1, T2), plus partial sums of the attached Dirichlet series.

#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pgt/class_number.hpp"
#include "pgt/cubic_core.hpp"
#include "pgt/errors.hpp"
#include "pgt/number_field.hpp"
#include "pgt/order.hpp"
#include "pgt/units.hpp"

namespace pgt {

struct ThetaCaps {
    double box_points = 2e6;      ///< lattice points per box search (units, principality)
    long direct_disc = 20000;     ///< |disc| cap of the direct class-number check
    double quotient_literal = 2e6;  ///< literal enumeration cap of (O/f)^x
};

struct ThetaQuery {
    double t1 = 10, t2 = 10;
    Precision precision = kDefaultPrecision;
    ThetaCaps caps;
    unsigned threads = 1;
    bool dual_check = false;  ///< also run the direct class-number count where allowed
    bool drop_unit_index = false;  ///< mutation hook, see ConductorFormulaOptions
};

/// Per-polynomial dossier.
struct PolyClassRecord {
    CubicPoly poly;
    mpz_class disc_poly, disc_field, index;
    std::array<HiReal, 3> roots;  ///< by decreasing absolute value
    std::array<int, 3> signs{};
    HiReal alpha1, alpha2, l_value;
    int m = 1;
    mpz_class eta;
    HiReal regulator_field;
    long h_field = 1;
    std::vector<OrderClassData> orders;  ///< every order containing Z[lambda]
    HiReal contribution;                 ///< m * sum h(O) R(O)
    bool straddled = false;              ///< chamber boundary undecided at the precision cap

    std::array<double, 3> moduli() const {
        return {std::fabs(roots[0].value), std::fabs(roots[1].value), std::fabs(roots[2].value)};
    }
};

enum class FlagKind { cap_exceeded, search_exhausted, precision_exhausted, other };

inline const char* to_string(FlagKind k) {
    switch (k) {
        case FlagKind::cap_exceeded: return "cap-exceeded";
        case FlagKind::search_exhausted: return "search-exhausted";
        case FlagKind::precision_exhausted: return "precision-exhausted";
        case FlagKind::other: return "error";
    }
    return "?";
}

/// A polynomial inside the chamber whose dossier could not be completed.
struct FlaggedPoly {
    CubicPoly poly;
    FlagKind kind = FlagKind::other;
    std::string reason;
};

struct EnumerationStats {
    long box_size = 0;
    long admissible = 0;
    long not_split_regular = 0;
    long certified_checks = 0;  ///< polynomials passed to the certified chamber test
    long in_chamber = 0;
};

struct ThetaResult {
    double t1 = 0, t2 = 0;
    mpq_class theta_exact = 0;  ///< exact sum of the decimal contributions
    double theta = 0;
    long term_count = 0;
    double ratio = 0;
    std::vector<PolyClassRecord> records;
    std::vector<FlaggedPoly> flagged;
    std::vector<std::string> warnings;
    EnumerationStats stats;
};

// ---------------------------------------------------------------------------

struct CoefficientBox {
    double x = 1;
    long a_max = 0, b_max = 0;
};

/// |a| <= X + 2, |b| <= 2X + 1 with X = T1^{2/3} T2^{1/2}.
inline CoefficientBox coefficient_box(double t1, double t2) {
    if (!(t1 > 1 && t2 > 1)) throw DomainError("coefficient_box: thresholds must exceed 1");
    CoefficientBox b;
    b.x = std::pow(t1, 2.0 / 3.0) * std::sqrt(t2);
    // guard the floor against a rounding-down of exact values
    b.a_max = static_cast<long>(std::floor(b.x + 2 + 1e-9));
    b.b_max = static_cast<long>(std::floor(2 * b.x + 1 + 1e-9));
    return b;
}

namespace detail {

/// Approximate chamber coordinates from long-double roots, for discarding
/// polynomials far from the chamber before the certified test.
inline std::optional<std::array<long double, 2>> approx_alpha(const CubicPoly& p) {
    const long double a = p.a, b = p.b, c = p.c;
    const long double pp = b - a * a / 3, qq = 2 * a * a * a / 27 - a * b / 3 + c;
    if (!(pp < 0)) return std::nullopt;
    const long double r = 2 * std::sqrt(-pp / 3);
    long double arg = 3 * qq / (pp * r);
    arg = std::clamp(arg, -1.0L, 1.0L);
    const long double phi = std::acos(arg);
    std::array<long double, 3> x;
    for (int k = 0; k < 3; ++k) {
        x[k] = r * std::cos(phi / 3 - 2 * std::numbers::pi_v<long double> * k / 3) - a / 3;
        for (int it = 0; it < 3; ++it) {
            const long double f = ((x[k] + a) * x[k] + b) * x[k] + c;
            const long double df = (3 * x[k] + 2 * a) * x[k] + b;
            if (df == 0) break;
            x[k] -= f / df;
        }
    }
    std::array<long double, 3> m = {std::fabs(x[0]), std::fabs(x[1]), std::fabs(x[2])};
    std::sort(m.begin(), m.end(), std::greater<>());
    if (m[1] == 0 || m[2] == 0) return std::nullopt;
    return std::array<long double, 2>{m[0] * m[2] / (m[1] * m[1]), (m[1] / m[2]) * (m[1] / m[2])};
}

/// False only when p is certainly outside the chamber box by a wide margin.
inline bool maybe_in_chamber(const CubicPoly& p, double t1, double t2) {
    const auto al = approx_alpha(p);
    if (!al) return true;
    const long double tol = 1e-6L;
    const auto [a1, a2] = *al;
    if (a1 < 1 - tol || a2 < 1 - tol) return false;
    if (a1 > t1 * (1 + tol) || a2 > t2 * (1 + tol)) return false;
    return true;
}

}  // namespace detail

struct DossierOptions {
    Precision precision = kDefaultPrecision;
    ThetaCaps caps;
    bool dual_check = false;
    bool drop_unit_index = false;
};

/// Orders, class numbers and regulators for one admissible polynomial.
inline PolyClassRecord build_record(const CubicPoly& p, const ChamberDecision& cd, const DossierOptions& opt = {}) {
    PolyClassRecord r;
    r.poly = p;
    r.disc_poly = discriminant(p);
    for (int i = 0; i < 3; ++i) {
        r.roots[i] = HiReal::from(cd.embeddings.rho[i]);
        r.signs[i] = cd.embeddings.sign[i];
    }
    r.alpha1 = HiReal::from(cd.chamber.alpha1);
    r.alpha2 = HiReal::from(cd.chamber.alpha2);
    r.l_value = HiReal::from(cd.chamber.l_value);
    r.straddled = cd.straddled;
    r.m = galois_multiplicity(p);
    r.eta = eta_trace_exact(p);

    const NumberFieldCubic F(p, opt.precision);
    const OrderLattice z = equation_order(F);
    const OrderLattice ok = maximal_order(F, z);
    r.disc_field = ok.disc;
    r.index = lattice_index(ok.lattice, z.lattice);

    UnitOptions uo;
    uo.cap = opt.caps.box_points;
    const UnitGroupData uf = fundamental_units(F, ok, NumberFieldCubic::gen(), uo);
    PrincipalOptions po;
    po.cap = opt.caps.box_points;
    PrincipalTester pt(F, uf, po);
    r.h_field = class_group_maximal(F, uf, pt).h;
    r.regulator_field = HiReal::from(uf.regulator);

    const std::vector<FieldElem> conj = galois_conjugates(F);
    ConductorFormulaOptions cfo;
    cfo.quotient.literal_cap = opt.caps.quotient_literal;
    cfo.drop_unit_index = opt.drop_unit_index;
    Interval total = Interval::from_long(0, opt.precision);
    for (const auto& o : intermediate_orders(F, z, ok)) {
        OrderClassData d;
        d.order = o;
        d.index_in_maximal = lattice_index(ok.lattice, o.lattice);
        d.order.index_in_maximal = d.index_in_maximal;
        d.unit_index = unit_index(F, uf, o);
        d.h = class_number_order(F, o, ok, r.h_field, d.unit_index, cfo);
        const Interval reg = uf.regulator * Interval::from_long(d.unit_index, opt.precision);
        d.R = HiReal::from(reg);
        d.roots_in_order = 1;
        for (const auto& x : conj)
            if (o.lattice.contains(x)) ++d.roots_in_order;
        d.method = ClassMethod::conductor_formula;
        if (opt.dual_check && abs(o.disc) <= opt.caps.direct_disc) {
            DirectClassOptions dco;
            dco.disc_cap = opt.caps.direct_disc;
            dco.principal = po;
            const UnitGroupData us = o.lattice == ok.lattice ? uf : sub_unit_group(F, uf, o);
            const DirectClassResult dr = class_number_order_direct(F, us, dco);
            if (dr.h != d.h)
                throw NonIntegralResult("class numbers disagree for " + p.to_string() + " order of disc " + o.disc.get_str() +
                                        ": formula " + std::to_string(d.h) + ", direct " + std::to_string(dr.h));
            d.method = ClassMethod::both;
        }
        total = total + reg * Interval::from_long(d.h, opt.precision);
        r.orders.push_back(std::move(d));
    }
    r.contribution = HiReal::from(total * Interval::from_long(r.m, opt.precision));
    return r;
}

/// Cache hooks: `lookup` may serve a record for a canonical polynomial;
/// `store` receives each freshly built record, always from the calling
/// thread and in record order.
struct RecordStore {
    std::function<std::optional<PolyClassRecord>(const CubicPoly&)> lookup;
    std::function<void(const PolyClassRecord&)> store;
};

namespace detail {

struct StripeOutput {
    std::vector<PolyClassRecord> records;
    std::vector<bool> fresh;
    std::vector<FlaggedPoly> flagged;
    EnumerationStats stats;
};

inline void scan_stripe(long a, const ThetaQuery& q, const CoefficientBox& box, const RecordStore* cache,
                        StripeOutput& out) {
    DossierOptions dopt;
    dopt.precision = q.precision;
    dopt.caps = q.caps;
    dopt.dual_check = q.dual_check;
    dopt.drop_unit_index = q.drop_unit_index;
    for (long b = -box.b_max; b <= box.b_max; ++b)
        for (long c : {-1L, 1L}) {
            ++out.stats.box_size;
            const CubicPoly p{a, b, c};
            if (!is_admissible_unit_poly(p)) continue;
            ++out.stats.admissible;
            if (!(canonical_sign_rep(p) == p)) continue;
            if (has_opposite_roots(p)) {
                ++out.stats.not_split_regular;
                continue;
            }
            if (!maybe_in_chamber(p, q.t1, q.t2)) continue;
            ++out.stats.certified_checks;
            try {
                const ChamberDecision cd = decide_chamber(p, q.t1, q.t2, q.precision);
                if (!cd.inside) continue;
                ++out.stats.in_chamber;
                if (cache && cache->lookup) {
                    if (auto hit = cache->lookup(p)) {
                        out.records.push_back(std::move(*hit));
                        out.fresh.push_back(false);
                        continue;
                    }
                }
                out.records.push_back(build_record(p, cd, dopt));
                out.fresh.push_back(true);
            } catch (const NonIntegralResult&) {
                throw;
            } catch (const CapExceeded& e) {
                out.flagged.push_back({p, FlagKind::cap_exceeded, e.what()});
            } catch (const BoxTooLarge& e) {
                out.flagged.push_back({p, FlagKind::cap_exceeded, e.what()});
            } catch (const SearchExhausted& e) {
                out.flagged.push_back({p, FlagKind::search_exhausted, e.what()});
            } catch (const PrecisionExhausted& e) {
                out.flagged.push_back({p, FlagKind::precision_exhausted, e.what()});
            } catch (const Error& e) {
                out.flagged.push_back({p, FlagKind::other, e.what()});
            }
        }
}

inline bool poly_less(const CubicPoly& x, const CubicPoly& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.c < y.c;
}

}  // namespace detail

/// All chamber records of the coefficient box, sorted by (a, b, c).
inline ThetaResult enumerate_admissible(const ThetaQuery& q, const RecordStore* cache = nullptr) {
    if (!(q.t1 > 1 && q.t2 > 1)) throw DomainError("theta: thresholds must exceed 1");
    const CoefficientBox box = coefficient_box(q.t1, q.t2);
    const long n = 2 * box.a_max + 1;
    std::vector<detail::StripeOutput> stripes(static_cast<size_t>(n));
    std::atomic<long> next{0};
    std::vector<std::exception_ptr> errors(std::max(1u, q.threads));
    auto worker = [&](unsigned id) {
        try {
            for (long i = next++; i < n; i = next++) detail::scan_stripe(i - box.a_max, q, box, cache, stripes[static_cast<size_t>(i)]);
        } catch (...) {
            errors[id] = std::current_exception();
            next = n;
        }
    };
    const unsigned nt = std::max(1u, q.threads);
    if (nt == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    ThetaResult res;
    res.t1 = q.t1;
    res.t2 = q.t2;
    for (auto& s : stripes) {
        for (size_t i = 0; i < s.records.size(); ++i) {
            if (cache && cache->store && s.fresh[i]) cache->store(s.records[i]);
            res.records.push_back(std::move(s.records[i]));
        }
        res.flagged.insert(res.flagged.end(), s.flagged.begin(), s.flagged.end());
        res.stats.box_size += s.stats.box_size;
        res.stats.admissible += s.stats.admissible;
        res.stats.not_split_regular += s.stats.not_split_regular;
        res.stats.certified_checks += s.stats.certified_checks;
        res.stats.in_chamber += s.stats.in_chamber;
    }
    // stripes are visited in increasing a and b, c in increasing order
    std::stable_sort(res.records.begin(), res.records.end(),
                     [](const PolyClassRecord& x, const PolyClassRecord& y) { return detail::poly_less(x.poly, y.poly); });
    for (const auto& r : res.records)
        if (r.straddled) res.warnings.push_back("chamber boundary undecided for " + r.poly.to_string());
    for (const auto& f : res.flagged)
        res.warnings.push_back(std::string(to_string(f.kind)) + ": " + f.poly.to_string() + ": " + f.reason);
    return res;
}

inline double theta_normalizer(double t1, double t2) { return 16.0 / std::sqrt(3.0) * t1 * t2; }

/// Fills theta, term count and ratio from the records.
inline void accumulate_theta(ThetaResult& res) {
    res.theta_exact = 0;
    for (const auto& r : res.records) res.theta_exact += r.contribution.exact();
    res.theta = res.theta_exact.get_d();
    res.term_count = static_cast<long>(res.records.size());
    res.ratio = res.theta / theta_normalizer(res.t1, res.t2);
}

inline ThetaResult theta(const ThetaQuery& q, const RecordStore* cache = nullptr) {
    ThetaResult res = enumerate_admissible(q, cache);
    accumulate_theta(res);
    return res;
}

// ---------------------------------------------------------------------------
// Dirichlet series

enum class WeightMode { theta_weight, index_weight };

/// Flat volume lambda_gamma supplied by the caller for the index weight.
using FlatVolume = std::function<double(const PolyClassRecord&)>;

/// eta(p) alpha1^{-4/3} alpha2^{-1}.
inline double eta_normalized(const PolyClassRecord& r) {
    return r.eta.get_d() * std::pow(r.alpha1.value, -4.0 / 3.0) / r.alpha2.value;
}

inline double dirichlet_weight(const PolyClassRecord& r, WeightMode mode, const FlatVolume& lambda_flat) {
    if (mode == WeightMode::theta_weight) return r.contribution.value;
    if (!lambda_flat) throw DomainError("dirichlet: index weight needs a flat volume");
    SignVector s;
    s.e = r.signs;
    return r.m * index_factor(lambda_flat(r), r.moduli(), s);
}

inline double dirichlet_term(const PolyClassRecord& r, int j, double s1, double s2, WeightMode mode = WeightMode::theta_weight,
                             const FlatVolume& lambda_flat = {}) {
    if (j < 0) throw DomainError("dirichlet: j must be non-negative");
    return dirichlet_weight(r, mode, lambda_flat) * eta_normalized(r) * std::pow(r.l_value.value, j + 1) *
           std::pow(r.alpha1.value, -s1) * std::pow(r.alpha2.value, -s2);
}

/// Sum of dirichlet_term over the records, in record order.
inline double dirichlet_partial(const std::vector<PolyClassRecord>& records, int j, double s1, double s2,
                                WeightMode mode = WeightMode::theta_weight, const FlatVolume& lambda_flat = {}) {
    double sum = 0;
    for (const auto& r : records) sum += dirichlet_term(r, j, s1, s2, mode, lambda_flat);
    return sum;
}

}  // namespace pgt
