#pragma once

// Monic integer cubics as characteristic polynomials of units: certified root
// isolation, Weyl-chamber invariants, the twisting character and the
// split-Cartan determinant.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgt/errors.hpp"
#include "pgt/numeric/integer.hpp"
#include "pgt/numeric/interval.hpp"

namespace pgt {

/// p(x) = x^3 + a x^2 + b x + c.
struct CubicPoly {
    std::int64_t a = 0, b = 0, c = 0;

    mpz_class eval(const mpz_class& x) const { return ((x + a) * x + b) * x + c; }
    std::int64_t eval_at_one() const { return 1 + a + b + c; }
    std::int64_t eval_at_minus_one() const { return -1 + a - b + c; }

    /// (a, b, c) -> (-a, b, -c): the polynomial of -lambda.
    CubicPoly mirror() const { return {-a, b, -c}; }

    std::string to_string() const {
        auto term = [](std::int64_t v, const char* x) {
            if (v == 0) return std::string();
            std::string s = v < 0 ? " - " : " + ";
            std::int64_t m = v < 0 ? -v : v;
            if (m != 1 || x[0] == '\0') s += std::to_string(m);
            return s + x;
        };
        return "x^3" + term(a, "x^2") + term(b, "x") + term(c, "");
    }

    friend auto operator<=>(const CubicPoly&, const CubicPoly&) = default;
};

/// Diagonal signs t in T_sp attached to the split part, one per embedding.
struct SignVector {
    std::array<int, 3> e{1, 1, 1};
};

/// Certified enclosures of the three real roots, sorted by decreasing
/// absolute value.
struct EmbeddingTriple {
    std::array<Interval, 3> rho;
    std::array<int, 3> sign{};
    Precision precision = kDefaultPrecision;

    std::array<double, 3> approx() const { return {rho[0].mid_double(), rho[1].mid_double(), rho[2].mid_double()}; }
    std::array<double, 3> moduli() const {
        auto r = approx();
        return {std::fabs(r[0]), std::fabs(r[1]), std::fabs(r[2])};
    }
    SignVector signs() const { return {sign}; }
};

/// Chamber coordinates of the split part of a unit.
struct ChamberPoint {
    Interval alpha1, alpha2;
    Interval c1;  ///< log alpha1
    Interval c2;  ///< (log alpha2) / 2
    Interval l_value;  ///< 2 * c1 * c2
};

// ---------------------------------------------------------------------------
// Exact operations

inline mpz_class discriminant(const CubicPoly& p) {
    const mpz_class a = p.a, b = p.b, c = p.c;
    return 18 * a * b * c - 4 * a * a * a * c + a * a * b * b - 4 * b * b * b - 27 * c * c;
}

/// True iff p is the characteristic polynomial of a unit generating a totally
/// real cubic field: |c| = 1, no root at +-1, positive discriminant.
inline bool is_admissible_unit_poly(const CubicPoly& p) {
    if (p.c != 1 && p.c != -1) return false;
    if (p.eval_at_one() == 0 || p.eval_at_minus_one() == 0) return false;
    return discriminant(p) > 0;
}

/// prod (r_i^2 - 1) over the roots, which equals p(1) p(-1).
inline mpz_class eta_trace_exact(const CubicPoly& p) { return mpz_class(p.eval_at_one()) * p.eval_at_minus_one(); }

/// Characteristic polynomial of the inverse unit: x^3 p(1/x) / c.
inline CubicPoly reciprocal_poly(const CubicPoly& p) {
    if (p.c != 1 && p.c != -1) throw NotUnit("reciprocal_poly: constant term is not +-1");
    return {p.b * p.c, p.a * p.c, p.c};
}

inline int galois_multiplicity(const CubicPoly& p) { return is_perfect_square(discriminant(p)) ? 3 : 1; }

/// Representative of {p, mirror(p)} that is smaller in (a, then c).
inline CubicPoly canonical_sign_rep(const CubicPoly& p) {
    const CubicPoly m = p.mirror();
    if (p.a != m.a) return p.a < m.a ? p : m;
    return p.c <= m.c ? p : m;
}

/// Some root has the same absolute value as another one: p(x) and -p(-x)
/// share a root. For monic cubics this happens iff c = 0 or (b < 0, c = ab).
inline bool has_opposite_roots(const CubicPoly& p) {
    if (p.c == 0) return true;
    return p.b < 0 && mpz_class(p.c) == mpz_class(p.a) * p.b;
}

// ---------------------------------------------------------------------------
// Root isolation

namespace detail {

/// Dyadic rational m / 2^k.
struct Dyadic {
    mpz_class m;
    unsigned long k = 0;
};

inline int sgn(const mpz_class& z) { return z > 0 ? 1 : (z < 0 ? -1 : 0); }

/// Sign of p at m / 2^k, exactly.
inline int sign_at(const CubicPoly& p, const Dyadic& x) {
    mpz_class s = mpz_class(1) << x.k;
    mpz_class v = ((x.m + p.a * s) * x.m + p.b * s * s) * x.m + p.c * s * s * s;
    return sgn(v);
}

/// Sturm chain of a squarefree cubic with three real roots.
class SturmChain {
public:
    explicit SturmChain(const CubicPoly& p) : p_(p) {
        const mpz_class a = p.a, b = p.b, c = p.c;
        u_ = 2 * a * a - 6 * b;
        v_ = a * b - 9 * c;
        if (u_ == 0) throw DomainError("Sturm chain: degenerate remainder");
        mpz_class s1 = 3 * v_ * v_ - 2 * a * v_ * u_ + b * u_ * u_;
        s3_ = -sgn(s1);
    }

    int variations(const Dyadic& x) const {
        const mpz_class s = mpz_class(1) << x.k;
        int signs[4];
        signs[0] = sign_at(p_, x);
        signs[1] = sgn(3 * x.m * x.m + 2 * p_.a * x.m * s + p_.b * s * s);
        signs[2] = sgn(u_ * x.m + v_ * s);
        signs[3] = s3_;
        int v = 0, last = 0;
        for (int sg : signs) {
            if (sg == 0) continue;
            if (last != 0 && sg != last) ++v;
            last = sg;
        }
        return v;
    }

private:
    CubicPoly p_;
    mpz_class u_, v_;
    int s3_;
};

inline Dyadic midpoint(const Dyadic& l, const Dyadic& r) {
    // Bring both to denominator 2^(k+1).
    unsigned long k = std::max(l.k, r.k);
    mpz_class lm = l.m << (k - l.k), rm = r.m << (k - r.k);
    return {lm + rm, k + 1};
}

/// Isolating intervals (l, r] with exactly one root each, in increasing order.
inline std::vector<std::pair<Dyadic, Dyadic>> isolate_by_sturm(const CubicPoly& p) {
    SturmChain chain(p);
    std::int64_t bound = 1 + std::max({std::llabs(p.a), std::llabs(p.b), std::llabs(p.c)});
    unsigned long e = 0;
    while ((std::int64_t{1} << e) <= bound) ++e;
    Dyadic lo{-(mpz_class(1) << e), 0}, hi{mpz_class(1) << e, 0};
    std::vector<std::pair<Dyadic, Dyadic>> out;
    std::vector<std::pair<Dyadic, Dyadic>> stack{{lo, hi}};
    while (!stack.empty()) {
        auto [l, r] = stack.back();
        stack.pop_back();
        const int n = chain.variations(l) - chain.variations(r);
        if (n == 0) continue;
        if (n == 1) {
            out.emplace_back(l, r);
            continue;
        }
        Dyadic m = midpoint(l, r);
        stack.emplace_back(m, r);
        stack.emplace_back(l, m);
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        mpz_class xl = x.first.m << (std::max(x.first.k, y.first.k) - x.first.k);
        mpz_class yl = y.first.m << (std::max(x.first.k, y.first.k) - y.first.k);
        return xl < yl;
    });
    return out;
}

/// Exact sign of p at an MPFR value (which is a dyadic rational).
inline int sign_at(const CubicPoly& p, const BigFloat& x) {
    if (mpfr_zero_p(x.get())) return p.c > 0 ? 1 : (p.c < 0 ? -1 : 0);
    mpz_class m;
    mpfr_exp_t ex = mpfr_get_z_2exp(m.get_mpz_t(), x.get());
    if (ex >= 0) return sgn(p.eval(m << static_cast<unsigned long>(ex)));
    return sign_at(p, Dyadic{m, static_cast<unsigned long>(-ex)});
}

inline Interval eval_interval(const CubicPoly& p, const Interval& x) {
    const Precision pr = x.prec();
    Interval r = x + Interval::from_long(static_cast<long>(p.a), pr);
    r = r * x + Interval::from_long(static_cast<long>(p.b), pr);
    return r * x + Interval::from_long(static_cast<long>(p.c), pr);
}

inline Interval eval_derivative_interval(const CubicPoly& p, const Interval& x) {
    const Precision pr = x.prec();
    Interval r = Interval::from_long(3, pr) * x + Interval::from_long(static_cast<long>(2 * p.a), pr);
    return r * x + Interval::from_long(static_cast<long>(p.b), pr);
}

/// Shrinks an isolating interval to width below 2^-bits by interval Newton
/// steps, falling back to exact bisection when a step does not contract.
inline Interval refine_root(const CubicPoly& p, const Dyadic& l, const Dyadic& r, Precision bits) {
    const Precision work = bits + 96;
    BigFloat lo(work), hi(work);
    mpfr_set_z_2exp(lo.get(), l.m.get_mpz_t(), -static_cast<mpfr_exp_t>(l.k), MPFR_RNDN);
    mpfr_set_z_2exp(hi.get(), r.m.get_mpz_t(), -static_cast<mpfr_exp_t>(r.k), MPFR_RNDN);
    int sign_lo = sign_at(p, lo);
    const int sign_hi = sign_at(p, hi);
    if (sign_lo == 0 || sign_hi == 0) throw Reducible("polynomial has a dyadic rational root");
    if (sign_lo == sign_hi) throw DomainError("refine_root: interval does not bracket a root");
    Interval x = Interval::hull(lo, hi, work);
    for (int iter = 0; iter < 100000; ++iter) {
        if (x.narrower_than_bits(static_cast<long>(bits))) return x;
        BigFloat w_before = x.width();
        BigFloat m = x.mid();
        Interval mi = Interval::hull(m, m, work);
        Interval dp = eval_derivative_interval(p, x);
        bool contracted = false;
        if (!dp.contains_zero()) {
            Interval n = mi - eval_interval(p, mi) / dp;
            Interval y = intersect(x, n);
            if (y.empty()) throw DomainError("refine_root: empty Newton intersection");
            x = y;
            BigFloat half(work);
            mpfr_div_2ui(half.get(), w_before.get(), 1, MPFR_RNDU);
            contracted = mpfr_cmp(x.width().get(), half.get()) <= 0;
        }
        if (!contracted) {
            BigFloat mm = x.mid();
            const int sm = sign_at(p, mm);
            if (sm == 0) throw Reducible("polynomial has a dyadic rational root");
            const int sl = sign_at(p, x.lo());
            if (sm == sl)
                x = Interval::hull(mm, x.hi(), work);
            else
                x = Interval::hull(x.lo(), mm, work);
        }
    }
    throw PrecisionExhausted("refine_root did not converge");
}

}  // namespace detail

/// Certified enclosures of the three real roots in increasing order, each of
/// width below 2^-precision.
inline std::array<Interval, 3> isolate_roots_increasing(const CubicPoly& p, Precision precision = kDefaultPrecision) {
    if (discriminant(p) <= 0) throw DomainError("root isolation: polynomial is not totally real and squarefree");
    const auto iso = detail::isolate_by_sturm(p);
    if (iso.size() != 3) throw DomainError("root isolation: expected three real roots");
    std::array<Interval, 3> roots;
    for (int i = 0; i < 3; ++i) roots[i] = detail::refine_root(p, iso[i].first, iso[i].second, precision);
    return roots;
}

/// Certified roots sorted by decreasing absolute value. Escalates precision
/// until the absolute values separate. Throws NotSplitRegular when two roots
/// have equal absolute value.
inline EmbeddingTriple isolate_real_roots(const CubicPoly& p, Precision precision = kDefaultPrecision) {
    if (discriminant(p) <= 0) throw DomainError("isolate_real_roots: polynomial is not totally real and squarefree");
    if (has_opposite_roots(p)) throw NotSplitRegular("roots of equal absolute value: " + p.to_string());
    for (Precision prec = precision; prec <= kMaxPrecision; prec *= 2) {
        std::array<Interval, 3> roots = isolate_roots_increasing(p, prec);
        std::array<Interval, 3> mods = {abs(roots[0]), abs(roots[1]), abs(roots[2])};
        std::array<int, 3> order = {0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int x, int y) { return mods[x].mid_double() > mods[y].mid_double(); });
        bool separated = mods[order[0]].certainly_gt(mods[order[1]]) && mods[order[1]].certainly_gt(mods[order[2]]) &&
                         roots[0].sign() != 0 && roots[1].sign() != 0 && roots[2].sign() != 0;
        if (!separated) continue;
        EmbeddingTriple e;
        e.precision = prec;
        for (int i = 0; i < 3; ++i) {
            e.rho[i] = roots[order[i]];
            e.sign[i] = roots[order[i]].sign();
        }
        return e;
    }
    throw PrecisionExhausted("isolate_real_roots: absolute values not separated at maximal precision");
}

inline ChamberPoint alpha_invariants(const EmbeddingTriple& e) {
    ChamberPoint cp;
    const Interval m1 = abs(e.rho[0]), m2 = abs(e.rho[1]), m3 = abs(e.rho[2]);
    cp.alpha1 = m1 * m3 / sqr(m2);
    cp.alpha2 = sqr(m2 / m3);
    cp.c1 = log(cp.alpha1);
    const Interval half = Interval::from_mpq(mpq_class(1, 2), e.precision);
    cp.c2 = log(cp.alpha2) * half;
    cp.l_value = Interval::from_long(2, e.precision) * cp.c1 * cp.c2;
    return cp;
}

/// 1 < alpha1 <= T1 and 1 < alpha2 <= T2, decided on the enclosures.
/// Throws UndecidableAtBound when an enclosure straddles a bound.
inline bool in_chamber(const ChamberPoint& cp, double t1, double t2) {
    const Precision pr = cp.alpha1.prec();
    const Interval one = Interval::from_long(1, pr);
    const Interval b1 = Interval::from_double(t1, pr), b2 = Interval::from_double(t2, pr);
    auto decide_open_lower = [&](const Interval& v) -> std::optional<bool> {
        if (v.certainly_gt(one)) return true;
        if (v.certainly_le(one)) return false;
        return std::nullopt;
    };
    auto decide_closed_upper = [&](const Interval& v, const Interval& t) -> std::optional<bool> {
        if (v.certainly_le(t)) return true;
        if (v.certainly_gt(t)) return false;
        return std::nullopt;
    };
    bool undecided = false;
    for (auto d : {decide_open_lower(cp.alpha1), decide_open_lower(cp.alpha2), decide_closed_upper(cp.alpha1, b1),
                   decide_closed_upper(cp.alpha2, b2)}) {
        if (d.has_value() && !*d) return false;
        if (!d.has_value()) undecided = true;
    }
    if (undecided) throw UndecidableAtBound("chamber predicate undecided at this precision");
    return true;
}

/// Chamber membership with precision escalation. `straddled` reports the
/// closed-boundary inclusion case after reaching the precision cap.
struct ChamberDecision {
    bool inside = false;
    bool straddled = false;
    EmbeddingTriple embeddings;
    ChamberPoint chamber;
};

inline ChamberDecision decide_chamber(const CubicPoly& p, double t1, double t2, Precision precision = kDefaultPrecision) {
    for (Precision prec = precision;; prec *= 2) {
        EmbeddingTriple e = isolate_real_roots(p, prec);
        ChamberPoint cp = alpha_invariants(e);
        try {
            bool in = in_chamber(cp, t1, t2);
            return {in, false, std::move(e), std::move(cp)};
        } catch (const UndecidableAtBound&) {
            if (prec * 2 > kMaxPrecision) return {true, true, std::move(e), std::move(cp)};
        }
    }
}

// ---------------------------------------------------------------------------
// Split Cartan

/// prod_{i<j} (1 - e_i e_j x_j / x_i): det(1 - (at)^{-1}) on the strictly
/// upper triangular matrices.
inline double det_nilpotent_factor(const std::array<double, 3>& moduli, const SignVector& s) {
    double r = 1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) r *= 1.0 - s.e[i] * s.e[j] * (moduli[j] / moduli[i]);
    return r;
}

inline double index_factor(double lambda_flat, const std::array<double, 3>& moduli, const SignVector& s) {
    const double d = det_nilpotent_factor(moduli, s);
    if (d == 0.0) throw DivisionByZero("index_factor: split-singular element");
    return lambda_flat / d;
}

/// eta(x) * alpha1^{-4/3} * alpha2^{-1} written through the chamber
/// coordinates; tends to 1 deep in the chamber.
inline double eta_normalized(double alpha1, double alpha2) {
    const double a43 = std::pow(alpha1, -4.0 / 3.0), a23 = std::pow(alpha1, -2.0 / 3.0);
    return (1.0 - a43 / alpha2) * (a23 - 1.0) * (a23 / alpha2 - 1.0);
}

}  // namespace pgt
