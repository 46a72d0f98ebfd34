#pragma once

// Exact arithmetic in F = Q[x]/(p) for a totally real cubic p. Elements are
// rational coordinate triples in the power basis {1, t, t^2}.

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <cstdlib>
#include <string>
#include <utility>

#include "pgt/cubic_core.hpp"
#include "pgt/errors.hpp"
#include "pgt/linalg.hpp"

namespace pgt {

using FieldElem = QVec3;

/// True iff the monic integer cubic has no rational (hence integer) root.
inline bool is_irreducible(const CubicPoly& p) {
    if (p.c == 0) return false;
    const std::int64_t c = std::llabs(p.c);
    for (std::int64_t d = 1; d * d <= c; ++d) {
        if (c % d != 0) continue;
        for (std::int64_t r : {d, -d, c / d, -(c / d)})
            if (p.eval(mpz_class(r)) == 0) return false;
    }
    return true;
}

class NumberFieldCubic {
public:
    explicit NumberFieldCubic(const CubicPoly& p, Precision prec = kDefaultPrecision) : p_(p), prec_(prec) {
        if (!is_irreducible(p)) throw Reducible("field_from_poly: " + p.to_string() + " is reducible");
        if (discriminant(p) <= 0) throw DomainError("field_from_poly: " + p.to_string() + " is not totally real");
        try {
            EmbeddingTriple e = isolate_real_roots(p, prec);
            roots_ = e.rho;
        } catch (const NotSplitRegular&) {
            roots_ = isolate_roots_increasing(p, prec);
        }
        for (int j = 0; j < 3; ++j) roots_d_[j] = roots_[j].mid_double();
    }

    const CubicPoly& poly() const { return p_; }
    Precision precision() const { return prec_; }
    mpz_class poly_discriminant() const { return discriminant(p_); }

    /// Real embeddings, in the order fixed at construction (decreasing
    /// |root| when that order is defined).
    const std::array<Interval, 3>& roots() const { return roots_; }

    static FieldElem from_int(long v) { return {mpq_class(v), mpq_class(0), mpq_class(0)}; }
    static FieldElem one() { return from_int(1); }
    static FieldElem gen() { return {mpq_class(0), mpq_class(1), mpq_class(0)}; }

    FieldElem mul(const FieldElem& x, const FieldElem& y) const {
        // product coefficients of t^0..t^4
        mpq_class c0 = x[0] * y[0];
        mpq_class c1 = x[0] * y[1] + x[1] * y[0];
        mpq_class c2 = x[0] * y[2] + x[1] * y[1] + x[2] * y[0];
        mpq_class c3 = x[1] * y[2] + x[2] * y[1];
        mpq_class c4 = x[2] * y[2];
        const mpq_class a = p_.a, b = p_.b, c = p_.c;
        // t^3 = -a t^2 - b t - c ; t^4 = (a^2 - b) t^2 + (ab - c) t + ac
        return {c0 - c * c3 + a * c * c4, c1 - b * c3 + (a * b - c) * c4, c2 - a * c3 + (a * a - b) * c4};
    }

    /// Rows: coordinates of x, x t, x t^2.
    QMat3 mult_matrix(const FieldElem& x) const {
        QMat3 m;
        m[0] = x;
        m[1] = mul(x, gen());
        m[2] = mul(m[1], gen());
        return m;
    }

    mpq_class norm(const FieldElem& x) const { return det(mult_matrix(x)); }
    mpq_class trace(const FieldElem& x) const {
        QMat3 m = mult_matrix(x);
        return m[0][0] + m[1][1] + m[2][2];
    }

    /// Coefficients (c2, c1, c0) of the characteristic polynomial
    /// X^3 + c2 X^2 + c1 X + c0 of multiplication by x.
    std::array<mpq_class, 3> charpoly(const FieldElem& x) const {
        QMat3 m = mult_matrix(x);
        mpq_class tr = m[0][0] + m[1][1] + m[2][2];
        mpq_class minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                           m[1][1] * m[2][2] - m[1][2] * m[2][1];
        return {-tr, minors, -det(m)};
    }

    /// Characteristic polynomial as a CubicPoly; requires integral coefficients.
    CubicPoly charpoly_integral(const FieldElem& x) const {
        auto cp = charpoly(x);
        for (const auto& q : cp)
            if (q.get_den() != 1 || !q.get_num().fits_slong_p())
                throw DomainError("characteristic polynomial is not integral");
        return {cp[0].get_num().get_si(), cp[1].get_num().get_si(), cp[2].get_num().get_si()};
    }

    FieldElem inverse(const FieldElem& x) const {
        // solve y * M(x) = 1 where rows of M(x) are x t^i: y = e0 M^{-1}
        QMat3 inv = pgt::inverse(mult_matrix(x));
        return inv[0];
    }

    FieldElem pow(const FieldElem& x, long n) const {
        if (n < 0) return pow(inverse(x), -n);
        FieldElem r = one(), base = x;
        while (n > 0) {
            if (n & 1) r = mul(r, base);
            base = mul(base, base);
            n >>= 1;
        }
        return r;
    }

    /// Evaluate x at embedding j.
    Interval embed(const FieldElem& x, int j) const { return embed(x, j, prec_); }
    Interval embed(const FieldElem& x, int j, Precision prec) const {
        const Interval& r = roots_[j];
        Interval v = Interval::from_mpq(x[2], prec);
        v = v * r + Interval::from_mpq(x[1], prec);
        return v * r + Interval::from_mpq(x[0], prec);
    }
    std::array<double, 3> embed_double(const FieldElem& x) const {
        return {embed(x, 0).mid_double(), embed(x, 1).mid_double(), embed(x, 2).mid_double()};
    }
    /// Embeddings as doubles with relative error below 1e-15, raising the
    /// working precision as needed for elements with large coordinates.
    std::array<double, 3> embed_accurate(const FieldElem& x) const {
        for (Precision pr = prec_; pr <= kMaxPrecision; pr *= 2) {
            const std::array<Interval, 3> r = roots_at(pr);
            std::array<double, 3> out{};
            bool ok = true;
            for (int j = 0; j < 3; ++j) {
                Interval v = Interval::from_mpq(x[2], pr);
                v = v * r[j] + Interval::from_mpq(x[1], pr);
                v = v * r[j] + Interval::from_mpq(x[0], pr);
                const double lo = v.lo_double(), hi = v.hi_double();
                if (hi - lo > 1e-15 * std::max(std::fabs(lo), std::fabs(hi))) ok = false;
                out[j] = v.mid_double();
            }
            if (ok) return out;
        }
        throw PrecisionExhausted("embed_accurate: cancellation beyond the precision cap");
    }

    /// Root enclosures at a given precision, in the construction order.
    std::array<Interval, 3> roots_at(Precision pr) const {
        if (pr <= prec_) return roots_;
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->roots.find(pr);
        if (it != cache_->roots.end()) return it->second;
        std::array<Interval, 3> fresh = isolate_roots_increasing(p_, pr), out;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                if (fresh[k].overlaps(roots_[j])) out[j] = fresh[k];
        cache_->roots.emplace(pr, out);
        return out;
    }

    /// log|sigma_j(x)| for nonzero x.
    std::array<Interval, 3> log_embeddings(const FieldElem& x) const {
        return {log(abs(embed(x, 0))), log(abs(embed(x, 1))), log(abs(embed(x, 2)))};
    }

private:
    CubicPoly p_;
    Precision prec_;
    std::array<Interval, 3> roots_;
    std::array<double, 3> roots_d_{};
    struct RootCache {
        std::mutex mu;
        std::map<Precision, std::array<Interval, 3>> roots;
    };
    std::shared_ptr<RootCache> cache_ = std::make_shared<RootCache>();
};

inline NumberFieldCubic field_from_poly(const CubicPoly& p, Precision prec = kDefaultPrecision) {
    return NumberFieldCubic(p, prec);
}

}  // namespace pgt
