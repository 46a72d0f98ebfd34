#pragma once

// Unit groups of cubic orders: exhaustive unit search, fundamental pairs with
// a parallelogram certificate, regulators, unit indices of suborders, and the
// roots of a polynomial inside an order.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgt/errors.hpp"
#include "pgt/lattice_enum.hpp"
#include "pgt/log_scan.hpp"
#include "pgt/number_field.hpp"
#include "pgt/order.hpp"

namespace pgt {

/// A unit together with its (approximate) log embedding.
struct LogUnit {
    FieldElem u;
    Vec3d log{};
};

struct UnitGroupData {
    OrderLattice order;
    std::array<FieldElem, 2> fundamental;
    std::array<std::array<Interval, 3>, 2> log_matrix;  ///< log|sigma_j(eps_i)|
    Interval regulator;

    double regulator_value() const { return regulator.mid_double(); }
    Vec3d log_vector(int i) const {
        return {log_matrix[i][0].mid_double(), log_matrix[i][1].mid_double(), log_matrix[i][2].mid_double()};
    }
    /// |det| of the minor obtained by dropping embedding column `drop`.
    Interval minor(int drop) const {
        int c0 = drop == 0 ? 1 : 0, c1 = drop == 2 ? 1 : 2;
        return abs(log_matrix[0][c0] * log_matrix[1][c1] - log_matrix[0][c1] * log_matrix[1][c0]);
    }
};

struct UnitOptions {
    double cap = 2e6;         ///< expected points per box search
    double slice = 2.0;       ///< strip slice width in the log plane
    double max_extent = 2e5;  ///< give up when the strip gets this long
};

namespace detail {

inline FieldElem sign_normalized(FieldElem x) {
    for (const auto& c : x) {
        if (c == 0) continue;
        if (c < 0)
            for (auto& d : x) d = -d;
        break;
    }
    return x;
}

inline std::string elem_key(const FieldElem& x) {
    const FieldElem y = sign_normalized(x);
    return y[0].get_str() + "," + y[1].get_str() + "," + y[2].get_str();
}

inline bool is_pm_one(const FieldElem& x) { return x[1] == 0 && x[2] == 0 && abs(x[0]) == 1; }

inline Vec3d cross(const Vec3d& a, const Vec3d& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline LogUnit make_log_unit(const NumberFieldCubic& F, const FieldElem& u) { return {u, log_abs(F.embed_accurate(u))}; }

/// a^{-q} b, exactly, with the log vector updated.
inline LogUnit reduce_by(const NumberFieldCubic& F, const LogUnit& b, const LogUnit& a, long q) {
    LogUnit r{F.mul(b.u, F.pow(a.u, -q)), {}};
    r.log = b.log - double(q) * a.log;
    return r;
}

/// Lagrange-Gauss reduction of a pair of independent log vectors.
inline void gauss_reduce(const NumberFieldCubic& F, LogUnit& a, LogUnit& b) {
    for (int guard = 0; guard < 10000; ++guard) {
        if (dot(b.log, b.log) < dot(a.log, a.log)) std::swap(a, b);
        const long q = std::lround(dot(a.log, b.log) / dot(a.log, a.log));
        if (q == 0) break;
        b = reduce_by(F, b, a, q);
    }
    a = make_log_unit(F, a.u);
    b = make_log_unit(F, b.u);
}

/// Basis of the lattice generated by a finite set of log vectors (rank 2).
/// Vectors that reduce to zero are checked to be +-1 exactly.
inline std::array<LogUnit, 2> reduce_generators(const NumberFieldCubic& F, std::vector<LogUnit> gens) {
    const double tiny = 1e-7;
    auto drop_zero = [&](std::vector<LogUnit>& g) {
        std::vector<LogUnit> keep;
        for (auto& x : g) {
            if (norm2(x.log) < tiny) {
                if (!is_pm_one(x.u)) throw PrecisionExhausted("unit reduction: nontrivial unit with vanishing log");
                continue;
            }
            keep.push_back(std::move(x));
        }
        g = std::move(keep);
    };
    for (int guard = 0; guard < 100000; ++guard) {
        drop_zero(gens);
        if (gens.size() < 2) throw SearchExhausted("unit reduction: rank below 2");
        std::sort(gens.begin(), gens.end(), [](const LogUnit& x, const LogUnit& y) { return dot(x.log, x.log) < dot(y.log, y.log); });
        LogUnit a = gens[0];
        size_t ib = 1;
        while (ib < gens.size() && norm2(cross(a.log, gens[ib].log)) <= 1e-9 * norm2(a.log) * norm2(gens[ib].log)) ++ib;
        if (ib == gens.size()) {
            // all collinear: one Euclid step against the shortest
            for (size_t i = 1; i < gens.size(); ++i)
                gens[i] = reduce_by(F, gens[i], a, std::lround(dot(a.log, gens[i].log) / dot(a.log, a.log)));
            continue;
        }
        LogUnit b = gens[ib];
        gauss_reduce(F, a, b);
        std::vector<LogUnit> rest;
        for (size_t i = 1; i < gens.size(); ++i) {
            if (i == ib) continue;
            LogUnit c = gens[i];
            auto co = plane_coords(c.log, a.log, b.log);
            const long q1 = std::lround(co[0]), q2 = std::lround(co[1]);
            if (q1 != 0) c = reduce_by(F, c, a, q1);
            if (q2 != 0) c = reduce_by(F, c, b, q2);
            rest.push_back(c);
        }
        drop_zero(rest);
        if (rest.empty()) return {a, b};
        gens = std::move(rest);
        gens.push_back(a);
        gens.push_back(b);
    }
    throw SearchExhausted("unit reduction: no convergence");
}

/// Certified regulator |det| of the minor dropping the last embedding.
inline std::pair<std::array<std::array<Interval, 3>, 2>, Interval> certified_logs(const NumberFieldCubic& F,
                                                                                 const std::array<FieldElem, 2>& e) {
    for (Precision pr = F.precision(); pr <= kMaxPrecision; pr *= 2) {
        const auto r = F.roots_at(pr);
        std::array<std::array<Interval, 3>, 2> m;
        bool separated = true;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) {
                Interval v = Interval::from_mpq(e[i][2], pr);
                v = v * r[j] + Interval::from_mpq(e[i][1], pr);
                v = v * r[j] + Interval::from_mpq(e[i][0], pr);
                if (v.sign() == 0) separated = false;
                else m[i][j] = log(abs(v));
            }
        if (!separated) continue;
        Interval det = abs(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
        if (det.sign() != 0 && det.narrower_than_bits(60)) return {m, det};
    }
    throw PrecisionExhausted("regulator: precision cap reached");
}

}  // namespace detail

/// Every u in O with |N(u)| = 1 and max_j |log|sigma_j(u)|| <= log_bound, one
/// of each +-u.
inline std::vector<FieldElem> unit_search(const NumberFieldCubic& F, const OrderLattice& o, double log_bound,
                                          double cap = 2e6) {
    if (!(log_bound > 0)) throw DomainError("unit_search: log_bound must be positive");
    BoxSearch bs(F, lattice_basis(o.lattice));
    std::vector<FieldElem> out;
    const double lim = log_bound * (1 + 1e-12);
    bs.run({log_bound, log_bound, log_bound}, cap, [&](const BoxPoint& p) {
        const FieldElem y = bs.element(p.coeffs);
        if (abs(F.norm(y)) != 1) return;
        const Vec3d l = log_abs(F.embed_accurate(y));
        for (double v : l)
            if (std::fabs(v) > lim) return;
        out.push_back(detail::sign_normalized(y));
    });
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

/// Scans the closed parallelogram spanned by (a, b) for units; returns units
/// whose coordinates are not integral.
inline std::vector<LogUnit> units_off_lattice(const NumberFieldCubic& F, const OrderLattice& o, const LogUnit& a,
                                              const LogUnit& b, double cap) {
    Walker w(F, o.lattice);
    CellGrid grid(F, w, a.log, b.log, {0.0, 1.0}, {0.0, 1.0});
    std::vector<LogUnit> bad;
    grid.scan(0.0, cap, [&](const CellGrid::Cell& c, const BoxSearch& bs, const BoxPoint& p, const Vec3d& lx) {
        const FieldElem y = bs.element(p.coeffs);
        if (abs(F.norm(y) * c.anchor.norm) != 1) return;
        const auto co = plane_coords(lx, a.log, b.log);
        if (std::fabs(co[0] - std::nearbyint(co[0])) < 1e-6 && std::fabs(co[1] - std::nearbyint(co[1])) < 1e-6) return;
        bad.push_back(make_log_unit(F, F.mul(c.anchor.mu, y)));
    });
    return bad;
}

}  // namespace detail

/// Fundamental pair of O^x. `hint` is an optional nontrivial unit of O that
/// seeds the search (for Z[lambda] subset O, lambda itself).
inline UnitGroupData fundamental_units(const NumberFieldCubic& F, const OrderLattice& o,
                                       std::optional<FieldElem> hint = std::nullopt, const UnitOptions& opt = {}) {
    LogUnit v;
    if (hint) {
        if (!o.lattice.contains(*hint) || abs(F.norm(*hint)) != 1 || detail::is_pm_one(*hint))
            throw DomainError("fundamental_units: hint is not a nontrivial unit of the order");
        v = detail::make_log_unit(F, *hint);
    } else {
        for (double bound = 0.5;; bound *= 2) {
            std::vector<FieldElem> us = unit_search(F, o, bound, opt.cap);
            bool found = false;
            for (const auto& u : us) {
                if (detail::is_pm_one(u)) continue;
                LogUnit c = detail::make_log_unit(F, u);
                if (!found || dot(c.log, c.log) < dot(v.log, v.log)) v = c;
                found = true;
            }
            if (found) break;
        }
    }
    const double vlen = norm2(v.log);
    const Vec3d n = {1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0)};
    const Vec3d w = (1.0 / vlen) * detail::cross(n, v.log);

    // Strip {s v + t w : 0 <= s <= 1, t >= 0}: the units on the segment t = 0
    // generate the units on the line through v, the unit of least t > 0
    // completes a basis.
    Walker walker(F, o.lattice);
    std::map<std::string, LogUnit> found;
    std::optional<LogUnit> top;
    double top_t = 0;
    for (long k = 0; !top; ++k) {
        const double t0 = double(k) * opt.slice;
        if (t0 > opt.max_extent) throw SearchExhausted("fundamental_units: second unit not found");
        CellGrid grid(F, walker, v.log, w, {0.0, 1.0}, {t0, t0 + opt.slice});
        grid.scan(0.0, opt.cap, [&](const CellGrid::Cell& c, const BoxSearch& bs, const BoxPoint& p, const Vec3d& lx) {
            const FieldElem y = bs.element(p.coeffs);
            if (abs(F.norm(y) * c.anchor.norm) != 1) return;
            const auto co = plane_coords(plane_part(lx), v.log, w);
            if (co[0] < -1e-7 || co[0] > 1 + 1e-7 || co[1] < -1e-7) return;
            const FieldElem x = F.mul(c.anchor.mu, y);
            found.emplace(detail::elem_key(x), LogUnit{x, lx});
        });
        for (const auto& [key, u] : found) {
            const double t = dot(u.log, w);
            if (t > 1e-6 && (!top || t < top_t)) {
                top = u;
                top_t = t;
            }
        }
    }
    std::vector<LogUnit> gens{v, *top};
    for (const auto& [key, u] : found) {
        const double t = dot(u.log, w);
        if (std::fabs(t) <= 1e-6 && !detail::is_pm_one(u.u)) gens.push_back(u);
    }
    std::array<LogUnit, 2> basis = detail::reduce_generators(F, gens);
    for (int round = 0;; ++round) {
        if (round > 20) throw SearchExhausted("fundamental_units: certification did not settle");
        std::vector<LogUnit> bad = detail::units_off_lattice(F, o, basis[0], basis[1], opt.cap);
        if (bad.empty()) break;
        bad.push_back(basis[0]);
        bad.push_back(basis[1]);
        basis = detail::reduce_generators(F, bad);
    }
    UnitGroupData ud;
    ud.order = o;
    ud.fundamental = {basis[0].u, basis[1].u};
    std::tie(ud.log_matrix, ud.regulator) = detail::certified_logs(F, ud.fundamental);
    return ud;
}

/// Sublattice of exponent pairs describing the units of a suborder: the
/// units of O_sub are generated by eps1^k1 and eps1^a eps2^k2.
struct UnitIndexData {
    long k1 = 1, a = 0, k2 = 1;
    long index() const { return k1 * k2; }
};

namespace detail {

/// Arithmetic in O / N O through the structure constants of O.
struct ModRing {
    MultTable t;
    long n;

    IVec3 reduce(const ZVec3& v) const {
        IVec3 r;
        for (int i = 0; i < 3; ++i) r[i] = mod_floor(v[i], mpz_class(n)).get_si();
        return r;
    }
    IVec3 mul(const IVec3& x, const IVec3& y) const {
        __int128 acc[3] = {0, 0, 0};
        for (int i = 0; i < 3; ++i) {
            if (x[i] == 0) continue;
            for (int j = 0; j < 3; ++j) {
                if (y[j] == 0) continue;
                const __int128 xy = static_cast<__int128>(x[i]) * y[j] % n;
                for (int k = 0; k < 3; ++k) acc[k] = (acc[k] + xy * tm[i][j][k]) % n;
            }
        }
        return {static_cast<std::int64_t>((acc[0] + n) % n), static_cast<std::int64_t>((acc[1] + n) % n),
                static_cast<std::int64_t>((acc[2] + n) % n)};
    }
    std::array<std::array<std::array<long, 3>, 3>, 3> tm{};

    ModRing(MultTable table, long modulus) : t(std::move(table)), n(modulus) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) tm[i][j][k] = mod_floor(t[i][j][k], mpz_class(n)).get_si();
    }
};

/// Membership in a sublattice S with N O subset S subset O, in O-coordinates.
struct SubMembership {
    std::array<std::array<std::int64_t, 3>, 3> h{};  ///< upper triangular HNF rows
    long n;

    bool contains(IVec3 x) const {
        for (int j = 0; j < 3; ++j) {
            const std::int64_t piv = h[j][j];
            std::int64_t v = ((x[j] % n) + n) % n;
            if (v % piv != 0) return false;
            const std::int64_t q = v / piv;
            for (int k = j; k < 3; ++k)
                x[k] = static_cast<std::int64_t>((static_cast<__int128>(x[k]) - static_cast<__int128>(q) * h[j][k]) % n);
        }
        return true;
    }
};

}  // namespace detail

/// [O^x : O_sub^x] for O_sub subset O, from the images of the fundamental
/// units of O modulo the conductor of O_sub in O.
inline UnitIndexData unit_index_data(const NumberFieldCubic& F, const UnitGroupData& big, const OrderLattice& sub,
                                     long max_steps = 100'000'000) {
    const Lattice& ol = big.order.lattice;
    if (sub.lattice == ol) return {};
    const Lattice fp = colon(F, sub.lattice, ol);
    mpz_class nz = 1;
    for (int i = 0; i < 3; ++i)
        for (const auto& c : fp.coords(ol.basis(i))) nz = lcm(nz, c.get_den());
    if (!nz.fits_slong_p() || nz > (1L << 40)) throw CapExceeded("unit_index: conductor exponent too large");
    const long n = nz.get_si();
    const detail::ModRing ring(multiplication_table(F, ol), n);
    detail::SubMembership sm;
    sm.n = n;
    {
        std::vector<ZVec3> rows;
        for (int i = 0; i < 3; ++i) rows.push_back(to_z(ol.coords(sub.lattice.basis(i))));
        for (int i = 0; i < 3; ++i) {
            ZVec3 e{0, 0, 0};
            e[i] = nz;
            rows.push_back(e);
        }
        ZMat3 h = hnf(rows);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) sm.h[i][j] = h[i][j].get_si();
    }
    const IVec3 e1 = ring.reduce(to_z(ol.coords(big.fundamental[0])));
    const IVec3 e2 = ring.reduce(to_z(ol.coords(big.fundamental[1])));
    const IVec3 one = ring.reduce(to_z(ol.coords(NumberFieldCubic::one())));
    long steps = 0;
    std::vector<IVec3> pw{one};
    IVec3 cur = e1;
    while (!sm.contains(cur)) {
        pw.push_back(cur);
        cur = ring.mul(cur, e1);
        if (++steps > max_steps) throw CapExceeded("unit_index: step cap");
    }
    UnitIndexData d;
    d.k1 = static_cast<long>(pw.size());
    IVec3 c2 = e2;
    for (long b = 1;; ++b) {
        for (long a = 0; a < d.k1; ++a) {
            if (sm.contains(ring.mul(c2, pw[static_cast<size_t>(a)]))) {
                d.k2 = b;
                d.a = a;
                return d;
            }
            if (++steps > max_steps) throw CapExceeded("unit_index: step cap");
        }
        c2 = ring.mul(c2, e2);
    }
}

inline long unit_index(const NumberFieldCubic& F, const UnitGroupData& big, const OrderLattice& sub) {
    return unit_index_data(F, big, sub).index();
}

/// Unit group of a suborder derived from the unit group of a larger order.
inline UnitGroupData sub_unit_group(const NumberFieldCubic& F, const UnitGroupData& big, const OrderLattice& sub) {
    const UnitIndexData d = unit_index_data(F, big, sub);
    UnitGroupData ud;
    ud.order = sub;
    ud.fundamental = {F.pow(big.fundamental[0], d.k1),
                      F.mul(F.pow(big.fundamental[0], d.a), F.pow(big.fundamental[1], d.k2))};
    std::tie(ud.log_matrix, ud.regulator) = detail::certified_logs(F, ud.fundamental);
    return ud;
}

/// The conjugates sigma(t), sigma^2(t) of the generator t when the field is
/// cyclic; empty otherwise.
inline std::vector<FieldElem> galois_conjugates(const NumberFieldCubic& F) {
    const mpz_class disc = F.poly_discriminant();
    if (!is_perfect_square(disc)) return {};
    const mpz_class sq = isqrt(disc);
    const CubicPoly& p = F.poly();
    auto is_root = [&](const FieldElem& x) {
        const FieldElem x2 = F.mul(x, x), x3 = F.mul(x2, x);
        const FieldElem v = x3 + mpq_class(p.a) * x2 + mpq_class(p.b) * x + mpq_class(p.c) * NumberFieldCubic::one();
        return v[0] == 0 && v[1] == 0 && v[2] == 0;
    };
    for (Precision pr = F.precision(); pr <= kMaxPrecision; pr *= 2) {
        const auto r = F.roots_at(pr);
        std::vector<FieldElem> out;
        bool ok = true;
        for (int shift : {1, 2}) {
            // Cramer on the Vandermonde system c0 + c1 r_j + c2 r_j^2 = r_{j+shift}.
            std::array<std::array<Interval, 3>, 3> m;
            std::array<Interval, 3> rhs;
            for (int j = 0; j < 3; ++j) {
                m[j] = {Interval::from_mpz(1, pr), r[j], sqr(r[j])};
                rhs[j] = r[(j + shift) % 3];
            }
            auto det3i = [](const std::array<std::array<Interval, 3>, 3>& a) {
                return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                       a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
            };
            const Interval d = det3i(m);
            FieldElem x;
            for (int k = 0; k < 3; ++k) {
                auto mk = m;
                for (int j = 0; j < 3; ++j) mk[j][k] = rhs[j];
                const Interval ck = det3i(mk) / d * Interval::from_mpz(sq, pr);
                const double lo = ck.lo_double(), hi = ck.hi_double();
                const double rl = std::nearbyint(0.5 * (lo + hi));
                if (hi - lo > 0.25 || std::fabs(rl) > 9e15) {
                    ok = false;
                    break;
                }
                x[k] = rational(mpz_class(static_cast<long>(rl)), sq);
            }
            if (!ok) break;
            if (!is_root(x)) {
                ok = false;
                break;
            }
            out.push_back(x);
        }
        if (ok) return out;
    }
    throw PrecisionExhausted("galois_conjugates: precision cap reached");
}

/// Number of roots of the defining polynomial of F that lie in O.
inline int units_with_charpoly(const NumberFieldCubic& F, const OrderLattice& o) {
    int n = o.lattice.contains(NumberFieldCubic::gen()) ? 1 : 0;
    for (const auto& x : galois_conjugates(F))
        if (o.lattice.contains(x)) ++n;
    return n;
}

}  // namespace pgt
