#pragma once

// Class numbers of cubic orders: Minkowski-bound class groups of maximal
// orders, the conductor formula for suborders, and a direct enumeration of
// invertible ideal classes used as an independent check.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "pgt/errors.hpp"
#include "pgt/lattice_enum.hpp"
#include "pgt/log_scan.hpp"
#include "pgt/number_field.hpp"
#include "pgt/order.hpp"
#include "pgt/units.hpp"

namespace pgt {

// ---------------------------------------------------------------------------
// Finite algebras O / qO

namespace detail {

inline long rank_mod(const std::vector<std::array<long, 3>>& rows, long q) {
    if (rows.empty()) return 0;
    return static_cast<long>(rows.size()) - static_cast<long>(left_kernel_mod(rows, q).size());
}

/// { x : sum_i x_i a_i in span(v) } for three vectors a_i.
inline std::vector<ModVec> preimage_of_span(const std::array<ModVec, 3>& a, const std::vector<ModVec>& v, long q) {
    std::vector<std::array<long, 3>> rows(a.begin(), a.end());
    rows.insert(rows.end(), v.begin(), v.end());
    std::vector<ModVec> out;
    for (const auto& k : left_kernel_mod(rows, q)) out.push_back({k[0], k[1], k[2]});
    return out;
}

/// O / qO through the structure constants of O reduced mod q.
struct QAlgebra {
    MultTable t;
    long q;
    ModVec one;

    QAlgebra(const NumberFieldCubic& F, const Lattice& o, long q_) : t(multiplication_table(F, o)), q(q_) {
        const QVec3 c = o.coords(NumberFieldCubic::one());
        for (int i = 0; i < 3; ++i) one[i] = mod_floor(c[i].get_num(), mpz_class(q)).get_si();
    }
    ModVec mul(const ModVec& x, const ModVec& y) const { return mod_mul(t, x, y, q); }
    ModVec pow(const ModVec& x, const mpz_class& e) const { return mod_pow(t, x, e, q, one); }
};

/// Images mod q of the basis of a lattice J with qO subset J subset O.
inline std::vector<ModVec> image_mod(const Lattice& o, const Lattice& j, long q) {
    std::vector<ModVec> out;
    for (int i = 0; i < 3; ++i) {
        const QVec3 c = o.coords(j.basis(i));
        ModVec v;
        for (int k = 0; k < 3; ++k) v[k] = mod_floor(c[k].get_num(), mpz_class(q)).get_si();
        out.push_back(v);
    }
    return out;
}

/// Structure of (O/qO) / V for an ideal image V: its radical, the subalgebra
/// fixed by Frobenius modulo the radical, and the residue degrees of the
/// maximal ideals.
struct SemisimpleInfo {
    std::vector<ModVec> rad;    ///< spans the radical (contains V)
    std::vector<ModVec> fixed;  ///< spans { x : x^q - x in rad }
    int dim = 0;                ///< dimension of the semisimple quotient
    int components = 0;
    std::vector<int> degrees;
};

inline SemisimpleInfo semisimple_info(const QAlgebra& A, const std::vector<ModVec>& v) {
    const long q = A.q;
    mpz_class e = q;
    while (e < 3) e *= q;
    std::array<ModVec, 3> phi, fr;
    for (int i = 0; i < 3; ++i) {
        ModVec ei{0, 0, 0};
        ei[i] = 1;
        phi[i] = A.pow(ei, e);
        fr[i] = A.pow(ei, q);
        fr[i][i] = ((fr[i][i] - 1) % q + q) % q;
    }
    SemisimpleInfo s;
    s.rad = preimage_of_span(phi, v, q);
    const long dim_rad = rank_mod(s.rad, q);
    s.dim = static_cast<int>(3 - dim_rad);
    s.fixed = preimage_of_span(fr, s.rad, q);
    s.components = static_cast<int>(rank_mod(s.fixed, q) - dim_rad);
    switch (s.dim * 10 + s.components) {
        case 0: break;
        case 11: s.degrees = {1}; break;
        case 21: s.degrees = {2}; break;
        case 22: s.degrees = {1, 1}; break;
        case 31: s.degrees = {3}; break;
        case 32: s.degrees = {1, 2}; break;
        case 33: s.degrees = {1, 1, 1}; break;
        default: throw DomainError("semisimple_info: inconsistent dimensions");
    }
    return s;
}

inline Lattice lift_mod(const Lattice& o, const std::vector<ModVec>& vs, long q, const std::vector<FieldElem>& extra = {}) {
    std::vector<QVec3> gens;
    const auto b = o.basis();
    for (const auto& v : vs) {
        QVec3 x{0, 0, 0};
        for (int i = 0; i < 3; ++i) x = x + mpq_class(v[i]) * b[i];
        gens.push_back(x);
    }
    for (int i = 0; i < 3; ++i) gens.push_back(mpq_class(q) * b[i]);
    gens.insert(gens.end(), extra.begin(), extra.end());
    return Lattice::from_generators(gens);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Unit groups of finite quotient rings

namespace detail {

/// True iff the rows generate (Z/n)^3.
inline bool spans_mod(std::vector<IVec3> rows, std::int64_t n) {
    size_t r = 0;
    for (int col = 0; col < 3; ++col) {
        // Euclid on column `col` over rows r..end
        for (;;) {
            size_t piv = rows.size();
            for (size_t i = r; i < rows.size(); ++i)
                if (rows[i][col] != 0 && (piv == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[piv][col]))) piv = i;
            if (piv == rows.size()) return false;
            std::swap(rows[r], rows[piv]);
            bool done = true;
            for (size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                const std::int64_t f = rows[i][col] / rows[r][col];
                for (int k = col; k < 3; ++k) rows[i][k] = static_cast<std::int64_t>((static_cast<__int128>(rows[i][k]) - static_cast<__int128>(f) * rows[r][k]) % n);
                if (rows[i][col] != 0) done = false;
            }
            if (done) break;
        }
        if (std::gcd(std::llabs(rows[r][col]), n) != 1) return false;
        ++r;
    }
    return true;
}

}  // namespace detail

/// #(R/f)^x by literal enumeration of residues; xR + f = R decides
/// invertibility.
inline mpz_class quotient_units_enumerated(const NumberFieldCubic& F, const Lattice& r, const Lattice& f,
                                           double cap = 2e6) {
    const mpz_class size = lattice_index(r, f);
    if (size == 1) return 1;
    if (size > cap) throw CapExceeded("quotient_units_enumerated: quotient too large");
    ZMat3 fz;
    for (int i = 0; i < 3; ++i) fz[i] = to_z(r.coords(f.basis(i)));
    const SmithForm snf = smith_normal_form(fz);
    QMat3 vq;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) vq[i][j] = snf.V[i][j];
    const QMat3 vinv = inverse(vq);
    const std::int64_t n = snf.S[2][2].get_si();
    detail::ModRing ring(multiplication_table(F, r), n);
    std::vector<IVec3> frows;
    for (int i = 0; i < 3; ++i) frows.push_back(ring.reduce(fz[i]));
    std::array<IVec3, 3> vrows;
    for (int i = 0; i < 3; ++i) vrows[i] = ring.reduce(to_z(vinv[i]));
    const std::array<std::int64_t, 3> s = {snf.S[0][0].get_si(), snf.S[1][1].get_si(), snf.S[2][2].get_si()};
    mpz_class count = 0;
    for (std::int64_t c0 = 0; c0 < s[0]; ++c0)
        for (std::int64_t c1 = 0; c1 < s[1]; ++c1)
            for (std::int64_t c2 = 0; c2 < s[2]; ++c2) {
                IVec3 x;
                for (int k = 0; k < 3; ++k)
                    x[k] = static_cast<std::int64_t>((static_cast<__int128>(c0) * vrows[0][k] + static_cast<__int128>(c1) * vrows[1][k] +
                                                      static_cast<__int128>(c2) * vrows[2][k]) % n);
                std::vector<IVec3> rows = frows;
                for (int i = 0; i < 3; ++i) {
                    IVec3 ei{0, 0, 0};
                    ei[i] = 1;
                    rows.push_back(ring.mul(x, ei));
                }
                if (detail::spans_mod(std::move(rows), n)) ++count;
            }
    return count;
}

/// #(R/f)^x from the residue fields of R at the maximal ideals containing f:
/// |R/f| prod (1 - 1/|R/m|).
inline mpz_class quotient_units_structural(const NumberFieldCubic& F, const Lattice& r, const Lattice& f) {
    const mpz_class size = lattice_index(r, f);
    const TrialFactorization tf = trial_factor(size, 10'000'000);
    if (tf.cofactor != 1) throw Incomplete("quotient_units_structural: index not factored");
    mpz_class num = size, den = 1;
    for (const auto& [qz, e] : tf.factors) {
        const long q = qz.get_si();
        detail::QAlgebra a(F, r, q);
        const auto info = detail::semisimple_info(a, detail::image_mod(r, f, q));
        for (int d : info.degrees) {
            mpz_class qd;
            mpz_ui_pow_ui(qd.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(d));
            num *= qd - 1;
            den *= qd;
        }
    }
    if (num % den != 0) throw NonIntegralResult("quotient_units_structural: non-integral count");
    return num / den;
}

struct QuotientUnitOptions {
    double literal_cap = 2e6;  ///< enumerate literally up to this quotient size
};

inline mpz_class quotient_units(const NumberFieldCubic& F, const Lattice& r, const Lattice& f,
                                const QuotientUnitOptions& opt = {}) {
    if (lattice_index(r, f) <= opt.literal_cap) return quotient_units_enumerated(F, r, f, opt.literal_cap);
    return quotient_units_structural(F, r, f);
}

// ---------------------------------------------------------------------------
// Prime ideals

struct PrimeIdeal {
    long q = 0;
    int degree = 0;
    Lattice ideal;
    mpz_class norm;
};

/// The prime ideals of O above q, from the semisimple quotient of O/qO.
inline std::vector<PrimeIdeal> primes_above(const NumberFieldCubic& F, const Lattice& o, long q) {
    detail::QAlgebra a(F, o, q);
    const auto info = detail::semisimple_info(a, {});
    const Lattice rad = detail::lift_mod(o, info.rad, q);
    auto make = [&](const Lattice& p, int deg) {
        mpz_class nrm;
        mpz_ui_pow_ui(nrm.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(deg));
        return PrimeIdeal{q, deg, p, nrm};
    };
    std::vector<PrimeIdeal> out;
    if (info.components == 1) {
        out.push_back(make(rad, info.dim));
        return out;
    }
    std::mt19937_64 rng(static_cast<unsigned long>(q));
    int found_dim = 0;
    const auto b = o.basis();
    for (int attempt = 0; attempt < 200 && found_dim < info.dim; ++attempt) {
        detail::ModVec x{0, 0, 0};
        for (const auto& f : info.fixed) {
            const long c = static_cast<long>(rng() % static_cast<unsigned long>(q));
            for (int k = 0; k < 3; ++k) x[k] = (x[k] + c * f[k]) % q;
        }
        // characteristic polynomial of multiplication by x on O/qO
        std::array<detail::ModVec, 3> m;
        for (int i = 0; i < 3; ++i) {
            detail::ModVec ei{0, 0, 0};
            ei[i] = 1;
            m[i] = a.mul(x, ei);
        }
        auto det_shift = [&](long c) {
            __int128 d[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) d[i][j] = (m[i][j] - (i == j ? c : 0) + q) % q;
            __int128 v = d[0][0] * ((d[1][1] * d[2][2] - d[1][2] * d[2][1]) % q) % q -
                         d[0][1] * ((d[1][0] * d[2][2] - d[1][2] * d[2][0]) % q) % q +
                         d[0][2] * ((d[1][0] * d[2][1] - d[1][1] * d[2][0]) % q) % q;
            return static_cast<long>(((v % q) + q) % q);
        };
        FieldElem xf{0, 0, 0};
        for (int i = 0; i < 3; ++i) xf = xf + mpq_class(x[i]) * b[i];
        for (long c = 0; c < q; ++c) {
            if (det_shift(c) != 0) continue;
            const FieldElem y = xf - mpq_class(c) * NumberFieldCubic::one();
            std::vector<FieldElem> extra;
            for (int i = 0; i < 3; ++i) extra.push_back(F.mul(y, b[i]));
            for (const auto& r : rad.basis()) extra.push_back(r);
            const Lattice j = Lattice::from_generators(extra);
            if (j == o) continue;
            const auto ji = detail::semisimple_info(a, detail::image_mod(o, j, q));
            if (ji.components != 1) continue;
            bool fresh = true;
            for (const auto& p : out)
                if (p.ideal == j) fresh = false;
            if (!fresh) continue;
            out.push_back(make(j, ji.dim));
            found_dim += ji.dim;
        }
    }
    if (found_dim != info.dim) throw SearchExhausted("primes_above: splitting did not separate the components");
    std::sort(out.begin(), out.end(), [](const PrimeIdeal& x, const PrimeIdeal& y) {
        if (x.degree != y.degree) return x.degree < y.degree;
        return x.ideal < y.ideal;
    });
    return out;
}

/// Norms N allowed by the Minkowski bound (2/9) sqrt|d|: 81 N^2 <= 4 |d|.
inline bool within_minkowski(const mpz_class& n, const mpz_class& disc) { return 81 * n * n <= 4 * abs(disc); }

// ---------------------------------------------------------------------------
// Principal ideals and ideal classes

struct PrincipalOptions {
    double cap = 2e6;
};

/// Classes of invertible fractional ideals of an order O. Every ideal I is
/// reduced to y^{-1} I for a minimum y of I. Two ideals are equivalent iff
/// their reductions are, and the reductions of a class are the lattices
/// x^{-1} J for the minima x of a fixed member J, one per unit orbit. Each
/// class met so far is stored through that finite set, so classifying an
/// ideal costs one reduction and one lookup. Class 0 is the principal class.
class PrincipalTester {
public:
    PrincipalTester(const NumberFieldCubic& F, const UnitGroupData& ud, const PrincipalOptions& opt = {})
        : F_(F), ud_(ud), cap_(opt.cap) {
        add_class(ud.order.lattice);
    }

    /// y^{-1} I for a minimum y of I reached by descending from a shortest vector.
    Lattice reduce(const Lattice& ideal) const {
        BoxSearch bs(F_, lattice_basis(ideal));
        FieldElem y = bs.shortest({0.0, 0.0, 0.0});
        for (int guard = 0;; ++guard) {
            if (guard > 100000) throw SearchExhausted("reduce: descent did not terminate");
            const Vec3d ly = log_abs(F_.embed_accurate(y));
            std::optional<IVec3> best;
            double best_sum = 0;
            bs.run(ly, cap_, [&](const BoxPoint& p) {
                const Vec3d lz = log_abs(p.emb);
                if (lz[0] < ly[0] - 1e-9 && lz[1] < ly[1] - 1e-9 && lz[2] < ly[2] - 1e-9) {
                    const double s = lz[0] + lz[1] + lz[2];
                    if (!best || s < best_sum) {
                        best = p.coeffs;
                        best_sum = s;
                    }
                }
            });
            if (!best) break;
            y = bs.element(*best);
        }
        return scaled_lattice(F_.inverse(y), ideal);
    }

    /// Index of the class of I among the classes met so far.
    std::optional<size_t> find(const Lattice& ideal) const { return lookup(reduce(ideal)); }

    /// Index of the class of I, registering it when new.
    size_t classify(const Lattice& ideal) {
        const Lattice r = reduce(ideal);
        if (auto c = lookup(r)) return *c;
        return add_class(r);
    }

    bool is_principal(const Lattice& ideal) const {
        const auto c = find(ideal);
        return c && *c == 0;
    }

    /// I J^{-1} principal, for invertible I, J.
    bool equivalent(const Lattice& i, const Lattice& j) const {
        return is_principal(lattice_product(F_, i, colon(F_, ud_.order.lattice, j)));
    }

    size_t classes() const { return reps_.size(); }
    const Lattice& representative(size_t c) const { return reps_[c]; }
    /// Number of reduced lattices in the principal class.
    size_t size() const { return sizes_[0]; }
    const Lattice& order() const { return ud_.order.lattice; }

private:
    Lattice scaled_lattice(const FieldElem& x, const Lattice& l) const {
        std::array<QVec3, 3> g;
        const auto b = l.basis();
        for (int k = 0; k < 3; ++k) g[k] = F_.mul(x, b[k]);
        return Lattice::from_generators(std::span<const QVec3>(g.data(), 3));
    }

    std::optional<size_t> lookup(const Lattice& reduced) const {
        auto it = keys_.find(reduced.key());
        if (it == keys_.end()) return std::nullopt;
        return it->second;
    }

    /// Registers the class of J by scanning the minima of J over the
    /// fundamental parallelogram of the unit lattice.
    size_t add_class(const Lattice& j) {
        const size_t id = reps_.size();
        reps_.push_back(j);
        const mpq_class nj = j.covolume() / ud_.order.lattice.covolume();
        const double smax = std::log(nj.get_d()) + 0.5 * std::log(std::fabs(ud_.order.disc.get_d())) + 1e-5;
        const Vec3d e1 = ud_.log_vector(0), e2 = ud_.log_vector(1);
        Walker w(F_, j);
        CellGrid grid(F_, w, e1, e2, {0.0, 1.0}, {0.0, 1.0});
        size_t count = 0;
        for (const auto& c : grid.cells()) {
            BoxSearch bs(F_, c.anchor.inv_basis, c.anchor.inv_emb);
            Vec3d beta;
            for (int k = 0; k < 3; ++k) beta[k] = c.corner_max[k] + smax / 3.0 - c.anchor.log_mu[k] + 1e-7;
            std::vector<BoxPoint> pts;
            std::vector<Vec3d> logs;
            bs.run(beta, cap_, [&](const BoxPoint& p) {
                pts.push_back(p);
                logs.push_back(c.anchor.log_mu + log_abs(p.emb));
            });
            for (size_t i = 0; i < pts.size(); ++i) {
                const Vec3d& lx = logs[i];
                if (lx[0] + lx[1] + lx[2] > smax) continue;
                const auto co = plane_coords(plane_part(lx), e1, e2);
                if (co[0] < -1e-9 || co[0] > 1 + 1e-9 || co[1] < -1e-9 || co[1] > 1 + 1e-9) continue;
                bool dominated = false;
                for (size_t k = 0; k < pts.size() && !dominated; ++k)
                    if (k != i && logs[k][0] < lx[0] - 1e-6 && logs[k][1] < lx[1] - 1e-6 && logs[k][2] < lx[2] - 1e-6)
                        dominated = true;
                if (dominated) continue;
                // x = mu y, and x^{-1} J = y^{-1} (mu^{-1} J)
                const FieldElem yinv = F_.inverse(bs.element(pts[i].coeffs));
                std::array<QVec3, 3> g;
                for (int k = 0; k < 3; ++k) g[k] = F_.mul(yinv, c.anchor.inv_basis[k]);
                auto [it, fresh] = keys_.emplace(Lattice::from_generators(std::span<const QVec3>(g.data(), 3)).key(), id);
                if (fresh) ++count;
                else if (it->second != id) throw SearchExhausted("class registry: reduced lattice shared by two classes");
            }
        }
        if (count == 0) throw SearchExhausted("class registry: no reduced lattice found");
        sizes_.push_back(count);
        return id;
    }

    const NumberFieldCubic& F_;
    UnitGroupData ud_;
    double cap_;
    std::vector<Lattice> reps_;
    std::vector<size_t> sizes_;
    std::unordered_map<std::string, size_t> keys_;
};

// ---------------------------------------------------------------------------
// Class group of the maximal order

struct ClassGroupData {
    long h = 1;
    std::vector<PrimeIdeal> primes;  ///< primes below the Minkowski bound used as generators
};

/// Class group of O_F from the prime ideals of norm at most (2/9) sqrt|d|,
/// growing the subgroup they generate one prime at a time. Above an
/// unramified q the primes multiply to qO, so the one of largest norm is
/// left out.
inline ClassGroupData class_group_maximal(const NumberFieldCubic& F, const UnitGroupData& ud, PrincipalTester& pt) {
    const Lattice& o = ud.order.lattice;
    const mpz_class& d = ud.order.disc;
    ClassGroupData cg;
    const long qmax = isqrt(4 * abs(d) / 81).get_si() + 1;
    for (long q : primes_up_to(qmax)) {
        if (!within_minkowski(q, d)) break;
        std::vector<PrimeIdeal> ps = primes_above(F, o, q);
        if (ps.size() == 1 && ps[0].degree == 3) continue;  // qO itself
        int deg = 0;
        for (const auto& p : ps) deg += p.degree;
        if (deg == 3) ps.pop_back();  // sorted by degree, so the largest norm is last
        for (auto& p : ps)
            if (within_minkowski(p.norm, d)) cg.primes.push_back(std::move(p));
    }
    std::vector<size_t> h{0};
    std::vector<bool> in_h(1, true);
    auto member = [&](size_t c) { return c < in_h.size() && in_h[c]; };
    for (const auto& p : cg.primes) {
        size_t c = pt.classify(p.ideal);
        if (member(c)) continue;
        std::vector<Lattice> powers{o};
        Lattice x = pt.representative(c);
        while (!member(c)) {
            powers.push_back(x);
            x = lattice_product(F, x, p.ideal);
            c = pt.classify(x);
        }
        std::vector<size_t> grown;
        for (const auto& pw : powers)
            for (size_t r : h) {
                const size_t g = pw == o ? r : pt.classify(lattice_product(F, pw, pt.representative(r)));
                if (g >= in_h.size()) in_h.resize(g + 1, false);
                if (!in_h[g]) {
                    in_h[g] = true;
                    grown.push_back(g);
                }
            }
        h.insert(h.end(), grown.begin(), grown.end());
        std::sort(h.begin(), h.end());
        h.erase(std::unique(h.begin(), h.end()), h.end());
    }
    cg.h = static_cast<long>(h.size());
    return cg;
}

inline long class_number_maximal(const NumberFieldCubic& F, const UnitGroupData& ud) {
    PrincipalTester pt(F, ud);
    return class_group_maximal(F, ud, pt).h;
}

// ---------------------------------------------------------------------------
// Suborders

struct ConductorFormulaOptions {
    QuotientUnitOptions quotient;
    bool drop_unit_index = false;  ///< deliberate fault used by the mutation check
};

/// h(O) = h(O_F) #(O_F/f)^x / (#(O/f)^x [O_F^x : O^x]).
inline long class_number_order(const NumberFieldCubic& F, const OrderLattice& o, const OrderLattice& of, long h_max,
                               long unit_idx, const ConductorFormulaOptions& opt = {}) {
    if (o.lattice == of.lattice) return h_max;
    const Conductor c = conductor(F, o, of);
    const mpz_class a = quotient_units(F, of.lattice, c.ideal, opt.quotient);
    const mpz_class b = quotient_units(F, o.lattice, c.ideal, opt.quotient);
    const mpz_class num = a * h_max;
    const mpz_class den = opt.drop_unit_index ? b : b * unit_idx;
    if (num % den != 0)
        throw NonIntegralResult("class_number_order: " + num.get_str() + " / " + den.get_str() + " is not integral");
    const mpz_class h = num / den;
    return h.get_si();
}

struct DirectClassResult {
    long h = 0;
    long invertible = 0;      ///< invertible integral ideals enumerated
    long non_invertible = 0;  ///< non-invertible integral ideals enumerated
};

struct DirectClassOptions {
    long disc_cap = 20000;
    PrincipalOptions principal;
};

/// Picard group order by listing every integral ideal of norm at most
/// (2/9) sqrt|disc O| and sorting the invertible ones into classes.
inline DirectClassResult class_number_order_direct(const NumberFieldCubic& F, const UnitGroupData& ud,
                                                   const DirectClassOptions& opt = {}) {
    const OrderLattice& o = ud.order;
    if (abs(o.disc) > opt.disc_cap) throw CapExceeded("class_number_order_direct: |disc| above cap");
    const MultTable t = multiplication_table(F, o.lattice);
    const auto b = o.lattice.basis();
    PrincipalTester pt(F, ud, opt.principal);
    DirectClassResult res;
    std::vector<Lattice> reps;
    // membership in an integer upper-triangular lattice
    auto contains = [](const std::array<std::array<long, 3>, 3>& h, std::array<long, 3> x) {
        for (int j = 0; j < 3; ++j) {
            if (x[j] % h[j][j] != 0) return false;
            const long qj = x[j] / h[j][j];
            for (int k = j; k < 3; ++k) x[k] -= qj * h[j][k];
        }
        return true;
    };
    for (long n = 1; within_minkowski(n, o.disc); ++n) {
        for (long d0 : divisors(n))
            for (long d1 : divisors(n / d0)) {
                const long d2 = n / d0 / d1;
                for (long x01 = 0; x01 < d1; ++x01)
                    for (long x02 = 0; x02 < d2; ++x02)
                        for (long x12 = 0; x12 < d2; ++x12) {
                            const std::array<std::array<long, 3>, 3> h = {{{d0, x01, x02}, {0, d1, x12}, {0, 0, d2}}};
                            bool ideal = true;
                            for (int r = 0; r < 3 && ideal; ++r)
                                for (int k = 0; k < 3 && ideal; ++k) {
                                    std::array<long, 3> y{0, 0, 0};
                                    for (int i = 0; i < 3; ++i)
                                        for (int m = 0; m < 3; ++m) y[m] += h[r][i] * t[i][k][m].get_si();
                                    ideal = contains(h, y);
                                }
                            if (!ideal) continue;
                            std::array<QVec3, 3> g;
                            for (int r = 0; r < 3; ++r) {
                                g[r] = {0, 0, 0};
                                for (int i = 0; i < 3; ++i) g[r] = g[r] + mpq_class(h[r][i]) * b[i];
                            }
                            const Lattice il = Lattice::from_generators(std::span<const QVec3>(g.data(), 3));
                            if (!(lattice_product(F, il, colon(F, o.lattice, il)) == o.lattice)) {
                                ++res.non_invertible;
                                continue;
                            }
                            ++res.invertible;
                            bool placed = false;
                            for (const auto& r : reps)
                                if (pt.equivalent(il, r)) {
                                    placed = true;
                                    break;
                                }
                            if (!placed) reps.push_back(il);
                        }
            }
    }
    res.h = static_cast<long>(reps.size());
    return res;
}

// ---------------------------------------------------------------------------

enum class ClassMethod { conductor_formula, direct_enumeration, both };

inline const char* to_string(ClassMethod m) {
    switch (m) {
        case ClassMethod::conductor_formula: return "conductor-formula";
        case ClassMethod::direct_enumeration: return "direct-enumeration";
        case ClassMethod::both: return "both";
    }
    return "?";
}

struct OrderClassData {
    OrderLattice order;
    long h = 1;
    HiReal R;
    mpz_class index_in_maximal = 1;
    long unit_index = 1;
    int roots_in_order = 1;  ///< roots of the defining polynomial lying in the order
    ClassMethod method = ClassMethod::conductor_formula;
};

}  // namespace pgt
