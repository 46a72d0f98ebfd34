#pragma once

// Orders of a cubic field as canonical lattices: the equation order, the
// maximal order by radical saturation, all intermediate orders, conductors.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pgt/errors.hpp"
#include "pgt/linalg.hpp"
#include "pgt/number_field.hpp"
#include "pgt/numeric/integer.hpp"

namespace pgt {

/// A rank-3 subring of F, stored by its canonical lattice in power-basis
/// coordinates.
struct OrderLattice {
    Lattice lattice;
    mpz_class disc;
    mpz_class index_in_maximal = 0;  ///< 0 until the maximal order is known

    friend bool operator==(const OrderLattice& a, const OrderLattice& b) { return a.lattice == b.lattice; }
};

struct Conductor {
    Lattice ideal;
    mpz_class norm;  ///< [O_F : f]
};

// ---------------------------------------------------------------------------
// Lattice arithmetic inside the field

inline Lattice element_times(const NumberFieldCubic& F, const FieldElem& x, const Lattice& l) {
    std::array<QVec3, 3> g;
    for (int i = 0; i < 3; ++i) g[i] = F.mul(x, l.basis(i));
    return Lattice::from_generators(std::span<const QVec3>(g.data(), 3));
}

inline Lattice lattice_product(const NumberFieldCubic& F, const Lattice& a, const Lattice& b) {
    std::array<QVec3, 9> g;
    const auto ba = a.basis(), bb = b.basis();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[3 * i + j] = F.mul(ba[i], bb[j]);
    return Lattice::from_generators(std::span<const QVec3>(g.data(), g.size()));
}

/// (A : B) = { x in F : x B subset A }.
inline Lattice colon(const NumberFieldCubic& F, const Lattice& a, const Lattice& b) {
    std::optional<Lattice> acc;
    for (int j = 0; j < 3; ++j) {
        Lattice part = element_times(F, F.inverse(b.basis(j)), a);
        acc = acc ? intersect(*acc, part) : part;
    }
    return *acc;
}

inline bool is_ring(const NumberFieldCubic& F, const Lattice& l) {
    if (!l.contains(NumberFieldCubic::one())) return false;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            if (!l.contains(F.mul(l.basis(i), l.basis(j)))) return false;
    return true;
}

inline OrderLattice make_order(const NumberFieldCubic& F, const Lattice& l) {
    OrderLattice o;
    o.lattice = l;
    mpq_class d = mpq_class(F.poly_discriminant()) * l.covolume() * l.covolume();
    if (d.get_den() != 1) throw DomainError("order discriminant is not integral");
    o.disc = d.get_num();
    return o;
}

inline OrderLattice equation_order(const NumberFieldCubic& F) { return make_order(F, Lattice::standard()); }

inline bool contains_element(const OrderLattice& o, const FieldElem& x) { return o.lattice.contains(x); }

/// Structure constants of the order in its own basis: b_i b_j = sum_k T[i][j][k] b_k.
using MultTable = std::array<std::array<ZVec3, 3>, 3>;

inline MultTable multiplication_table(const NumberFieldCubic& F, const Lattice& o) {
    MultTable t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            QVec3 c = o.coords(F.mul(o.basis(i), o.basis(j)));
            if (!is_integral(c)) throw DomainError("multiplication_table: lattice is not a ring");
            t[i][j] = to_z(c);
        }
    return t;
}

// ---------------------------------------------------------------------------
// Linear algebra over Z/q

namespace detail {

using ModVec = std::array<long, 3>;

inline ModVec mod_mul(const MultTable& t, const ModVec& x, const ModVec& y, long q) {
    ModVec r{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < 3; ++j) {
            if (y[j] == 0) continue;
            const __int128 xy = static_cast<__int128>(x[i]) * y[j] % q;
            for (int k = 0; k < 3; ++k) {
                const long tk = mod_floor(t[i][j][k], mpz_class(q)).get_si();
                r[k] = static_cast<long>((r[k] + xy * tk) % q);
            }
        }
    }
    return r;
}

inline ModVec mod_pow(const MultTable& t, ModVec x, mpz_class e, long q, const ModVec& one) {
    ModVec r = one;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mod_mul(t, r, x, q);
        x = mod_mul(t, x, x, q);
        e >>= 1;
    }
    return r;
}

/// Basis of the left kernel { v : v M = 0 } over F_q of an n x 3 matrix.
inline std::vector<std::vector<long>> left_kernel_mod(std::vector<std::array<long, 3>> rows, long q) {
    const size_t n = rows.size();
    // Gaussian elimination on [M | I].
    std::vector<std::vector<long>> aug(n, std::vector<long>(3 + n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (int j = 0; j < 3; ++j) aug[i][static_cast<size_t>(j)] = ((rows[i][static_cast<size_t>(j)] % q) + q) % q;
        aug[i][3 + i] = 1;
    }
    size_t r = 0;
    for (size_t col = 0; col < 3 && r < n; ++col) {
        size_t piv = n;
        for (size_t i = r; i < n; ++i)
            if (aug[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv == n) continue;
        std::swap(aug[r], aug[piv]);
        const long inv = mod_inverse(aug[r][col], q);
        for (auto& v : aug[r]) v = static_cast<long>(static_cast<__int128>(v) * inv % q);
        for (size_t i = 0; i < n; ++i) {
            if (i == r || aug[i][col] == 0) continue;
            const long f = aug[i][col];
            for (size_t k = 0; k < aug[i].size(); ++k)
                aug[i][k] = static_cast<long>(((aug[i][k] - static_cast<__int128>(f) * aug[r][k]) % q + q) % q);
        }
        ++r;
    }
    std::vector<std::vector<long>> ker;
    for (size_t i = r; i < n; ++i) ker.emplace_back(aug[i].begin() + 3, aug[i].end());
    return ker;
}

}  // namespace detail

/// q-radical of an order: { x in O : x^(q^k) in qO } with q^k >= 3.
inline Lattice radical(const NumberFieldCubic& F, const Lattice& o, long q) {
    const MultTable t = multiplication_table(F, o);
    const QVec3 one_c = o.coords(NumberFieldCubic::one());
    detail::ModVec one;
    for (int i = 0; i < 3; ++i) one[i] = mod_floor(one_c[i].get_num(), mpz_class(q)).get_si();
    mpz_class e = q;
    while (e < 3) e *= q;
    std::vector<std::array<long, 3>> images;
    for (int i = 0; i < 3; ++i) {
        detail::ModVec ei{0, 0, 0};
        ei[i] = 1;
        images.push_back(detail::mod_pow(t, ei, e, q, one));
    }
    auto ker = detail::left_kernel_mod(images, q);
    std::vector<QVec3> gens;
    const auto b = o.basis();
    for (const auto& v : ker) {
        QVec3 x{0, 0, 0};
        for (int i = 0; i < 3; ++i) x = x + mpq_class(v[static_cast<size_t>(i)]) * b[i];
        gens.push_back(x);
    }
    for (int i = 0; i < 3; ++i) gens.push_back(mpq_class(q) * b[i]);
    return Lattice::from_generators(gens);
}

/// Ring of multipliers { x : x U subset U }.
inline Lattice multiplier_ring(const NumberFieldCubic& F, const Lattice& u) { return colon(F, u, u); }

struct MaximalOrderOptions {
    unsigned long trial_bound = 1'000'000;
};

/// Primes q with q^2 dividing n. Throws Incomplete when an unfactored square
/// part may remain.
inline std::vector<long> square_dividing_primes(const mpz_class& n, unsigned long bound) {
    TrialFactorization tf = trial_factor(n, bound);
    std::vector<long> out;
    for (const auto& [p, e] : tf.factors)
        if (e >= 2) out.push_back(to_i64(p));
    const mpz_class& c = tf.cofactor;
    if (c > 1 && !is_probable_prime(c)) {
        if (is_perfect_square(c) && is_probable_prime(isqrt(c))) {
            out.push_back(to_i64(isqrt(c)));
        } else if (c >= mpz_class(bound) * bound * bound) {
            throw Incomplete("unfactored part of the discriminant may contain a square: " + c.get_str());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Saturates `start` (an order of F) to the maximal order.
inline OrderLattice maximal_order(const NumberFieldCubic& F, const OrderLattice& start, const MaximalOrderOptions& opt = {}) {
    Lattice o = start.lattice;
    for (long q : square_dividing_primes(make_order(F, o).disc, opt.trial_bound)) {
        while (true) {
            mpz_class d = make_order(F, o).disc;
            if (!mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(q * q))) break;
            Lattice u = radical(F, o, q);
            Lattice next = multiplier_ring(F, u);
            if (next == o) break;
            o = next;
        }
    }
    OrderLattice out = make_order(F, o);
    out.index_in_maximal = 1;
    return out;
}

inline OrderLattice maximal_order(const NumberFieldCubic& F, const MaximalOrderOptions& opt = {}) {
    return maximal_order(F, equation_order(F), opt);
}

/// [outer : inner] for inner subset outer.
inline mpz_class lattice_index(const Lattice& outer, const Lattice& inner) {
    mpq_class r = outer.index_of(inner);
    if (r.get_den() != 1) throw DomainError("lattice_index: not a sublattice");
    return r.get_num();
}

/// Every order O with omin subset O subset omax, sorted by decreasing index
/// in omax (so omin first, omax last).
inline std::vector<OrderLattice> intermediate_orders(const NumberFieldCubic& F, const OrderLattice& omin,
                                                     const OrderLattice& omax) {
    ZMat3 a;
    for (int i = 0; i < 3; ++i) {
        QVec3 c = omax.lattice.coords(omin.lattice.basis(i));
        if (!is_integral(c)) throw DomainError("intermediate_orders: omin is not contained in omax");
        a[i] = to_z(c);
    }
    SmithForm snf = smith_normal_form(a);
    QMat3 vq;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) vq[i][j] = snf.V[i][j];
    const QMat3 r = inverse(vq);  // rows: new basis of omax in omax coordinates
    const QMat3 omax_basis = omax.lattice.basis_matrix();
    const QMat3 to_power = mul(r, omax_basis);
    std::array<long, 3> s;
    for (int i = 0; i < 3; ++i) s[i] = to_i64(snf.S[i][i]);

    std::vector<OrderLattice> out;
    for (long d2 : divisors(s[2])) {
        for (long d1 : divisors(s[1])) {
            for (long x12 = 0; x12 < d2; ++x12) {
                if (((s[1] / d1) * x12) % d2 != 0) continue;
                for (long d0 : divisors(s[0])) {
                    const long m0 = s[0] / d0;
                    for (long x01 = 0; x01 < d1; ++x01) {
                        if ((m0 * x01) % d1 != 0) continue;
                        const long k1 = -(m0 * x01) / d1;
                        for (long x02 = 0; x02 < d2; ++x02) {
                            if ((m0 * x02 + k1 * x12) % d2 != 0) continue;
                            const std::array<std::array<long, 3>, 3> h = {
                                {{d0, x01, x02}, {0, d1, x12}, {0, 0, d2}}};
                            std::array<QVec3, 3> gens;
                            for (int i = 0; i < 3; ++i) {
                                QVec3 row{mpq_class(h[i][0]), mpq_class(h[i][1]), mpq_class(h[i][2])};
                                gens[i] = mul(row, to_power);
                            }
                            Lattice l = Lattice::from_generators(std::span<const QVec3>(gens.data(), 3));
                            if (!is_ring(F, l)) continue;
                            OrderLattice o = make_order(F, l);
                            if (omax.index_in_maximal != 0)
                                o.index_in_maximal = omax.index_in_maximal * lattice_index(omax.lattice, l);
                            out.push_back(std::move(o));
                        }
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const OrderLattice& x, const OrderLattice& y) {
        if (x.disc != y.disc) return abs(x.disc) > abs(y.disc);
        return x.lattice < y.lattice;
    });
    return out;
}

/// Largest O_F-ideal contained in O: { x in O_F : x O_F subset O }.
inline Conductor conductor(const NumberFieldCubic& F, const OrderLattice& o, const OrderLattice& of) {
    Lattice f = colon(F, o.lattice, of.lattice);
    return {f, lattice_index(of.lattice, f)};
}

}  // namespace pgt
