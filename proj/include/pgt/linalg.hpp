#pragma once

// Exact 3-dimensional linear algebra over Z and Q: Hermite and Smith normal
// forms, and full-rank lattices in Q^3 kept in a canonical form.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pgt/errors.hpp"
#include "pgt/numeric/integer.hpp"

namespace pgt {

using ZVec3 = std::array<mpz_class, 3>;
using QVec3 = std::array<mpq_class, 3>;
using ZMat3 = std::array<ZVec3, 3>;
using QMat3 = std::array<QVec3, 3>;

inline QVec3 to_q(const ZVec3& v) { return {mpq_class(v[0]), mpq_class(v[1]), mpq_class(v[2])}; }

inline QVec3 operator+(const QVec3& a, const QVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline QVec3 operator-(const QVec3& a, const QVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline QVec3 operator*(const mpq_class& s, const QVec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline bool is_integral(const QVec3& v) {
    return v[0].get_den() == 1 && v[1].get_den() == 1 && v[2].get_den() == 1;
}

inline ZVec3 to_z(const QVec3& v) { return {v[0].get_num(), v[1].get_num(), v[2].get_num()}; }

inline mpq_class det(const QMat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline mpz_class det(const ZMat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline QMat3 transpose(const QMat3& m) {
    QMat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
    return t;
}

inline QMat3 inverse(const QMat3& m) {
    const mpq_class d = det(m);
    if (d == 0) throw DivisionByZero("singular 3x3 matrix");
    QMat3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            // cofactor of (j, i)
            const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            r[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
        }
    }
    return r;
}

inline QMat3 mul(const QMat3& a, const QMat3& b) {
    QMat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    return r;
}

/// Row vector times matrix.
inline QVec3 mul(const QVec3& v, const QMat3& m) {
    QVec3 r;
    for (int j = 0; j < 3; ++j) r[j] = v[0] * m[0][j] + v[1] * m[1][j] + v[2] * m[2][j];
    return r;
}

/// Row Hermite normal form of a rank-3 integer row set: upper triangular,
/// positive pivots, entries above each pivot reduced into [0, pivot).
/// Throws DomainError when the rows do not span a rank-3 lattice.
inline ZMat3 hnf(std::vector<ZVec3> rows) {
    ZMat3 h;
    size_t top = 0;
    for (int col = 0; col < 3; ++col) {
        // Euclid on column `col` over rows[top..].
        while (true) {
            size_t best = rows.size();
            for (size_t i = top; i < rows.size(); ++i) {
                if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col]))) best = i;
            }
            if (best == rows.size()) throw DomainError("hnf: rows do not have full rank");
            std::swap(rows[top], rows[best]);
            bool done = true;
            for (size_t i = top + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                const mpz_class q = floor_div(rows[i][col], rows[top][col]);
                for (int k = col; k < 3; ++k) rows[i][k] -= q * rows[top][k];
                if (rows[i][col] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[top][col] < 0)
            for (int k = col; k < 3; ++k) rows[top][k] = -rows[top][k];
        h[static_cast<size_t>(col)] = rows[top];
        ++top;
    }
    for (int j = 1; j < 3; ++j) {
        for (int i = 0; i < j; ++i) {
            const mpz_class q = floor_div(h[i][j], h[j][j]);
            if (q != 0)
                for (int k = j; k < 3; ++k) h[i][k] -= q * h[j][k];
        }
    }
    return h;
}

/// Smith normal form: returns (U, S, V) with U * A * V = S diagonal,
/// U and V unimodular, S[i][i] dividing S[i+1][i+1], all non-negative.
struct SmithForm {
    ZMat3 U, S, V;
};

inline SmithForm smith_normal_form(const ZMat3& a) {
    ZMat3 S = a;
    ZMat3 U, V;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            U[i][j] = (i == j) ? 1 : 0;
            V[i][j] = (i == j) ? 1 : 0;
        }
    auto swap_rows = [&](int r1, int r2) {
        std::swap(S[r1], S[r2]);
        std::swap(U[r1], U[r2]);
    };
    auto swap_cols = [&](int c1, int c2) {
        for (int k = 0; k < 3; ++k) {
            std::swap(S[k][c1], S[k][c2]);
            std::swap(V[k][c1], V[k][c2]);
        }
    };
    for (int t = 0; t < 3; ++t) {
        while (true) {
            // smallest nonzero entry in the trailing block
            int bi = -1, bj = -1;
            for (int i = t; i < 3; ++i)
                for (int j = t; j < 3; ++j)
                    if (S[i][j] != 0 && (bi < 0 || abs(S[i][j]) < abs(S[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi < 0) return {U, S, V};
            swap_rows(t, bi);
            swap_cols(t, bj);
            bool clean = true;
            for (int i = t + 1; i < 3; ++i) {
                const mpz_class q = floor_div(S[i][t], S[t][t]);
                if (q != 0) {
                    for (int k = 0; k < 3; ++k) {
                        S[i][k] -= q * S[t][k];
                        U[i][k] -= q * U[t][k];
                    }
                }
                if (S[i][t] != 0) clean = false;
            }
            for (int j = t + 1; j < 3; ++j) {
                const mpz_class q = floor_div(S[t][j], S[t][t]);
                if (q != 0) {
                    for (int k = 0; k < 3; ++k) {
                        S[k][j] -= q * S[k][t];
                        V[k][j] -= q * V[k][t];
                    }
                }
                if (S[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility condition
            int bad_i = -1;
            for (int i = t + 1; i < 3 && bad_i < 0; ++i)
                for (int j = t + 1; j < 3; ++j)
                    if (S[i][j] % S[t][t] != 0) {
                        bad_i = i;
                        break;
                    }
            if (bad_i < 0) break;
            for (int k = 0; k < 3; ++k) {
                S[t][k] += S[bad_i][k];
                U[t][k] += U[bad_i][k];
            }
        }
        if (S[t][t] < 0) {
            for (int k = 0; k < 3; ++k) {
                S[t][k] = -S[t][k];
                U[t][k] = -U[t][k];
            }
        }
    }
    return {U, S, V};
}

/// A full-rank lattice in Q^3, stored canonically as (den, H) with basis rows
/// H[i] / den, H in row Hermite normal form and gcd(den, H) = 1.
class Lattice {
public:
    Lattice() = default;

    static Lattice from_integer_hnf(mpz_class den, ZMat3 h) {
        Lattice l;
        l.den_ = std::move(den);
        l.h_ = std::move(h);
        l.normalize();
        return l;
    }

    static Lattice from_generators(std::span<const QVec3> gens) {
        mpz_class d = 1;
        for (const auto& g : gens)
            for (const auto& x : g) d = lcm(d, x.get_den());
        std::vector<ZVec3> rows;
        rows.reserve(gens.size());
        for (const auto& g : gens) {
            ZVec3 r;
            for (int k = 0; k < 3; ++k) {
                mpq_class s = g[k] * d;
                r[k] = s.get_num();
            }
            rows.push_back(std::move(r));
        }
        return from_integer_hnf(d, hnf(std::move(rows)));
    }

    static Lattice standard() {
        ZMat3 h;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) h[i][j] = (i == j) ? 1 : 0;
        return from_integer_hnf(1, h);
    }

    const mpz_class& den() const { return den_; }
    const ZMat3& hnf_matrix() const { return h_; }

    QVec3 basis(int i) const {
        return {rational(h_[i][0], den_), rational(h_[i][1], den_), rational(h_[i][2], den_)};
    }
    std::array<QVec3, 3> basis() const { return {basis(0), basis(1), basis(2)}; }
    QMat3 basis_matrix() const { return {basis(0), basis(1), basis(2)}; }

    /// Coordinates of x with respect to the basis (rational in general).
    QVec3 coords(const QVec3& x) const {
        // Solve c * H = den * x, H upper triangular.
        QVec3 y = mpq_class(den_) * x;
        QVec3 c;
        for (int j = 0; j < 3; ++j) {
            mpq_class s = y[j];
            for (int i = 0; i < j; ++i) s -= c[i] * h_[i][j];
            c[j] = s / h_[j][j];
        }
        return c;
    }
    bool contains(const QVec3& x) const { return is_integral(coords(x)); }
    bool contains(const Lattice& o) const {
        for (int i = 0; i < 3; ++i)
            if (!contains(o.basis(i))) return false;
        return true;
    }

    /// |det| of the basis.
    mpq_class covolume() const {
        mpz_class d = h_[0][0] * h_[1][1] * h_[2][2];
        return rational(d, den_ * den_ * den_);
    }

    /// Dual with respect to the standard dot product.
    Lattice dual() const {
        QMat3 inv_t = transpose(inverse(basis_matrix()));
        return from_generators(std::span<const QVec3>(inv_t.data(), 3));
    }

    Lattice scaled(const mpq_class& s) const {
        auto b = basis();
        for (auto& v : b) v = s * v;
        return from_generators(std::span<const QVec3>(b.data(), 3));
    }

    friend Lattice operator+(const Lattice& a, const Lattice& b) {
        std::array<QVec3, 6> g = {a.basis(0), a.basis(1), a.basis(2), b.basis(0), b.basis(1), b.basis(2)};
        return from_generators(std::span<const QVec3>(g.data(), g.size()));
    }

    friend Lattice intersect(const Lattice& a, const Lattice& b) { return (a.dual() + b.dual()).dual(); }

    /// [this : sub] for sub contained in this.
    mpq_class index_of(const Lattice& sub) const { return sub.covolume() / covolume(); }

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.den_ == b.den_ && a.h_ == b.h_; }

    /// Total order: covolume-independent lexicographic order on (den, H).
    friend std::strong_ordering operator<=>(const Lattice& a, const Lattice& b) {
        if (auto c = cmp(a.den_, b.den_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (auto c = cmp(a.h_[i][j], b.h_[i][j]); c != 0)
                    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::string key() const {
        std::string s = den_.get_str();
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) s += "," + h_[i][j].get_str();
        return s;
    }

private:
    void normalize() {
        mpz_class g = den_;
        for (const auto& r : h_)
            for (const auto& x : r) g = gcd(g, x);
        if (g != 1) {
            den_ /= g;
            for (auto& r : h_)
                for (auto& x : r) x /= g;
        }
    }

    mpz_class den_ = 1;
    ZMat3 h_{};
};

}  // namespace pgt
