#pragma once

// Enumeration of lattice points of a rank-3 Z-lattice in F inside a box of
// the Minkowski embedding |sigma_j(y)| <= exp(beta_j). LLL and Fincke-Pohst
// run in doubles on rescaled embeddings; elements are rebuilt exactly.

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "pgt/errors.hpp"
#include "pgt/linalg.hpp"
#include "pgt/number_field.hpp"

namespace pgt {

using Vec3d = std::array<double, 3>;
using Mat3d = std::array<Vec3d, 3>;
using IVec3 = std::array<std::int64_t, 3>;
using IMat3 = std::array<IVec3, 3>;

inline double dot(const Vec3d& a, const Vec3d& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

namespace detail {

/// LLL with delta = 0.99 on the rows of b. Returns the unimodular u with
/// new rows = u * old rows.
inline IMat3 lll3(Mat3d& b) {
    IMat3 u = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    auto gso = [&](Mat3d& bs, std::array<std::array<double, 3>, 3>& mu, Vec3d& nrm) {
        for (int i = 0; i < 3; ++i) {
            bs[i] = b[i];
            for (int j = 0; j < i; ++j) {
                mu[i][j] = dot(b[i], bs[j]) / nrm[j];
                for (int k = 0; k < 3; ++k) bs[i][k] -= mu[i][j] * bs[j][k];
            }
            nrm[i] = dot(bs[i], bs[i]);
        }
    };
    Mat3d bs;
    std::array<std::array<double, 3>, 3> mu{};
    Vec3d nrm{};
    gso(bs, mu, nrm);
    int k = 1, guard = 0;
    while (k < 3) {
        if (++guard > 100000) throw PrecisionExhausted("lll3: no convergence");
        for (int j = k - 1; j >= 0; --j) {
            const double q = std::nearbyint(mu[k][j]);
            if (q != 0.0) {
                const auto qi = static_cast<std::int64_t>(q);
                for (int c = 0; c < 3; ++c) {
                    b[k][c] -= q * b[j][c];
                    u[k][c] -= qi * u[j][c];
                }
                gso(bs, mu, nrm);
            }
        }
        if (nrm[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * nrm[k - 1]) {
            std::swap(b[k], b[k - 1]);
            std::swap(u[k], u[k - 1]);
            gso(bs, mu, nrm);
            k = std::max(k - 1, 1);
        } else {
            ++k;
        }
    }
    return u;
}

inline bool is_identity(const IMat3& u) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (u[i][j] != (i == j ? 1 : 0)) return false;
    return true;
}

inline double det3(const Mat3d& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Fincke-Pohst: all x != 0, one of each pair +-x, with |x b|^2 <= bound.
template <class Fn>
void fincke_pohst(const Mat3d& b, double bound, Fn&& fn) {
    // Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2 from the Gram matrix.
    double q[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q[i][j] = dot(b[i], b[j]);
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for (int k = i + 1; k < 3; ++k)
            for (int l = k; l < 3; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    IVec3 x{};
    const double eps = 1e-12 * bound;
    const double r2 = bound + eps;
    // level 2
    const double c2 = std::sqrt(r2 / q[2][2]);
    for (std::int64_t x2 = 0; x2 <= static_cast<std::int64_t>(std::floor(c2)); ++x2) {
        x[2] = x2;
        const double t2 = q[2][2] * double(x2) * double(x2);
        const double rem2 = r2 - t2;
        if (rem2 < 0) continue;
        const double ctr1 = -q[1][2] * double(x2);
        const double w1 = std::sqrt(rem2 / q[1][1]);
        std::int64_t lo1 = static_cast<std::int64_t>(std::ceil(ctr1 - w1)), hi1 = static_cast<std::int64_t>(std::floor(ctr1 + w1));
        if (x2 == 0) lo1 = std::max<std::int64_t>(lo1, 0);
        for (std::int64_t x1 = lo1; x1 <= hi1; ++x1) {
            x[1] = x1;
            const double d1 = double(x1) - ctr1;
            const double rem1 = rem2 - q[1][1] * d1 * d1;
            if (rem1 < 0) continue;
            const double ctr0 = -q[0][1] * double(x1) - q[0][2] * double(x2);
            const double w0 = std::sqrt(rem1 / q[0][0]);
            std::int64_t lo0 = static_cast<std::int64_t>(std::ceil(ctr0 - w0)), hi0 = static_cast<std::int64_t>(std::floor(ctr0 + w0));
            if (x2 == 0 && x1 == 0) lo0 = std::max<std::int64_t>(lo0, 1);
            for (std::int64_t x0 = lo0; x0 <= hi0; ++x0) {
                x[0] = x0;
                fn(x);
            }
        }
    }
}

}  // namespace detail

/// A lattice point found by BoxSearch: coefficients in the reduced basis and
/// approximate (unscaled) embeddings.
struct BoxPoint {
    IVec3 coeffs;
    Vec3d emb;
};

/// Reduces a lattice basis for a given box shape and enumerates the box.
class BoxSearch {
public:
    BoxSearch(const NumberFieldCubic& F, const std::array<FieldElem, 3>& basis) : F_(F), basis_(basis) {
        for (int i = 0; i < 3; ++i) emb_[i] = F_.embed_accurate(basis_[i]);
        refreshed_ = true;
    }
    /// With embeddings already known to relative accuracy 1e-15.
    BoxSearch(const NumberFieldCubic& F, const std::array<FieldElem, 3>& basis, const Mat3d& emb)
        : F_(F), basis_(basis), emb_(emb) {}

    /// Enumerates one of +-y for every nonzero y in the lattice with
    /// |sigma_j(y)| <= exp(beta_j) (up to a relative slack of 1e-9).
    /// Throws BoxTooLarge when the expected number of points exceeds cap.
    template <class Fn>
    void run(const Vec3d& beta, double cap, Fn&& fn) {
        reduce_for(beta);
        Mat3d sb = scaled(beta);
        const double vol = detail::det3(sb);
        const double expected = 4.0 / 3.0 * std::numbers::pi * std::pow(3.0, 1.5) / std::fabs(vol);
        if (!(expected <= cap)) throw BoxTooLarge("box enumeration: about " + std::to_string(expected) + " points");
        const double slack = 1e-9;
        const Vec3d lim = {std::exp(beta[0]) * (1 + slack), std::exp(beta[1]) * (1 + slack), std::exp(beta[2]) * (1 + slack)};
        detail::fincke_pohst(sb, 3.0 * (1 + 4 * slack), [&](const IVec3& x) {
            Vec3d e{};
            for (int j = 0; j < 3; ++j) {
                e[j] = double(x[0]) * emb_[0][j] + double(x[1]) * emb_[1][j] + double(x[2]) * emb_[2][j];
                if (std::fabs(e[j]) > lim[j]) return;
            }
            fn(BoxPoint{x, e});
        });
    }

    FieldElem element(const IVec3& n) const {
        FieldElem r{mpq_class(0), mpq_class(0), mpq_class(0)};
        for (int i = 0; i < 3; ++i)
            if (n[i] != 0) r = r + mpq_class(mpz_class(static_cast<long>(n[i]))) * basis_[i];
        return r;
    }

    /// Current reduced basis and its embeddings.
    const std::array<FieldElem, 3>& basis() const { return basis_; }
    const Mat3d& embeddings() const { return emb_; }
    /// True once the embeddings have been recomputed from the exact basis.
    bool refreshed() const { return refreshed_; }

    /// Shortest vector (in the scaled L2 sense) of the lattice reduced for beta.
    FieldElem shortest(const Vec3d& beta) {
        reduce_for(beta);
        return basis_[0];
    }

private:
    Mat3d scaled(const Vec3d& beta) const {
        Mat3d s;
        const Vec3d f = {std::exp(-beta[0]), std::exp(-beta[1]), std::exp(-beta[2])};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s[i][j] = emb_[i][j] * f[j];
        return s;
    }

    void reduce_for(const Vec3d& beta) {
        for (int pass = 0; pass < 8; ++pass) {
            Mat3d sb = scaled(beta);
            IMat3 u = detail::lll3(sb);
            if (detail::is_identity(u)) return;
            std::array<FieldElem, 3> nb;
            for (int i = 0; i < 3; ++i) {
                nb[i] = {mpq_class(0), mpq_class(0), mpq_class(0)};
                for (int k = 0; k < 3; ++k)
                    if (u[i][k] != 0) nb[i] = nb[i] + mpq_class(mpz_class(static_cast<long>(u[i][k]))) * basis_[k];
            }
            basis_ = nb;
            for (int i = 0; i < 3; ++i) emb_[i] = F_.embed_accurate(basis_[i]);
            refreshed_ = true;
        }
    }

    const NumberFieldCubic& F_;
    std::array<FieldElem, 3> basis_;
    Mat3d emb_;
    bool refreshed_ = false;
};

}  // namespace pgt
