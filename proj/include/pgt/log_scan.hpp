#pragma once

// Exhaustive search over regions of the logarithmic embedding. The trace-zero
// plane is cut into small cells; each cell carries an anchor mu in O placed
// near the cell, so that the box search for that cell runs on the nearly
// isotropic lattice mu^{-1} O instead of a very skewed box in O.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "pgt/errors.hpp"
#include "pgt/lattice_enum.hpp"
#include "pgt/number_field.hpp"
#include "pgt/order.hpp"

namespace pgt {

inline Vec3d log_abs(const Vec3d& e) { return {std::log(std::fabs(e[0])), std::log(std::fabs(e[1])), std::log(std::fabs(e[2]))}; }

inline Vec3d plane_part(const Vec3d& l) {
    const double m = (l[0] + l[1] + l[2]) / 3.0;
    return {l[0] - m, l[1] - m, l[2] - m};
}

inline Vec3d operator+(const Vec3d& a, const Vec3d& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3d operator-(const Vec3d& a, const Vec3d& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3d operator*(double s, const Vec3d& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double norm2(const Vec3d& a) { return std::sqrt(dot(a, a)); }

/// Coordinates of a plane vector in the basis (e1, e2).
inline std::array<double, 2> plane_coords(const Vec3d& x, const Vec3d& e1, const Vec3d& e2) {
    const double g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
    const double r1 = dot(x, e1), r2 = dot(x, e2);
    const double det = g11 * g22 - g12 * g12;
    return {(r1 * g22 - r2 * g12) / det, (r2 * g11 - r1 * g12) / det};
}

inline std::array<FieldElem, 3> lattice_basis(const Lattice& l) {
    auto b = l.basis();
    return {b[0], b[1], b[2]};
}

/// Element mu of O with known log embedding, together with a reduced basis of
/// mu^{-1} O.
struct Anchor {
    FieldElem mu = NumberFieldCubic::one();
    mpq_class norm = 1;  ///< N(mu)
    Vec3d log_mu{};
    std::array<FieldElem, 3> inv_basis;
    Mat3d inv_emb{};  ///< embeddings of inv_basis
    int carried = 0;  ///< steps since inv_emb was last computed from scratch
};

/// Moves an anchor through the log plane in short steps.
class Walker {
public:
    Walker(const NumberFieldCubic& F, const Lattice& order) : F_(F) {
        a_.inv_basis = lattice_basis(order);
        for (int i = 0; i < 3; ++i) a_.inv_emb[i] = F_.embed_accurate(a_.inv_basis[i]);
    }

    const Anchor& anchor() const { return a_; }

    /// Re-anchors near the plane point `target`. Steps must stay short
    /// (a few units of log) to keep the reduction well conditioned.
    void move_to(const Vec3d& target) {
        const Vec3d delta = target - plane_part(a_.log_mu);
        BoxSearch bs = a_.carried < 16 ? BoxSearch(F_, a_.inv_basis, a_.inv_emb) : BoxSearch(F_, a_.inv_basis);
        const FieldElem nu = bs.shortest(delta);
        const FieldElem nu_inv = F_.inverse(nu);
        const Vec3d en = bs.embeddings()[0];
        a_.mu = F_.mul(a_.mu, nu);
        a_.norm *= F_.norm(nu);
        a_.log_mu = a_.log_mu + log_abs(en);
        for (int i = 0; i < 3; ++i) {
            a_.inv_basis[i] = F_.mul(nu_inv, bs.basis()[i]);
            for (int j = 0; j < 3; ++j) a_.inv_emb[i][j] = bs.embeddings()[i][j] / en[j];
        }
        a_.carried = bs.refreshed() ? 1 : a_.carried + 1;
    }

private:
    const NumberFieldCubic& F_;
    Anchor a_;
};

/// Cells covering { s e1 + t e2 : s in [s0, s1], t in [t0, t1] } in the
/// trace-zero plane, each with an anchor taken from a shared walker.
class CellGrid {
public:
    struct Cell {
        Vec3d corner_max{};  ///< coordinatewise max over the cell
        Vec3d center{};
        Anchor anchor;
    };

    CellGrid(const NumberFieldCubic& F, Walker& w, const Vec3d& e1, const Vec3d& e2, std::array<double, 2> srange,
             std::array<double, 2> trange, double step = 3.0)
        : F_(F) {
        const double ls = norm2(e1) * (srange[1] - srange[0]), lt = norm2(e2) * (trange[1] - trange[0]);
        const long ns = std::max(1L, static_cast<long>(std::ceil(ls / step)));
        const long nt = std::max(1L, static_cast<long>(std::ceil(lt / step)));
        cells_.reserve(static_cast<size_t>(ns * nt));
        for (long it = 0; it < nt; ++it) {
            for (long k = 0; k < ns; ++k) {
                const long is = (it % 2 == 0) ? k : ns - 1 - k;  // snake order keeps steps short
                const double s_lo = srange[0] + (srange[1] - srange[0]) * double(is) / double(ns);
                const double s_hi = srange[0] + (srange[1] - srange[0]) * double(is + 1) / double(ns);
                const double t_lo = trange[0] + (trange[1] - trange[0]) * double(it) / double(nt);
                const double t_hi = trange[0] + (trange[1] - trange[0]) * double(it + 1) / double(nt);
                Cell c;
                const std::array<Vec3d, 4> corners = {s_lo * e1 + t_lo * e2, s_hi * e1 + t_lo * e2, s_lo * e1 + t_hi * e2,
                                                      s_hi * e1 + t_hi * e2};
                for (int j = 0; j < 3; ++j) {
                    c.corner_max[j] = corners[0][j];
                    for (const auto& p : corners) c.corner_max[j] = std::max(c.corner_max[j], p[j]);
                }
                c.center = 0.5 * (s_lo + s_hi) * e1 + 0.5 * (t_lo + t_hi) * e2;
                w.move_to(c.center);
                c.anchor = w.anchor();
                cells_.push_back(std::move(c));
            }
        }
    }

    const std::vector<Cell>& cells() const { return cells_; }

    /// For every cell, enumerates y in mu^{-1} O such that x = mu y satisfies
    /// |sigma_j(x)| <= exp(corner_max_j + smax / 3). `fn(cell, search, point,
    /// log_x)` receives one of each +-y; the same x may be reported by
    /// neighbouring cells.
    template <class Fn>
    void scan(double smax, double cap, Fn&& fn) const {
        const double pad = 1e-7;
        for (const Cell& c : cells_) {
            BoxSearch bs(F_, c.anchor.inv_basis, c.anchor.inv_emb);
            Vec3d beta;
            for (int j = 0; j < 3; ++j) beta[j] = c.corner_max[j] + smax / 3.0 - c.anchor.log_mu[j] + pad;
            bs.run(beta, cap, [&](const BoxPoint& p) {
                const Vec3d lx = c.anchor.log_mu + log_abs(p.emb);
                fn(c, bs, p, lx);
            });
        }
    }

private:
    const NumberFieldCubic& F_;
    std::vector<Cell> cells_;
};

}  // namespace pgt
