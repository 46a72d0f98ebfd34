#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pgt/cubic_core.hpp"
#include "pgt/number_field.hpp"

using namespace pgt;

namespace {

// Independent root oracle: bisection in long double on sign changes of a
// coarse grid.
std::vector<long double> bisection_roots(const CubicPoly& p) {
    auto f = [&](long double x) { return ((x + p.a) * x + p.b) * x + p.c; };
    std::vector<long double> out;
    const long double lim = 2 + std::abs(p.a) + std::abs(p.b) + std::abs(p.c);
    const int n = 200000;
    long double prev = -lim, fprev = f(prev);
    for (int i = 1; i <= n; ++i) {
        long double x = -lim + 2 * lim * i / n, fx = f(x);
        if ((fprev < 0) != (fx < 0)) {
            long double lo = prev, hi = x;
            for (int k = 0; k < 100; ++k) {
                long double mid = (lo + hi) / 2;
                if ((f(lo) < 0) != (f(mid) < 0)) hi = mid;
                else lo = mid;
            }
            out.push_back((lo + hi) / 2);
        }
        prev = x;
        fprev = fx;
    }
    std::sort(out.begin(), out.end(), [](long double u, long double v) { return std::fabs(u) > std::fabs(v); });
    return out;
}

// Discriminant as the product of squared root differences, evaluated via a
// resultant of p and p' computed with a 5x5 Sylvester determinant.
long long sylvester_disc(long long a, long long b, long long c) {
    long double m[5][5] = {{1, (long double)a, (long double)b, (long double)c, 0},
                           {0, 1, (long double)a, (long double)b, (long double)c},
                           {3, 2 * (long double)a, (long double)b, 0, 0},
                           {0, 3, 2 * (long double)a, (long double)b, 0},
                           {0, 0, 3, 2 * (long double)a, (long double)b}};
    long double det = 1;
    for (int col = 0; col < 5; ++col) {
        int piv = col;
        for (int r = col; r < 5; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (m[piv][col] == 0) return 0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (int r = col + 1; r < 5; ++r) {
            long double f = m[r][col] / m[col][col];
            for (int k = col; k < 5; ++k) m[r][k] -= f * m[col][k];
        }
    }
    // disc = -Res(p, p') for a monic cubic
    return -std::llround(det);
}

using Mat = std::array<std::array<double, 3>, 3>;
Mat matmul(const Mat& x, const Mat& y) {
    Mat r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += x[i][k] * y[k][j];
    return r;
}

// det(1 - Ad(g^{-1})) on strictly upper triangular matrices, g = diag(e x).
double dense_det_factor(const std::array<double, 3>& x, const SignVector& s) {
    Mat g{}, ginv{};
    for (int i = 0; i < 3; ++i) {
        g[i][i] = s.e[i] * x[i];
        ginv[i][i] = 1.0 / g[i][i];
    }
    const std::array<std::pair<int, int>, 3> idx = {{{0, 1}, {0, 2}, {1, 2}}};
    double m[3][3];
    for (int col = 0; col < 3; ++col) {
        Mat e{};
        e[idx[col].first][idx[col].second] = 1;
        Mat img = matmul(matmul(ginv, e), g);
        for (int row = 0; row < 3; ++row) m[row][col] = (row == col ? 1.0 : 0.0) - img[idx[row].first][idx[row].second];
    }
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

TEST(Discriminant, Examples) {
    EXPECT_EQ(discriminant({-3, 0, 1}), 81);
    EXPECT_EQ(discriminant({0, -1, -1}), -23);
    EXPECT_EQ(discriminant({0, 0, 0}), 0);
}

TEST(Discriminant, MatchesSylvesterResultant) {
    for (int a = -12; a <= 12; ++a)
        for (int b = -12; b <= 12; ++b)
            for (int c = -5; c <= 5; ++c) EXPECT_EQ(discriminant({a, b, c}), mpz_class(static_cast<long>(sylvester_disc(a, b, c)))) << a << b << c;
}

TEST(Admissible, Examples) {
    EXPECT_TRUE(is_admissible_unit_poly({-3, 0, 1}));
    EXPECT_FALSE(is_admissible_unit_poly({0, -1, -1}));
    EXPECT_FALSE(is_admissible_unit_poly({-1, -1, 1}));
    EXPECT_FALSE(is_admissible_unit_poly({-3, 0, 2}));
}

TEST(Roots, Examples) {
    auto check = [](CubicPoly p, std::array<double, 3> want) {
        EmbeddingTriple e = isolate_real_roots(p);
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(e.rho[i].mid_double(), want[i], 1e-4) << p.to_string();
    };
    check({-3, 0, 1}, {2.8794, 0.6527, -0.5321});
    check({1, -2, -1}, {-1.8019, 1.2470, -0.4450});
    check({2, -1, -1}, {-2.2470, 0.8019, -0.5550});
}

TEST(Roots, EnclosuresAgainstBisectionAndCoefficients) {
    for (int a = -15; a <= 15; ++a)
        for (int b = -15; b <= 15; ++b)
            for (int c : {-1, 1}) {
                CubicPoly p{a, b, c};
                if (!is_admissible_unit_poly(p) || has_opposite_roots(p)) continue;
                EmbeddingTriple e = isolate_real_roots(p, 128);
                auto oracle = bisection_roots(p);
                ASSERT_EQ(oracle.size(), 3u);
                for (int i = 0; i < 3; ++i) {
                    EXPECT_NEAR(e.rho[i].mid_double(), (double)oracle[i], 1e-9);
                    EXPECT_TRUE(e.rho[i].narrower_than_bits(100));
                }
                EXPECT_TRUE((e.rho[0] + e.rho[1] + e.rho[2]).contains(mpq_class(-a)));
                EXPECT_TRUE((e.rho[0] * e.rho[1] * e.rho[2]).contains(mpq_class(-c)));
                EXPECT_TRUE((e.rho[0] * e.rho[1] + e.rho[0] * e.rho[2] + e.rho[1] * e.rho[2]).contains(mpq_class(b)));
                EXPECT_TRUE(abs(e.rho[0]).certainly_gt(abs(e.rho[1])));
                EXPECT_TRUE(abs(e.rho[1]).certainly_gt(abs(e.rho[2])));
            }
}

TEST(Roots, OppositeRootsRejected) {
    // x^3 - x^2 - 4x + 4 = (x - 1)(x - 2)(x + 2)
    EXPECT_THROW(isolate_real_roots({-1, -4, 4}), NotSplitRegular);
    EXPECT_THROW(isolate_real_roots({0, -1, -1}), DomainError);
}

TEST(Alpha, Examples) {
    auto oracle = [](CubicPoly p) {
        auto r = bisection_roots(p);
        const long double m1 = std::fabs(r[0]), m2 = std::fabs(r[1]), m3 = std::fabs(r[2]);
        return std::array<double, 2>{(double)(m1 * m3 / (m2 * m2)), (double)((m2 / m3) * (m2 / m3))};
    };
    for (CubicPoly p : {CubicPoly{-3, 0, 1}, CubicPoly{1, -2, -1}, CubicPoly{2, -1, -1}}) {
        ChamberPoint cp = alpha_invariants(isolate_real_roots(p));
        auto want = oracle(p);
        EXPECT_NEAR(cp.alpha1.mid_double(), want[0], 1e-12);
        EXPECT_NEAR(cp.alpha2.mid_double(), want[1], 1e-12);
    }
    ChamberPoint a = alpha_invariants(isolate_real_roots({-3, 0, 1}));
    EXPECT_NEAR(a.alpha1.mid_double(), 3.596, 1e-3);
    EXPECT_NEAR(a.alpha2.mid_double(), 1.5046, 1e-3);
    EXPECT_NEAR(a.l_value.mid_double(), 0.5230, 1e-3);
    ChamberPoint b = alpha_invariants(isolate_real_roots({1, -2, -1}));
    EXPECT_NEAR(b.alpha1.mid_double(), 0.5157, 1e-3);
    ChamberPoint c = alpha_invariants(isolate_real_roots({2, -1, -1}));
    EXPECT_NEAR(c.alpha1.mid_double(), 1.9397, 1e-3);
    EXPECT_NEAR(c.alpha2.mid_double(), 2.0877, 1e-3);
}

TEST(Alpha, ChangeOfCoordinates) {
    for (CubicPoly p : {CubicPoly{-3, 0, 1}, CubicPoly{2, -1, -1}, CubicPoly{-7, 2, 1}, CubicPoly{4, -9, -1}}) {
        ASSERT_TRUE(is_admissible_unit_poly(p));
        EmbeddingTriple e = isolate_real_roots(p, 256);
        ChamberPoint cp = alpha_invariants(e);
        const Precision pr = 256;
        Interval a43 = pow_rational(cp.alpha1, 4, 3);
        Interval am23 = pow_rational(cp.alpha1, -2, 3);
        EXPECT_TRUE((a43 * cp.alpha2).overlaps(sqr(e.rho[0])));
        EXPECT_TRUE(am23.overlaps(sqr(e.rho[1])));
        EXPECT_TRUE((am23 / cp.alpha2).overlaps(sqr(e.rho[2])));
        EXPECT_TRUE(cp.alpha2.certainly_gt(Interval::from_long(1, pr)));
    }
}

TEST(Chamber, Examples) {
    ChamberPoint a = alpha_invariants(isolate_real_roots({-3, 0, 1}));
    EXPECT_TRUE(in_chamber(a, 10, 10));
    EXPECT_FALSE(in_chamber(a, 2, 10));
    ChamberPoint b = alpha_invariants(isolate_real_roots({1, -2, -1}));
    EXPECT_FALSE(in_chamber(b, 10, 10));
    ChamberDecision d = decide_chamber({-3, 0, 1}, 10, 10);
    EXPECT_TRUE(d.inside);
    EXPECT_FALSE(d.straddled);
}

TEST(Eta, Examples) {
    EXPECT_EQ(eta_trace_exact({-3, 0, 1}), 3);
    EXPECT_EQ(eta_trace_exact({2, -1, -1}), 1);
    EXPECT_EQ(eta_trace_exact({-1, -1, 1}), 0);
    EmbeddingTriple e = isolate_real_roots({-3, 0, 1});
    double prod = 1;
    for (auto r : e.approx()) prod *= r * r - 1;
    EXPECT_NEAR(prod, 3.0, 1e-9);
}

TEST(Eta, AntisymmetryAndVanishing) {
    for (int a = -50; a <= 50; ++a)
        for (int b = -50; b <= 50; ++b)
            for (int c : {-1, 1}) {
                CubicPoly p{a, b, c};
                EXPECT_EQ(eta_trace_exact(reciprocal_poly(p)), -eta_trace_exact(p));
                if (p.eval_at_one() == 0 || p.eval_at_minus_one() == 0) {
                    EXPECT_EQ(eta_trace_exact(p), 0);
                }
            }
}

TEST(Eta, NormalizedMatchesModuli) {
    for (CubicPoly p : {CubicPoly{-3, 0, 1}, CubicPoly{-20, 3, 1}, CubicPoly{-40, -45, -1}}) {
        EmbeddingTriple e = isolate_real_roots(p);
        ChamberPoint cp = alpha_invariants(e);
        const double a1 = cp.alpha1.mid_double(), a2 = cp.alpha2.mid_double();
        double via_eta = eta_trace_exact(p).get_d() * std::pow(a1, -4.0 / 3.0) / a2;
        EXPECT_NEAR(via_eta, eta_normalized(a1, a2), 1e-12 * (1 + std::fabs(via_eta))) << p.to_string();
    }
}

TEST(Reciprocal, Examples) {
    EXPECT_EQ(reciprocal_poly({1, -2, -1}), (CubicPoly{2, -1, -1}));
    EXPECT_EQ(reciprocal_poly({-3, 0, 1}), (CubicPoly{0, -3, 1}));
    EXPECT_THROW(reciprocal_poly({1, 1, 2}), NotUnit);
}

TEST(Reciprocal, IsCharpolyOfInverse) {
    for (CubicPoly p : {CubicPoly{-3, 0, 1}, CubicPoly{1, -2, -1}, CubicPoly{-5, 2, 1}}) {
        NumberFieldCubic F(p);
        EXPECT_EQ(F.charpoly_integral(F.inverse(NumberFieldCubic::gen())), reciprocal_poly(p));
    }
}

TEST(Galois, Multiplicity) {
    EXPECT_EQ(galois_multiplicity({-3, 0, 1}), 3);
    EXPECT_EQ(galois_multiplicity({1, -2, -1}), 3);
    EXPECT_EQ(galois_multiplicity({-1, -3, 1}), 1);
}

TEST(CanonicalSign, Rules) {
    EXPECT_EQ(canonical_sign_rep({3, 0, -1}), (CubicPoly{-3, 0, 1}));
    EXPECT_EQ(canonical_sign_rep({0, -3, 1}), (CubicPoly{0, -3, -1}));
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(-60, 60);
    int n = 0;
    while (n < 1000) {
        CubicPoly p{d(rng), d(rng), (rng() & 1) ? 1 : -1};
        if (!is_admissible_unit_poly(p)) continue;
        ++n;
        EXPECT_EQ(canonical_sign_rep(canonical_sign_rep(p)), canonical_sign_rep(p));
        EXPECT_EQ(canonical_sign_rep(p.mirror()), canonical_sign_rep(p));
    }
}

TEST(NilpotentFactor, Examples) {
    EXPECT_NEAR(det_nilpotent_factor({4, 1, 0.25}, {{1, 1, 1}}), 135.0 / 256.0, 1e-15);
    EXPECT_NEAR(det_nilpotent_factor({4, 1, 0.25}, {{1, -1, -1}}), 0.99609375, 1e-15);
    EXPECT_NEAR(index_factor(1.0, {4, 1, 0.25}, {{1, 1, 1}}), 256.0 / 135.0, 1e-12);
    EXPECT_EQ(index_factor(0.0, {4, 1, 0.25}, {{1, 1, 1}}), 0.0);
    EXPECT_THROW(index_factor(1.0, {1, 1, 1}, {{1, 1, 1}}), DivisionByZero);
}

TEST(NilpotentFactor, MatchesDenseMatrix) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int i = 0; i < 1000; ++i) {
        double x1 = 1 + u(rng), x3 = 1 / (1 + u(rng)), x2 = 1 / (x1 * x3);
        std::array<double, 3> m = {x1, x2, x3};
        std::sort(m.begin(), m.end(), std::greater<>());
        SignVector s{{(rng() & 1) ? 1 : -1, (rng() & 1) ? 1 : -1, (rng() & 1) ? 1 : -1}};
        const double got = det_nilpotent_factor(m, s), want = dense_det_factor(m, s);
        EXPECT_LE(std::fabs(got - want), 1e-12 * std::fabs(want));
    }
}

TEST(NumberField, Arithmetic) {
    NumberFieldCubic F({-3, 0, 1});
    const FieldElem t = NumberFieldCubic::gen();
    EXPECT_EQ(F.norm(t), -1);
    EXPECT_EQ(F.trace(t), 3);
    FieldElem t3 = F.mul(t, F.mul(t, t));
    EXPECT_EQ(t3, (FieldElem{mpq_class(-1), mpq_class(0), mpq_class(3)}));
    EXPECT_EQ(F.mul(t, F.inverse(t)), NumberFieldCubic::one());
    EXPECT_THROW(NumberFieldCubic({-3, 3, -1}), Reducible);

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-9, 9);
    auto rnd = [&] { return FieldElem{rational(d(rng), 1 + static_cast<long>(rng() % 3)), mpq_class(d(rng)), rational(d(rng), 2)}; };
    for (int i = 0; i < 200; ++i) {
        FieldElem x = rnd(), y = rnd(), z = rnd();
        EXPECT_EQ(F.mul(x, y), F.mul(y, x));
        EXPECT_EQ(F.mul(F.mul(x, y), z), F.mul(x, F.mul(y, z)));
        EXPECT_EQ(F.norm(F.mul(x, y)), F.norm(x) * F.norm(y));
    }
}

TEST(CubicCore, NormalizedEtaDeepInChamber) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 1000; ++i) {
        const double a1 = 100 * std::pow(1e3, u(rng)), a2 = 100 * std::pow(1e3, u(rng));
        const double v = eta_normalized(a1, a2);
        EXPECT_GE(v, 0.9);
        EXPECT_LE(v, 1.0);
        // middle modulus alpha1^{-1/3} dominates the deficit
        EXPECT_NEAR(1 - v, std::pow(a1, -2.0 / 3.0), 2 * std::pow(a1, -2.0 / 3.0) / a2 + 2 * std::pow(a1, -4.0 / 3.0));
    }
    for (int i = 0; i < 1000; ++i) {
        const double a1 = 1e5 * std::pow(1e3, u(rng)), a2 = 1e5 * std::pow(1e3, u(rng));
        const double v = eta_normalized(a1, a2);
        EXPECT_GE(v, 0.999);
        EXPECT_LE(v, 1.0);
    }
}
