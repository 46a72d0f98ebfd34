#include <gtest/gtest.h>

#include <set>

#include "pgt/order.hpp"

using namespace pgt;

namespace {

struct IndexCase {
    CubicPoly p;
    long disc_poly, disc_field, index;
};

// Field discriminants computed independently with a computer algebra system
// (round-two algorithm) and frozen here.
const IndexCase kIndexCases[] = {
    {{-3, 0, 1}, 81, 81, 1},       {{1, -2, -1}, 49, 49, 1},      {{-1, -3, 1}, 148, 148, 1},
    {{-9, -1, 1}, 3136, 49, 8},    {{-8, 5, 1}, 2401, 49, 7},     {{-10, 3, 1}, 4225, 169, 5},
    {{-11, 7, -1}, 592, 148, 2},   {{-6, 3, 1}, 729, 81, 3},      {{-12, -9, 1}, 23409, 81, 17},
    {{-12, -3, 1}, 8937, 993, 3},  {{-11, -9, 1}, 19796, 404, 7}, {{-7, -5, 1}, 3700, 148, 5},
};

// All subgroups between omin and omax, by closing every subset of coset
// representatives. Only for tiny quotients.
std::set<Lattice> brute_force_rings(const NumberFieldCubic& F, const Lattice& omin, const Lattice& omax) {
    const mpz_class n = lattice_index(omax, omin);
    std::vector<QVec3> reps;
    const auto b = omax.basis();
    const long lim = n.get_si();
    for (long i = 0; i < lim; ++i)
        for (long j = 0; j < lim; ++j)
            for (long k = 0; k < lim; ++k) {
                QVec3 x = mpq_class(i) * b[0] + mpq_class(j) * b[1] + mpq_class(k) * b[2];
                bool fresh = true;
                for (const auto& r : reps)
                    if (omin.contains(x - r)) fresh = false;
                if (fresh) reps.push_back(x);
            }
    std::set<Lattice> out;
    const size_t m = reps.size();
    const auto base = omin.basis();
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
        std::vector<QVec3> gens(base.begin(), base.end());
        for (size_t i = 0; i < m; ++i)
            if (mask & (1ul << i)) gens.push_back(reps[i]);
        Lattice l = Lattice::from_generators(gens);
        if (is_ring(F, l)) out.insert(l);
    }
    return out;
}

// An over-order of index divisible by q contains an integral x in o/q \ o.
bool has_integral_element_in(const NumberFieldCubic& F, const Lattice& o, long q) {
    const auto b = o.basis();
    for (long i = 0; i < q; ++i)
        for (long j = 0; j < q; ++j)
            for (long k = 0; k < q; ++k) {
                if (i == 0 && j == 0 && k == 0) continue;
                QVec3 x = rational(i, q) * b[0] + rational(j, q) * b[1] + rational(k, q) * b[2];
                bool integral = true;
                for (const auto& c : F.charpoly(x))
                    if (c.get_den() != 1) integral = false;
                if (integral) return true;
            }
    return false;
}

}  // namespace

TEST(Order, EquationOrderDisc) {
    EXPECT_EQ(equation_order(NumberFieldCubic({-3, 0, 1})).disc, 81);
    EXPECT_EQ(equation_order(NumberFieldCubic({1, -2, -1})).disc, 49);
    EXPECT_EQ(equation_order(NumberFieldCubic({-1, -3, 1})).disc, 148);
}

TEST(Order, MaximalOrderMatchesReference) {
    for (const auto& c : kIndexCases) {
        NumberFieldCubic F(c.p);
        OrderLattice zl = equation_order(F);
        EXPECT_EQ(zl.disc, c.disc_poly);
        OrderLattice ok = maximal_order(F);
        EXPECT_EQ(ok.disc, c.disc_field) << c.p.to_string();
        EXPECT_EQ(lattice_index(ok.lattice, zl.lattice), c.index);
        EXPECT_TRUE(is_ring(F, ok.lattice));
        EXPECT_EQ(maximal_order(F, ok).lattice, ok.lattice);
        for (const auto& [q, e] : trial_factor(ok.disc, 1000).factors)
            if (e >= 2) {
                EXPECT_FALSE(has_integral_element_in(F, ok.lattice, q.get_si())) << c.p.to_string() << " q=" << q;
            }
    }
}

TEST(Order, ScaledGeneratorSaturates) {
    // 2 lambda for lambda a root of x^3 + x^2 - 2x - 1
    NumberFieldCubic F({2, -8, -8});
    OrderLattice z = equation_order(F);
    EXPECT_EQ(z.disc, 64 * 49);
    OrderLattice ok = maximal_order(F);
    EXPECT_EQ(ok.disc, 49);
    EXPECT_EQ(lattice_index(ok.lattice, z.lattice), 8);
    FieldElem half_gen{mpq_class(0), mpq_class(1, 2), mpq_class(0)};
    EXPECT_TRUE(contains_element(ok, half_gen));
}

TEST(Order, MaximalOrderIndependentOfStart) {
    // Starting from Z[theta] for another element theta must give the same ring.
    NumberFieldCubic F({-1, -3, 1});
    FieldElem theta{mpq_class(1), mpq_class(2), mpq_class(1)};
    std::array<QVec3, 3> g{NumberFieldCubic::one(), theta, F.mul(theta, theta)};
    OrderLattice start = make_order(F, Lattice::from_generators(std::span<const QVec3>(g.data(), 3)));
    EXPECT_EQ(maximal_order(F, start).lattice, maximal_order(F).lattice);
}

TEST(Order, IntermediateOrdersMatchBruteForce) {
    for (CubicPoly p : {CubicPoly{2, -8, -8}, CubicPoly{-11, 7, -1}, CubicPoly{-6, 3, 1}, CubicPoly{-10, 3, 1}}) {
        NumberFieldCubic F(p);
        OrderLattice z = equation_order(F), ok = maximal_order(F);
        auto orders = intermediate_orders(F, z, ok);
        std::set<Lattice> got;
        for (const auto& o : orders) {
            got.insert(o.lattice);
            EXPECT_TRUE(is_ring(F, o.lattice));
            EXPECT_TRUE(o.lattice.contains(NumberFieldCubic::one()));
            const mpz_class idx = lattice_index(ok.lattice, o.lattice);
            EXPECT_EQ(o.disc, idx * idx * ok.disc);
            EXPECT_EQ(o.index_in_maximal, idx);
        }
        EXPECT_EQ(got.size(), orders.size());
        EXPECT_EQ(got, brute_force_rings(F, z.lattice, ok.lattice)) << p.to_string();
        EXPECT_EQ(orders.front().lattice, z.lattice);
        EXPECT_EQ(orders.back().lattice, ok.lattice);
    }
}

TEST(Order, TrivialQuotient) {
    NumberFieldCubic F({-3, 0, 1});
    OrderLattice z = equation_order(F), ok = maximal_order(F);
    auto orders = intermediate_orders(F, z, ok);
    ASSERT_EQ(orders.size(), 1u);
    EXPECT_EQ(orders[0].lattice, ok.lattice);
}

TEST(Order, ConductorProperties) {
    for (CubicPoly p : {CubicPoly{2, -8, -8}, CubicPoly{-11, 7, -1}, CubicPoly{-6, 3, 1}, CubicPoly{-8, 5, 1}}) {
        NumberFieldCubic F(p);
        OrderLattice z = equation_order(F), ok = maximal_order(F);
        for (const auto& o : intermediate_orders(F, z, ok)) {
            Conductor f = conductor(F, o, ok);
            const mpz_class idx = lattice_index(ok.lattice, o.lattice);
            EXPECT_TRUE(o.lattice.contains(f.ideal));
            EXPECT_EQ(f.norm % idx, 0);
            EXPECT_EQ((idx * idx * idx) % f.norm, 0);
            for (const auto& x : f.ideal.basis())
                for (const auto& w : ok.lattice.basis()) EXPECT_TRUE(f.ideal.contains(F.mul(x, w)));
            if (o.lattice == ok.lattice) {
                EXPECT_EQ(f.norm, 1);
            }
            if (idx == 2) {
                EXPECT_TRUE(f.norm == 2 || f.norm == 4 || f.norm == 8);
            }
        }
    }
}

TEST(Order, Membership) {
    NumberFieldCubic F({-3, 0, 1});
    OrderLattice z = equation_order(F);
    EXPECT_TRUE(contains_element(z, NumberFieldCubic::gen()));
    EXPECT_FALSE(contains_element(z, FieldElem{mpq_class(0), mpq_class(1, 2), mpq_class(0)}));
}

TEST(Order, HermiteBasisIsCanonical) {
    NumberFieldCubic F({-9, -1, 1});
    OrderLattice ok = maximal_order(F);
    auto b = ok.lattice.basis();
    std::vector<QVec3> shuffled = {b[2] + b[0], b[1], b[0] - mpq_class(3) * b[1], b[2]};
    EXPECT_EQ(Lattice::from_generators(shuffled), ok.lattice);
}
