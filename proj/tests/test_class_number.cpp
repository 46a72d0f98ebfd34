#include <gtest/gtest.h>

#include <map>
#include <memory>

#include "pgt/class_number.hpp"

using namespace pgt;

namespace {

struct Field {
    std::unique_ptr<NumberFieldCubic> F;
    OrderLattice z, ok;
    UnitGroupData units;
};

Field open_field(CubicPoly p) {
    Field f;
    f.F = std::make_unique<NumberFieldCubic>(p);
    f.z = equation_order(*f.F);
    f.ok = maximal_order(*f.F);
    std::optional<FieldElem> hint;
    if (p.c == 1 || p.c == -1) hint = NumberFieldCubic::gen();
    f.units = fundamental_units(*f.F, f.ok, hint);
    return f;
}

// Number of roots of x^3 + a x^2 + b x + c in F_q, by brute force.
long roots_mod(CubicPoly p, long q) {
    long n = 0;
    for (long x = 0; x < q; ++x) {
        const mpz_class v = p.eval(x);
        if (mod_floor(v, q) == 0) ++n;
    }
    return n;
}

}  // namespace

TEST(ClassNumber, SmallestFieldsHaveClassNumberOne) {
    for (CubicPoly p : {CubicPoly{1, -2, -1}, CubicPoly{-3, 0, 1}, CubicPoly{-1, -3, 1}}) {
        Field f = open_field(p);
        EXPECT_EQ(class_number_maximal(*f.F, f.units), 1) << p.to_string();
    }
}

// Class numbers of totally real cubic fields from published tables of
// small discriminants.
TEST(ClassNumber, ReferenceFieldsAboveOne) {
    const std::map<long, std::pair<CubicPoly, long>> ref = {
        {1957, {{-8, 2, 1}, 2}},  {2597, {{-8, -2, 1}, 3}}, {2777, {{-8, 7, 1}, 2}},
        {3969, {{-9, 6, 1}, 3}},  {3981, {{-10, 2, 1}, 2}}, {4212, {{-9, -3, 1}, 3}},
    };
    for (const auto& [d, e] : ref) {
        Field f = open_field(e.first);
        ASSERT_EQ(f.ok.disc, d);
        EXPECT_EQ(class_number_maximal(*f.F, f.units), e.second) << d;
    }
}

TEST(ClassNumber, MaximalAgreesWithDirectEnumeration) {
    std::map<std::string, long> seen;
    for (long a = -10; a <= 10; ++a)
        for (long b = -10; b <= 10; ++b) {
            std::unique_ptr<NumberFieldCubic> F;
            try {
                F = std::make_unique<NumberFieldCubic>(CubicPoly{a, b, 1});
            } catch (const Error&) {
                continue;
            }
            const OrderLattice ok = maximal_order(*F);
            if (abs(ok.disc) > 8000 || seen.count(ok.disc.get_str())) continue;
            const UnitGroupData ud = fundamental_units(*F, ok, NumberFieldCubic::gen());
            const long h = class_number_maximal(*F, ud);
            const DirectClassResult dr = class_number_order_direct(*F, ud);
            EXPECT_EQ(h, dr.h) << ok.disc;
            EXPECT_EQ(dr.non_invertible, 0) << ok.disc;
            seen[ok.disc.get_str()] = h;
        }
    EXPECT_GT(seen.size(), 60u);
}

TEST(ClassNumber, DegreeOnePrimesMatchRootsModQ) {
    // Z[lambda] is maximal for these, so primes of degree one above an
    // unramified q correspond to roots of the polynomial mod q.
    for (CubicPoly p : {CubicPoly{1, -2, -1}, CubicPoly{-1, -3, 1}, CubicPoly{-8, 2, 1}}) {
        Field f = open_field(p);
        ASSERT_EQ(f.z.lattice, f.ok.lattice);
        for (long q : primes_up_to(60)) {
            if (f.ok.disc % q == 0) continue;
            const auto ps = primes_above(*f.F, f.ok.lattice, q);
            long deg1 = 0, total = 0;
            for (const auto& pr : ps) {
                total += pr.degree;
                if (pr.degree == 1) ++deg1;
                EXPECT_EQ(lattice_index(f.ok.lattice, pr.ideal), pr.norm);
                EXPECT_TRUE(pr.ideal.contains(f.ok.lattice.scaled(q)));
            }
            EXPECT_EQ(total, 3);
            EXPECT_EQ(deg1, roots_mod(p, q)) << p.to_string() << " q=" << q;
        }
    }
}

TEST(ClassNumber, RamifiedPrimes) {
    // 7 is totally ramified in the cyclic field of conductor 7.
    Field f = open_field({1, -2, -1});
    const auto ps = primes_above(*f.F, f.ok.lattice, 7);
    ASSERT_EQ(ps.size(), 1u);
    EXPECT_EQ(ps[0].degree, 1);
    const Lattice p3 = lattice_product(*f.F, lattice_product(*f.F, ps[0].ideal, ps[0].ideal), ps[0].ideal);
    EXPECT_EQ(p3, f.ok.lattice.scaled(7));
}

TEST(ClassNumber, PrincipalIdealsRecognised) {
    Field f = open_field({-8, 2, 1});
    PrincipalTester pt(*f.F, f.units);
    for (const FieldElem& x : {FieldElem{mpq_class(2), mpq_class(1), mpq_class(0)},
                                FieldElem{mpq_class(-5), mpq_class(3), mpq_class(1)},
                                FieldElem{mpq_class(17), mpq_class(0), mpq_class(-4)}}) {
        EXPECT_TRUE(pt.is_principal(element_times(*f.F, x, f.ok.lattice)));
        // a fractional principal ideal
        EXPECT_TRUE(pt.is_principal(element_times(*f.F, f.F->inverse(x), f.ok.lattice)));
    }
    // with h = 2 some small prime is not principal, and its square is
    ClassGroupData cg = class_group_maximal(*f.F, f.units, pt);
    ASSERT_EQ(cg.h, 2);
    bool found = false;
    for (const auto& p : cg.primes) {
        if (pt.is_principal(p.ideal)) continue;
        found = true;
        EXPECT_TRUE(pt.is_principal(lattice_product(*f.F, p.ideal, p.ideal)));
    }
    EXPECT_TRUE(found);
}

TEST(ClassNumber, QuotientUnitCountsAgree) {
    long checked = 0;
    for (CubicPoly p : {CubicPoly{2, -8, -8}, CubicPoly{-9, -1, 1}, CubicPoly{-8, 5, 1}, CubicPoly{-12, -9, 1},
                        CubicPoly{-10, 3, 1}, CubicPoly{-11, -9, 1}}) {
        Field f = open_field(p);
        for (const auto& o : intermediate_orders(*f.F, f.z, f.ok)) {
            const Conductor c = conductor(*f.F, o, f.ok);
            for (const Lattice* r : std::array<const Lattice*, 2>{&o.lattice, &f.ok.lattice}) {
                EXPECT_EQ(quotient_units_enumerated(*f.F, *r, c.ideal), quotient_units_structural(*f.F, *r, c.ideal))
                    << p.to_string();
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 12);
}

TEST(ClassNumber, QuotientUnitsOfPrimePower) {
    // (Z[lambda] / 7 Z[lambda])^x for 7 totally ramified: 7^3 - 7^2.
    Field f = open_field({1, -2, -1});
    EXPECT_EQ(quotient_units_enumerated(*f.F, f.ok.lattice, f.ok.lattice.scaled(7)), 343 - 49);
    // 2 inert: F_8^x
    EXPECT_EQ(quotient_units_enumerated(*f.F, f.ok.lattice, f.ok.lattice.scaled(2)), 7);
    EXPECT_EQ(quotient_units_enumerated(*f.F, f.ok.lattice, f.ok.lattice.scaled(4)), 56);
}

TEST(ClassNumber, ConductorFormulaAgreesWithDirect) {
    long orders = 0, nontrivial_units = 0, grown = 0;
    for (long a = -15; a <= 15; a += 1)
        for (long b = -15; b <= 15; ++b) {
            std::unique_ptr<NumberFieldCubic> F;
            try {
                F = std::make_unique<NumberFieldCubic>(CubicPoly{a, b, 1});
            } catch (const Error&) {
                continue;
            }
            const OrderLattice z = equation_order(*F);
            if (abs(z.disc) > 20000) continue;
            const OrderLattice ok = maximal_order(*F);
            if (ok.lattice == z.lattice) continue;
            const UnitGroupData uf = fundamental_units(*F, ok, NumberFieldCubic::gen());
            const long hf = class_number_maximal(*F, uf);
            for (const auto& o : intermediate_orders(*F, z, ok)) {
                if (o.lattice == ok.lattice) continue;
                const long ui = unit_index(*F, uf, o);
                const long h = class_number_order(*F, o, ok, hf, ui);
                const DirectClassResult dr = class_number_order_direct(*F, sub_unit_group(*F, uf, o));
                EXPECT_EQ(h, dr.h) << CubicPoly{a, b, 1}.to_string() << " disc " << o.disc;
                ++orders;
                if (ui > 1) ++nontrivial_units;
                if (h > hf) ++grown;
            }
        }
    EXPECT_GT(orders, 50);
    EXPECT_GT(nontrivial_units, 20);
    EXPECT_GT(grown, 5);
}

TEST(ClassNumber, MutatedFormulaIsDetected) {
    // Without the unit index the formula must fail somewhere.
    Field f = open_field({-9, -1, 1});
    const long hf = class_number_maximal(*f.F, f.units);
    long caught = 0;
    ConductorFormulaOptions bad;
    bad.drop_unit_index = true;
    for (const auto& o : intermediate_orders(*f.F, f.z, f.ok)) {
        if (o.lattice == f.ok.lattice) continue;
        const long ui = unit_index(*f.F, f.units, o);
        if (ui == 1) continue;
        const long good = class_number_order(*f.F, o, f.ok, hf, ui);
        try {
            if (class_number_order(*f.F, o, f.ok, hf, ui, bad) != good) ++caught;
        } catch (const NonIntegralResult&) {
            ++caught;
        }
    }
    EXPECT_GT(caught, 0);
}

TEST(ClassNumber, DirectRespectsCap) {
    Field f = open_field({-12, -9, 1});
    const UnitGroupData uz = sub_unit_group(*f.F, f.units, f.z);
    DirectClassOptions opt;
    opt.disc_cap = 20000;
    EXPECT_THROW(class_number_order_direct(*f.F, uz, opt), CapExceeded);
}
