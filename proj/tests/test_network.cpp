#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "support.hpp"

using namespace dcb;
using support::mat_near;

namespace {

FourPortM random_section(Rng& rng, double z0) {
    const DImag d = d_imag_from_cr(rng.uniform(0.0, 0.9), z0 / rng.uniform(20.0, 120.0));
    return {m_total(d, rng.uniform(0.05, 3.0)), z0};
}

FourPortM random_asymmetric_section(Rng& rng, double z0) {
    const double c11 = rng.uniform(50e-12, 300e-12);
    const double c22 = rng.uniform(50e-12, 300e-12);
    const double c12 = -rng.uniform(0.05, 0.9) * std::sqrt(c11 * c22);
    const CapacitancePerLength c{c11, c22, c12, 2e8, 0.01};
    return {m_total(d_imag_from_capacitance(c, z0), rng.uniform(0.05, 3.0)), z0};
}

} // namespace

TEST(Delay, Examples) {
    EXPECT_TRUE(mat_near(m_delay(0.0, 0.0, 50.0).m, CMat4::identity(), 0.0));
    const cplx j(0, 1);
    EXPECT_TRUE(mat_near(m_delay(pi / 2, 0.0, 50.0).m, CMat4::diagonal({j, 1.0, -j, 1.0}), 1e-15));
    EXPECT_TRUE(mat_near(m_delay(0.8, 0.8, 50.0).m, m_total(d_imag_from_cr(0.0, 1.0), 0.8), 1e-15));
    EXPECT_THROW(m_delay(0.1, 0.1, 0.0), domain_error);
}

TEST(Delay, PhysicalLineAtItsOwnImpedanceIsPlainDelay) {
    EXPECT_TRUE(mat_near(m_delay_line(0.4, 0.9, 50.0, 50.0).m, m_delay(0.4, 0.9, 50.0).m, 1e-15));
}

TEST(Delay, MismatchedLineIsLosslessAndReciprocal) {
    Rng rng(20);
    for (int i = 0; i < 100; ++i) {
        const FourPortM m = m_delay_line(rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0), rng.uniform(20.0, 120.0),
                                         rng.uniform(20.0, 120.0));
        const FourPortS s = s4_from_m(m);
        EXPECT_TRUE(support::is_unitary(s.s, 1e-12));
        EXPECT_TRUE(support::is_symmetric(s.s, 1e-12));
        // Matches an uncoupled section of the same impedance.
        const double th = rng.uniform(0.1, 3.0);
        const double z_line = rng.uniform(20.0, 120.0);
        EXPECT_TRUE(mat_near(m_delay_line(th, th, z_line, 50.0).m, m_total(d_imag_from_cr(0.0, 50.0 / z_line), th),
                             1e-14));
    }
}

TEST(Rotate, Examples) {
    EXPECT_TRUE(mat_near(rotate_m({CMat4::identity(), 50.0}).m, CMat4::identity(), 0.0));
    EXPECT_TRUE(mat_near(rotate_m(m_delay(0.3, 1.2, 50.0)).m, m_delay(1.2, 0.3, 50.0).m, 1e-15));
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        const FourPortM m = random_asymmetric_section(rng, 50.0);
        EXPECT_TRUE(mat_near(rotate_m(rotate_m(m)).m, m.m, 1e-10));
        const FourPortM sym = random_section(rng, 50.0);
        EXPECT_TRUE(mat_near(rotate_m(sym).m, sym.m, 1e-10));
    }
    EXPECT_THROW(rotate_m({CMat4{}, 50.0}), singular_matrix_error);
}

TEST(Cascade, SharedDAddsLengths) {
    const DImag d = d_imag_from_cr(0.45, 0.7);
    const FourPortM a{m_total(d, 0.4), 50.0};
    const FourPortM b{m_total(d, 1.1), 50.0};
    const FourPortM c{m_total(d, 0.25), 50.0};
    EXPECT_TRUE(mat_near(cascade({a, b, c}).m, m_total(d, 1.75), 1e-12));
    EXPECT_TRUE(mat_near(cascade({a}).m, a.m, 0.0));
    EXPECT_TRUE(mat_near(cascade({FourPortM{m_total(d, 0.6), 50.0}, FourPortM{m_total(d, 0.6), 50.0}}).m,
                         m_total(d, 1.2), 1e-12));
}

TEST(Cascade, Errors) {
    EXPECT_THROW(cascade(std::span<const FourPortM>{}), domain_error);
    EXPECT_THROW(cascade({m_delay(0.1, 0.1, 50.0), m_delay(0.1, 0.1, 25.0)}), domain_error);
}

TEST(Cascade, LosslessChainsGiveUnitaryS) {
    Rng rng(22);
    for (int i = 0; i < 200; ++i) {
        std::vector<FourPortM> chain;
        for (int k = 0; k < 4; ++k) {
            chain.push_back(k % 2 ? m_delay_line(rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(30, 90), 50.0)
                                  : random_section(rng, 50.0));
        }
        const FourPortS s = s4_from_m(cascade(chain));
        EXPECT_TRUE(support::is_unitary(s.s, 1e-10));
        EXPECT_TRUE(support::is_symmetric(s.s, 1e-10));
    }
}

TEST(FourPortS, MatchedDelayLines) {
    const FourPortS s = s4_from_m(m_delay(0.7, 0.7, 50.0));
    const cplx t = std::polar(1.0, -0.7);
    EXPECT_TRUE(mat_near(s.s, CMat4{0, 0, t, 0, 0, 0, 0, t, t, 0, 0, 0, 0, t, 0, 0}, 1e-15));
}

TEST(FourPortS, SingularRearrangementThrows) {
    CMat4 m = CMat4::identity();
    m(0, 0) = 0.0;
    m(1, 1) = 0.0;
    EXPECT_THROW(s4_from_m({m, 50.0}), singular_matrix_error);
}

TEST(Reduce, AgreesWithTerminationOracle) {
    Rng rng(23);
    for (int i = 0; i < 300; ++i) {
        const double z0 = rng.uniform(20.0, 100.0);
        std::vector<FourPortM> chain{random_section(rng, z0), random_asymmetric_section(rng, z0),
                                     m_delay_line(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(30, 90), z0)};
        const FourPortM m = cascade(chain);
        const ReducedTwoPort r = reduce_open_2_3(m);
        ASSERT_FALSE(r.degenerate());
        EXPECT_TRUE(mat_near(to_s(r).s, oracle::terminate_open_2_3(s4_from_m(m).s), 1e-10));
    }
}

TEST(Reduce, ZeroAndHalfWaveLengthsAreFullReflection) {
    for (const CMat4& m : {CMat4::identity(), CMat4(-CMat4::identity())}) {
        const ReducedTwoPort r = reduce_open_2_3({m, 50.0});
        EXPECT_TRUE(r.degenerate());
        const TwoPortS s = to_s(r);
        EXPECT_TRUE(s.degenerate);
        EXPECT_EQ(s.s, CMat2::identity());
    }
    // CR = 0: the two conductors never couple, so nothing gets through.
    EXPECT_TRUE(reduce_open_2_3({m_total(d_imag_from_cr(0.0, 1.0), 1.0), 50.0}).degenerate());
}

TEST(Reduce, ClassicMatchPoint) {
    const TwoPortS s = to_s(reduce_open_2_3({m_total(d_imag_from_cr(1.0 / std::sqrt(2.0), 1.0), pi / 2), 50.0}));
    EXPECT_LT(std::abs(s.s(0, 0)), 1e-9);
    EXPECT_NEAR(std::abs(s.s(1, 0)), 1.0, 1e-9);
    // Independent check from the even/odd impedance model.
    const CMat2 o = oracle::terminate_open_2_3(oracle::coupled_pair_s(1.0 / std::sqrt(2.0), 50.0, pi / 2, 50.0));
    EXPECT_LT(std::abs(o(0, 0)), 1e-9);
    // Z0e - Z0o = 2 Z0 is the classic condition.
    const auto eo = even_odd_from_cr(1.0 / std::sqrt(2.0), 50.0);
    EXPECT_NEAR(eo.z0e - eo.z0o, 100.0, 1e-9);
}

TEST(Reduce, PrintedFormExactOnSingleSections) {
    // The printed closed form leans on M41 + M43 = -(M21 + M23), which any
    // single section (symmetric or not) and any delay pair satisfies.
    Rng rng(24);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const double z0 = rng.uniform(20.0, 100.0);
        for (const FourPortM& m : {random_section(rng, z0), random_asymmetric_section(rng, z0)}) {
            EXPECT_NEAR(std::abs(m.m(3, 0) + m.m(3, 2) + m.m(1, 0) + m.m(1, 2)), 0.0, 1e-12 * inf_norm(m.m));
            const CMat2 general = reduce_open_2_3(m).t->t;
            worst = std::max(worst, max_abs_diff(general, oracle::reduce_printed_form(m.m)) / inf_norm(general));
        }
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Reduce, PrintedFormDiffersOnCascades) {
    // Cascading breaks the row relation, so only the general reduction is
    // usable for full blockers; it still matches the termination oracle.
    Rng rng(25);
    int differing = 0;
    for (int i = 0; i < 50; ++i) {
        const FourPortM m = cascade({random_section(rng, 50.0),
                                     m_delay_line(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(30, 90), 50.0),
                                     random_asymmetric_section(rng, 50.0)});
        const CMat2 general = reduce_open_2_3(m).t->t;
        EXPECT_TRUE(mat_near(to_s(reduce_open_2_3(m)).s, oracle::terminate_open_2_3(s4_from_m(m).s), 1e-9));
        if (max_abs_diff(general, oracle::reduce_printed_form(m.m)) > 1e-6 * inf_norm(general)) {
            ++differing;
        }
    }
    EXPECT_GT(differing, 40);
}

TEST(TwoPort, TransferConversions) {
    EXPECT_TRUE(mat_near(t_from_s({CMat2{0, 1, 1, 0}, 50.0}).t, CMat2::identity(), 0.0));
    const double th = 0.9;
    const cplx e = std::polar(1.0, -th);
    EXPECT_TRUE(mat_near(t_from_s({CMat2{0, e, e, 0}, 50.0}).t,
                         CMat2::diagonal({std::polar(1.0, th), std::polar(1.0, -th)}), 1e-15));
    Rng rng(26);
    for (int i = 0; i < 500; ++i) {
        const TwoPortS s = random_passive_reciprocal(rng);
        CMat2 nonrecip = s.s;
        nonrecip(0, 1) *= 0.7;
        EXPECT_TRUE(mat_near(s_from_t(t_from_s(s)).s, s.s, 1e-12));
        EXPECT_TRUE(mat_near(s_from_t(t_from_s({nonrecip, 50.0})).s, nonrecip, 1e-12));
    }
    EXPECT_THROW(t_from_s({CMat2::identity(), 50.0}), numerical_error);
    EXPECT_THROW(s_from_t({CMat2{0, 1, 1, 0}, 50.0}), numerical_error);
}

TEST(TwoPort, ReciprocalTransferHasUnitDeterminant) {
    Rng rng(27);
    for (int i = 0; i < 100; ++i) {
        EXPECT_TRUE(support::cnear(det(t_from_s(random_passive_reciprocal(rng)).t), 1.0, 1e-12));
    }
}

TEST(Renormalize, Examples) {
    Rng rng(28);
    const TwoPortS s = random_passive_reciprocal(rng);
    EXPECT_TRUE(mat_near(renormalize(s, 50.0).s, s.s, 1e-15));

    const TwoPortS through{CMat2{0, 1, 1, 0}, 50.0};
    for (double z : {10.0, 25.0, 75.0, 300.0}) {
        EXPECT_TRUE(mat_near(renormalize(through, z).s, through.s, 1e-15));
    }

    // A matched 50 ohm load seen from a 25 ohm reference: (50 - 25) / (50 + 25).
    const CMat<1> load{0.0};
    EXPECT_NEAR(renormalize_matrix(load, 50.0, 25.0)(0, 0).real(), 1.0 / 3.0, 1e-15);
    EXPECT_THROW(renormalize(s, -1.0), domain_error);
}

TEST(Renormalize, ClosedFormMatchesImpedanceRoute) {
    Rng rng(29);
    for (int i = 0; i < 300; ++i) {
        const TwoPortS s = random_passive_reciprocal(rng);
        const double z_new = rng.uniform(5.0, 200.0);
        EXPECT_TRUE(mat_near(renormalize(s, z_new).s, oracle::renormalize_via_z(s.s, 50.0, z_new), 1e-10));
        const CMat4 s4 = s4_from_m(random_section(rng, 50.0)).s;
        EXPECT_TRUE(mat_near(renormalize_matrix(s4, 50.0, z_new), oracle::renormalize_via_z(s4, 50.0, z_new), 1e-10));
    }
}

TEST(Renormalize, SingularThrows) {
    // rho = 1/3 and S = 3 I make I - rho S vanish.
    EXPECT_THROW(renormalize({CMat2{3.0, 0.0, 0.0, 3.0}, 50.0}, 100.0), numerical_error);
}

TEST(SeriesPair, EqualsHalvedReference) {
    Rng rng(30);
    for (int i = 0; i < 100; ++i) {
        const TwoPortS s = random_passive_reciprocal(rng);
        EXPECT_TRUE(mat_near(series_pair_oracle(s).s, renormalize(s, 25.0).s, 1e-10));
    }
}

TEST(SeriesPair, TeeNetworkImpedancesDouble) {
    const cplx za(10.0, 5.0), zb(30.0, -40.0);
    const CMat2 z{za + zb, zb, zb, za + zb};
    const TwoPortS s{s_from_z(z, 50.0), 50.0};
    const CMat2 z_pair = z_from_s(series_pair_oracle(s).s, 50.0);
    EXPECT_TRUE(mat_near(z_pair, 2.0 * z, 1e-10));
}

TEST(SeriesPair, NearThroughStaysNearThrough) {
    const TwoPortS line = line_section_s(50.0, 1e-6, 0.0, 50.0);
    EXPECT_TRUE(mat_near(series_pair_oracle(line).s, CMat2{0, 1, 1, 0}, 1e-5));
    // The exact through has no impedance matrix.
    EXPECT_THROW(series_pair_oracle({CMat2{0, 1, 1, 0}, 50.0}), numerical_error);
}

TEST(Inverter, Properties) {
    const TwoPortS inv = ideal_inverter(50.0);
    EXPECT_NEAR(std::abs(inv.s(1, 0)), 1.0, 0.0);
    EXPECT_NEAR(std::abs(std::arg(inv.s(1, 0))), pi, 0.0);
    EXPECT_TRUE(support::is_unitary(inv.s, 0.0));
    EXPECT_TRUE(support::is_symmetric(inv.s, 0.0));
    EXPECT_TRUE(mat_near(cascade_s(inv, inv).s, CMat2{0, 1, 1, 0}, 0.0));
}

TEST(StarProduct, MatchesTransferProduct) {
    Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        const TwoPortS a = random_passive_reciprocal(rng);
        const TwoPortS b = random_passive_reciprocal(rng);
        const TwoPortS viaT = s_from_t({t_from_s(a).t * t_from_s(b).t, 50.0});
        EXPECT_TRUE(mat_near(cascade_s(a, b).s, viaT.s, 1e-12));
    }
}

TEST(StarProduct, FullReflectionPropagates) {
    TwoPortS open{CMat2::identity(), 50.0};
    open.degenerate = true;
    const TwoPortS out = cascade_s(open, ideal_inverter(50.0));
    EXPECT_TRUE(out.degenerate);
    EXPECT_EQ(std::abs(out.s(0, 0)), 1.0);
    EXPECT_EQ(std::abs(out.s(1, 0)), 0.0);
    EXPECT_THROW(cascade_s(open, TwoPortS{CMat2::identity(), 50.0}), numerical_error);
    EXPECT_THROW(cascade_s(open, ideal_inverter(25.0)), domain_error);
}
