#include "fermitn/groundstate.hpp"
#include "fermitn/model.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace fermitn;
using Q = GaussRational;

namespace {

// Rank of a list of states over their joint (configuration, monomial) coordinates.
int joint_rank(const std::vector<FermionicTensor<Q>>& states) {
    std::map<std::pair<std::vector<int>, Monomial>, std::size_t> col;
    for (const auto& st : states)
        for (const auto& [idx, e] : st.entries())
            for (const auto& [mono, c] : e.terms()) col.try_emplace({idx, mono}, col.size());
    std::vector<std::vector<Q>> rows(states.size(), std::vector<Q>(col.size(), Q(0)));
    for (std::size_t r = 0; r < states.size(); ++r)
        for (const auto& [idx, e] : states[r].entries())
            for (const auto& [mono, c] : e.terms()) rows[r][col.at({idx, mono})] = c;
    return detail::exact_rank(rows);
}

}  // namespace

TEST(Conjugation, Conventions) {
    auto G = symmetric_group3();
    for (int a = 0; a < 6; ++a)
        for (int g = 0; g < 6; ++g) {
            EXPECT_EQ(conj_by_inverse(G, a, g), G.mul(G.inv(a), g, a));
            EXPECT_EQ(conj_by(G, a, g), G.mul(a, g, G.inv(a)));
        }
}

TEST(Lambda, IdentityIsOne) {
    for (const auto& name : builtin_model_names()) {
        auto m = to_model<Q>(builtin_model(name));
        EXPECT_EQ(lambda_coeff(m, 0, 0, 0), Q(1)) << name;
    }
}

// (α,g,h) = (0,1,1): ω ratio ω(1,1,0)ω(1,1,1)/(ω(1,1,0)ω(1,1,1)) = 1, sign exponents
// s(0,1)s(1,1) + s(0,1)s(1,1) = 0 and (s(1,0)+s(1,1))(s(1,0)+s(1,1)) + s(0,0) = 1.
TEST(Lambda, FtcHandValue) {
    for (int sign : {1, -1}) EXPECT_EQ(lambda_coeff(ftc_model<Q>(sign), 0, 1, 1), Q(-1));
}

TEST(Lambda, BosonicIsOmegaRatio) {
    for (const auto& pm : {z2_double_semion(), s3_untwisted()}) {
        auto m = to_model<Q>(pm);
        const auto& G = m.G;
        for (int a = 0; a < m.order(); ++a)
            for (int g = 0; g < m.order(); ++g)
                for (int h = 0; h < m.order(); ++h) {
                    if (!G.commute(g, h)) continue;
                    int ag1 = conj_by_inverse(G, a, G.inv(g)), ah1 = conj_by_inverse(G, a, G.inv(h));
                    Q want = m.omega(h, g, a) * m.omega(h, G.mul(g, a), ag1) /
                             (m.omega(g, h, a) * m.omega(g, G.mul(h, a), ah1));
                    EXPECT_EQ(lambda_coeff(m, a, g, h), want);
                }
    }
}

TEST(Eta, Examples) {
    for (const auto& name : builtin_model_names()) {
        auto m = to_model<Q>(builtin_model(name));
        for (int g = 0; g < m.order(); ++g)
            for (int h = 0; h < m.order(); ++h) EXPECT_EQ(eta(m, g, h, 0), Q(1)) << name;
    }
    // ω factors i³/i³ = 1; sign exponent s(1,1) + s(1,1) = 2.
    EXPECT_EQ(eta(ftc_model<Q>(1), 1, 1, 1), Q(1));
    auto tc = to_model<Q>(z2_bosonic_tc());
    for (int g = 0; g < 2; ++g)
        for (int h = 0; h < 2; ++h)
            for (int k = 0; k < 2; ++k) EXPECT_EQ(eta(tc, g, h, k), Q(1));
}

TEST(BuildM, IdentityPair) {
    auto m = ftc_model<Q>(1);
    auto M = build_m(m, 0, 0);
    EXPECT_EQ(M.nnz(), 2u);
    for (int a = 0; a < 2; ++a) {
        auto e = M.at({a, a, a, a});
        EXPECT_EQ(e.terms().begin()->second, Q(1));
        EXPECT_EQ(e.size(), 1u);
    }
    EXPECT_EQ(M.at({0, 0, 0, 0}), Grassmann<Q>::one());
}

TEST(BuildM, FtcPairs) {
    auto m = ftc_model<Q>(1);
    auto M = build_m(m, 1, 1);
    EXPECT_EQ(M.nnz(), 2u);
    // a = 0: vertices (0, 1, 0, 1), coefficient λ(0,1,1) = −1.
    auto e = M.at({0, 1, 0, 1});
    ASSERT_FALSE(e.is_zero());
    EXPECT_EQ(e.terms().begin()->second * e.terms().begin()->second, Q(1));
    EXPECT_NO_THROW(build_m(m, 1, 0));
}

TEST(BuildM, RejectsInadmissiblePairs) {
    auto s3 = to_model<Q>(s3_untwisted());
    int g = -1, h = -1;
    for (int a = 1; a < 6 && g < 0; ++a)
        for (int b = 1; b < 6; ++b)
            if (!s3.G.commute(a, b)) {
                g = a;
                h = b;
                break;
            }
    EXPECT_THROW(build_m(s3, g, h), ConditionViolated);

    // Bilinear s(a,b) = a₁b₂ on Z₂×Z₂ is a cocycle with s(a,b) ≠ s(b,a) for a = (1,0), b = (0,1).
    auto G = abelian_group(2, 2);
    Cocycle2 s(4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s.set(a, b, (a >> 1) & b & 1);
    ASSERT_FALSE(check_cocycle2(G, s).has_value());
    Model<Q> m{"z2xz2-bilinear", G, s, Cocycle3<Q>(4, Q(1))};
    EXPECT_NE(s(2, 1), s(1, 2));
    EXPECT_THROW(build_m(m, 2, 1), ConditionViolated);
    EXPECT_NO_THROW(build_m(m, 2, 2));
}

TEST(MPrime, AbelianIsEtaSumTimesM) {
    for (const auto& pm : {ftc_phase_model(1), ftc_phase_model(-1), z2_double_semion()}) {
        auto m = to_model<Q>(pm);
        for (int g = 0; g < 2; ++g)
            for (int h = 0; h < 2; ++h) {
                Q sum(0);
                for (int k = 0; k < 2; ++k) sum += eta(m, g, h, k);
                auto want = build_m(m, g, h);
                want *= sum * Q(Rational(1, 2));
                EXPECT_TRUE(tensor_equal(build_m_prime(m, g, h), want)) << pm.name;
            }
    }
}

TEST(MPrime, FtcAllNonzero) {
    auto m = ftc_model<Q>(1);
    for (int g = 0; g < 2; ++g)
        for (int h = 0; h < 2; ++h) EXPECT_GT(build_m_prime(m, g, h).nnz(), 0u);
}

TEST(MPrime, NonRegularClassVanishes) {
    auto m = to_model<Q>(z2cubed_type3());
    auto V = torus_mpos(m);
    int vanished = 0;
    for (const auto& c : classify_pairs(m, false)) {
        auto [g, h] = c.rep;
        if (!c.commuting || !c.s_symmetric) continue;
        bool zero = build_m_prime(m, g, h, V).nnz() == 0;
        EXPECT_EQ(zero, !c.c_regular);
        vanished += zero;
    }
    EXPECT_GT(vanished, 0);
}

TEST(MPrime, MismatchIsReported) {
    auto m = ftc_model<Q>(1);
    MpoOptions bad;
    bad.y_mutation = YMutation::flip_nontrivial;
    EXPECT_THROW(build_m_prime(m, 1, 1, torus_mpos(m, bad)), InternalMismatch);
}

TEST(MPrime, SameClassHasRankOne) {
    auto m = to_model<Q>(s3_untwisted());
    auto V = torus_mpos(m);
    for (const auto& pc : pair_conjugacy_classes(m.G)) {
        auto [g, h] = pc.representative;
        if (!admissible_pair(m.G, m.s, g, h)) continue;
        std::vector<FermionicTensor<Q>> states;
        for (auto [a, b] : pc.members) states.push_back(build_m_prime(m, a, b, V));
        EXPECT_EQ(joint_rank(states), 1) << g << "," << h;
    }
}

TEST(Degeneracy, Values) {
    EXPECT_EQ(degeneracy(ftc_model<Q>(1)), 4);
    EXPECT_EQ(degeneracy(ftc_model<Q>(-1)), 4);
    EXPECT_EQ(degeneracy(to_model<Q>(z2_bosonic_tc())), 4);
    EXPECT_EQ(degeneracy(to_model<Q>(z2_double_semion())), 4);
    EXPECT_EQ(degeneracy(to_model<Q>(trivial_model())), 1);
}

// Brute-force oracle: bosonic untwisted count is the number of commuting-pair classes.
TEST(Degeneracy, S3CommutingClasses) {
    auto m = to_model<Q>(s3_untwisted());
    int commuting = 0;
    for (const auto& c : pair_conjugacy_classes(m.G)) commuting += m.G.commute(c.representative.first, c.representative.second);
    EXPECT_EQ(degeneracy(m), commuting);
    EXPECT_EQ(commuting, 8);
}

TEST(Degeneracy, RankMatchesCountForBuiltins) {
    for (const auto& name : builtin_model_names()) {
        auto m = to_model<Q>(builtin_model(name));
        EXPECT_EQ(degeneracy_by_rank(m), degeneracy(m)) << name;
    }
}

TEST(Degeneracy, FloatRank) {
    auto m = ftc_model<Complex>(1);
    EXPECT_EQ(degeneracy_by_rank(m), 4);
    EXPECT_EQ(degeneracy(m), 4);
}

TEST(Identities, HoldForBuiltins) {
    for (const auto& name : builtin_model_names()) {
        auto m = to_model<Q>(builtin_model(name));
        auto a = verify_eta_identity(m);
        EXPECT_TRUE(a.pass) << name;
        EXPECT_GT(a.checked, 0);
        auto b = verify_vanishing_criterion(m);
        EXPECT_TRUE(b.pass) << name;
    }
}

TEST(Rank, ExactAndFloat) {
    std::vector<std::vector<Q>> a{{1, 2, 3}, {2, 4, 6}, {Q(0, 1), 0, 1}};
    EXPECT_EQ(detail::exact_rank(a), 2);
    std::vector<std::vector<Complex>> b{{1, 2}, {2, 4.0 + 1e-12}};
    EXPECT_EQ(detail::float_rank(b), 1);
    EXPECT_EQ(detail::exact_rank({}), 0);
}
