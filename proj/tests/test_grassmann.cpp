#include "fermitn/grassmann.hpp"

#include "property_suite.hpp"

#include <gtest/gtest.h>

using namespace fermitn;
using G = Grassmann<GaussRational>;
using Q = GaussRational;

namespace {

G th(std::uint32_t m) { return G::generator(theta(m)); }
G tb(std::uint32_t m) { return G::generator(theta_bar(m)); }
G mono(std::vector<GeneratorId> w, Q c = 1) { return G::canonicalize(w, c); }

}  // namespace

TEST(Canonicalize, SingleTransposition) {
    auto e = canonicalize<Q>({theta(2), theta(1)}, 1);
    EXPECT_EQ(e, -mono({theta(1), theta(2)}));
    EXPECT_EQ(e.coefficient({theta(1).code(), theta(2).code()}), Q(-1));
}

TEST(Canonicalize, RepeatIsZero) { EXPECT_TRUE(canonicalize<Q>({theta(1), theta(1)}, 1).is_zero()); }

TEST(Canonicalize, ThreeCycleIsEven) {
    auto e = canonicalize<Q>({theta(3), theta(1), theta(2)}, 1);
    auto ref = props::bubble_sort({theta(3).code(), theta(1).code(), theta(2).code()});
    EXPECT_EQ(ref.sign, 1);
    EXPECT_EQ(e.coefficient(ref.codes), Q(1));
}

TEST(Canonicalize, GlobalOrderPutsThetaBeforeBar) {
    auto e = canonicalize<Q>({theta_bar(0), theta(0)}, 1);
    EXPECT_EQ(e.coefficient({theta(0).code(), theta_bar(0).code()}), Q(-1));
    EXPECT_LT(theta_bar(0).code(), theta(1).code());
}

TEST(Multiply, Examples) {
    EXPECT_EQ(multiply(th(1), th(2)), mono({theta(1), theta(2)}));
    EXPECT_EQ(multiply(th(2), th(1)), -mono({theta(1), theta(2)}));
    EXPECT_EQ((th(1) + th(2)) * (th(1) - th(2)), mono({theta(1), theta(2)}, -2));
}

TEST(Multiply, ScalarsAndZero) {
    EXPECT_EQ(G::scalar(Q(0, 1)) * G::scalar(Q(0, 1)), G::scalar(-1));
    EXPECT_TRUE((G() * th(0)).is_zero());
    EXPECT_EQ(G::one() * th(3), th(3));
}

TEST(Berezin, ConventionDefiningCase) {
    auto x = mono({theta(0), theta_bar(0)});
    EXPECT_EQ(berezin_contract(x, 0), G::one());
    EXPECT_EQ(berezin_contract(x, 0, BerezinSign::minus), -G::one());
}

TEST(Berezin, NoSaturatingPair) {
    EXPECT_TRUE(berezin_contract(G::one(), 0).is_zero());
    EXPECT_TRUE(berezin_contract(th(0), 0).is_zero());
    EXPECT_TRUE(berezin_contract(tb(0), 0).is_zero());
}

// θ₂θ₁θ̄₁: the pair θ₁θ̄₁ is even, so it moves past θ₂ with no sign.
TEST(Berezin, SpectatorPassesThroughEvenPair) {
    auto x = mono({theta(2), theta(1), theta_bar(1)});
    // Reorder oracle: bring the word to θ₁θ̄₁θ₂ by adjacent swaps.
    auto ref = props::bubble_sort({theta(1).code(), theta_bar(1).code(), theta(2).code()});
    std::vector<std::uint32_t> word{theta(2).code(), theta(1).code(), theta_bar(1).code()};
    int swaps = 0;
    for (int pass = 0; pass < 3; ++pass)
        for (int j = 0; j + 1 < 3; ++j)
            if ((word[j] == theta(2).code()) && word[j + 1] != theta(2).code()) {
                std::swap(word[j], word[j + 1]);
                ++swaps;
            }
    EXPECT_EQ(swaps % 2, 0);
    EXPECT_EQ(ref.sign, 1);
    EXPECT_EQ(berezin_contract(x, 1), th(2));
}

TEST(Berezin, OddSpectatorBetweenPair) {
    // θ₁θ₂θ̄₁ = −θ₁θ̄₁θ₂
    auto x = G::canonicalize({theta(1), theta(2), theta_bar(1)}, 1);
    EXPECT_EQ(berezin_contract(x, 1), -th(2));
}

TEST(Berezin, BondContractionKeepsEmptyBond) {
    auto x = th(3) * tb(4) + mono({theta(0), theta_bar(0), theta(3), theta_bar(4)}, 2);
    auto y = x.contract_bond(0, BerezinSign::minus);
    EXPECT_EQ(y, th(3) * tb(4) - Q(2) * th(3) * tb(4));
    EXPECT_TRUE((th(0) * th(3)).contract_bond(0).is_zero());
}

TEST(Parity, Examples) {
    EXPECT_EQ(parity(mono({theta(1), theta(2)})), Parity::even);
    EXPECT_EQ(parity(th(1)), Parity::odd);
    EXPECT_EQ(parity(th(1) + mono({theta(1), theta(2)})), Parity::mixed);
    EXPECT_EQ(parity(G()), Parity::zero);
    EXPECT_STREQ(to_string(Parity::mixed), "mixed");
}

TEST(Grassmann, RenameModesResorts) {
    auto x = th(0) * th(5);
    std::unordered_map<std::uint32_t, std::uint32_t> m{{0, 7}};
    EXPECT_EQ(x.rename_modes(m), -(th(5) * th(7)));
}

TEST(Grassmann, FloatModeTolerance) {
    using F = Grassmann<Complex>;
    auto a = F::generator(theta(0)) * Complex(1.0, 0.0);
    auto b = F::generator(theta(0)) * Complex(1.0 + 1e-12, 0.0);
    EXPECT_TRUE(a == b);
    EXPECT_FALSE(a == F::generator(theta(0)) * Complex(1.001, 0.0));
}
