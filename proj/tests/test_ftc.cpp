#include "fermitn/ftc.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>

using namespace fermitn;
using Q = GaussRational;

namespace {

const Q I = Q::i();

const PlaquetteRow& row(const char* spins) {
    for (const auto& r : plaquette_rows())
        if (std::strcmp(r.spins, spins) == 0) return r;
    throw std::out_of_range(spins);
}

PlaquetteOptions at_beta(Complex beta) {
    PlaquetteOptions o;
    o.beta = beta;
    return o;
}

const Complex minus_i{0, -1}, plus_i{0, 1};

}  // namespace

TEST(FtcModel, Data) {
    auto p = ftc_model<Q>(1), m = ftc_model<Q>(-1);
    EXPECT_EQ(p.omega(1, 1, 1), I);
    EXPECT_EQ(m.omega(1, 1, 1), -I);
    for (const auto& x : {p, m}) {
        EXPECT_FALSE(check_cocycle2(x.G, x.s).has_value());
        EXPECT_FALSE(check_graded_pentagon(x.G, x.s, x.omega).has_value());
    }
}

TEST(PlaquetteTable, ListedRows) {
    const auto& rows = plaquette_rows();
    EXPECT_EQ(rows.size(), 32u);
    // Listed rows and their complements cover all 64 spin patterns exactly once.
    std::vector<int> seen(64, 0);
    for (const auto& r : rows) {
        ++seen[spin_bits(r.spins)];
        ++seen[spin_bits(r.spins) ^ 63];
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));

    const auto& r0 = row("000000");
    EXPECT_EQ(r0.sign, -1);
    EXPECT_EQ(r0.alpha_pow, 1);
    EXPECT_EQ(r0.beta_pow, -1);
    ASSERT_EQ(r0.ops.size(), 2u);
    EXPECT_EQ(r0.ops[0].label, 3);
    EXPECT_EQ(r0.ops[1].label, 6);
    EXPECT_TRUE(r0.ops[0].dagger && r0.ops[1].dagger);

    const auto& r7 = row("000111");
    EXPECT_EQ(r7.sign, 1);
    EXPECT_EQ(r7.alpha_pow, 0);
    EXPECT_EQ(r7.beta_pow, 0);
    EXPECT_TRUE(r7.ops.empty());
}

// β powers follow (#annihilators − #creators)/2 on every row.
TEST(PlaquetteTable, BetaPowerRule) {
    for (const auto& r : plaquette_rows()) {
        int cr = 0, an = 0;
        for (const auto& op : r.ops) (op.dagger ? cr : an)++;
        EXPECT_EQ(2 * r.beta_pow, an - cr) << r.spins;
    }
}

TEST(FermionOps, SignsAndPauli) {
    FockLayout F;
    // c3† c6† |0⟩: c6† first (no modes below), then c3† (mode 6 is above) → +1.
    auto r = apply_fermion_ops({{3, true}, {6, true}}, 0, F);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->first, (1 << 2) | (1 << 5));
    EXPECT_EQ(r->second, 1);
    // c6† c3† |0⟩ = −c3† c6† |0⟩.
    EXPECT_EQ(apply_fermion_ops({{6, true}, {3, true}}, 0, F)->second, -1);
    EXPECT_FALSE(apply_fermion_ops({{1, true}}, 1, F).has_value());
    EXPECT_FALSE(apply_fermion_ops({{1, false}}, 0, F).has_value());
}

TEST(Plaquette, EntryRow000000) {
    FockLayout F;
    auto B = build_plaquette(I, -I, F);
    // ⟨111111, c3†c6†| B |000000, vac⟩ = −α/β = 1 at α = i, β = −i.
    const auto& col = B.cols[FockLayout::index(0, 0)];
    auto it = col.find(FockLayout::index(63, (1 << 2) | (1 << 5)));
    ASSERT_NE(it, col.end());
    EXPECT_EQ(it->second, Q(1));
    EXPECT_EQ(col.size(), 1u);
}

TEST(Plaquette, EntryRow000111) {
    auto B = build_plaquette(I, -I);
    int in = spin_bits("000111");
    for (int mask = 0; mask < 64; ++mask) {
        const auto& col = B.cols[FockLayout::index(in, mask)];
        ASSERT_EQ(col.size(), 1u);
        EXPECT_EQ(col.begin()->first, FockLayout::index(in ^ 63, mask));
        EXPECT_EQ(col.begin()->second, Q(1));
    }
}

TEST(Plaquette, ProjectorAtMinusI) {
    auto H = build_hexagon_geometry();
    for (auto alpha : {I, -I}) {
        auto Qp = plaquette_projector(build_plaquette(alpha, -I), H);
        EXPECT_EQ(max_deviation(Qp * Qp, Qp), 0.0);
        EXPECT_EQ(max_deviation(adjoint(Qp), Qp), 0.0);
        EXPECT_GT(Qp.nnz(), 0u);
    }
}

TEST(Plaquette, SquaresToIdentityOnConsistentStates) {
    auto H = build_hexagon_geometry();
    auto Pv = vertex_projector<Q>(H);
    for (auto beta : {-I, I}) {
        auto B = build_plaquette(I, beta);
        EXPECT_EQ(max_deviation(Pv * B * B * Pv, Pv), 0.0);
        EXPECT_EQ(max_deviation(B * Pv, Pv * B), 0.0);
    }
    EXPECT_EQ(Pv.nnz(), 64u);
}

TEST(Plaquette, RejectsZeroBeta) { EXPECT_THROW(build_plaquette(I, Q(0)), std::invalid_argument); }

TEST(Hexagon, Geometry) {
    auto H = build_hexagon_geometry();
    EXPECT_FALSE(validate_branching(H.lattice.graph).has_value());
    auto info = analyze_region(H.lattice.graph, H.region());
    EXPECT_EQ(info.walk.size(), 6u);
    EXPECT_EQ(info.interior_vertices, std::vector<int>{H.center});
    std::vector<int> tri;
    for (int k = 1; k <= 6; ++k) tri.push_back(Hexagon::fermion_triangle(k));
    std::sort(tri.begin(), tri.end());
    EXPECT_EQ(tri, (std::vector<int>{0, 1, 2, 3, 4, 5}));
}

TEST(Hexagon, IdentityBoundaryState) {
    auto m = ftc_model<Q>(1);
    auto H = build_hexagon_geometry();
    auto A = hexagon_tensor(m, H);
    auto st = hexagon_state(A, H, 0, 0);
    ASSERT_FALSE(st.empty());
    auto it = st.find({0, Monomial{}});
    ASSERT_NE(it, st.end());
    EXPECT_EQ(it->second, Q(1));
}

TEST(Eigenstate, AlphaPlusAtMinusI) {
    auto rep = verify_plaquette_eigenstate(ftc_model<Q>(1), at_beta(minus_i));
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.configs.size(), 64u);
    EXPECT_EQ(rep.max_deviation, 0.0);
}

TEST(Eigenstate, DualAtPlusI) {
    auto rep = verify_plaquette_eigenstate(ftc_model<Q>(-1), at_beta(plus_i));
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.configs.size(), 64u);
}

TEST(Eigenstate, MismatchedAlphaFails) {
    auto o = at_beta(minus_i);
    o.alpha = plus_i;
    EXPECT_FALSE(verify_plaquette_eigenstate(ftc_model<Q>(-1), o).pass);
    o.alpha = minus_i;
    EXPECT_FALSE(verify_plaquette_eigenstate(ftc_model<Q>(1), o).pass);
}

TEST(Eigenstate, FloatMode) {
    auto rep = verify_plaquette_eigenstate(ftc_model<Complex>(1), at_beta(minus_i));
    EXPECT_TRUE(rep.pass);
    EXPECT_LE(rep.max_deviation, 1e-9);
}

// Same Fock order in both constructions: the verdict does not depend on which order is used.
TEST(Eigenstate, OrderCovariance) {
    for (const auto& order : {std::array<int, 6>{6, 5, 4, 3, 2, 1}, std::array<int, 6>{2, 4, 6, 1, 3, 5}}) {
        auto o = at_beta(minus_i);
        o.fock.order = order;
        EXPECT_TRUE(verify_plaquette_eigenstate(ftc_model<Q>(1), o).pass);
        auto d = at_beta(plus_i);
        d.fock.order = order;
        EXPECT_TRUE(verify_plaquette_eigenstate(ftc_model<Q>(-1), d).pass);
        FockLayout F;
        F.order = order;
        EXPECT_TRUE(verify_vertex_consistency(ftc_model<Q>(1), F));
    }
}

TEST(LoopInsertion, BothDirections) {
    for (int v0 : {0, 1}) {
        EXPECT_TRUE(verify_loop_insertion(ftc_model<Q>(1), v0, at_beta(minus_i)).pass) << v0;
        EXPECT_TRUE(verify_loop_insertion(ftc_model<Q>(-1), v0, at_beta(plus_i)).pass) << v0;
    }
}

TEST(LoopInsertion, MismatchFails) {
    auto o = at_beta(minus_i);
    o.alpha = minus_i;
    EXPECT_FALSE(verify_loop_insertion(ftc_model<Q>(1), 0, o).pass);
}

TEST(VertexConsistency, BothModels) {
    EXPECT_TRUE(verify_vertex_consistency(ftc_model<Q>(1)));
    EXPECT_TRUE(verify_vertex_consistency(ftc_model<Q>(-1)));
    auto H = build_hexagon_geometry();
    // All spins 0 needs no fermions; any occupied mode is inconsistent.
    EXPECT_TRUE(vertex_consistent(H, FockLayout::index(0, 0)));
    EXPECT_FALSE(vertex_consistent(H, FockLayout::index(0, 1)));
}

TEST(FtcCheck, Summary) {
    auto s = ftc_check(ftc_model<Q>(1), at_beta(minus_i));
    EXPECT_TRUE(s.pentagon_ok);
    EXPECT_TRUE(s.axioms_ok);
    EXPECT_TRUE(s.plaquette.pass);
    EXPECT_EQ(s.degeneracy, 4);
    EXPECT_EQ(s.degeneracy_rank, 4);
    EXPECT_TRUE(s.pass());
}

TEST(ScalarFrom, ExactRejectsIrrational) {
    EXPECT_EQ(scalar_from<Q>(Complex(0, -1)), -I);
    EXPECT_THROW(scalar_from<Q>(Complex(0.5, 0)), InexactValue);
}
