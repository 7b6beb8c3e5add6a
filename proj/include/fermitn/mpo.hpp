#pragma once

#include "fermitn/ftensor.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fermitn {

// Ring edge between consecutive walk vertices a → b. `parallel` means the lattice edge also points a → b.
struct RingEdge {
    int a = 0;
    int b = 0;
    bool parallel = true;
    std::uint32_t ket_mode = 0;  // shared with the edge mode of the tensor the MPO acts on
    std::uint32_t bra_mode = 0;
    std::uint32_t mid_mode = 0;  // scratch mode for composing two MPOs
};

// Counter-clockwise boundary walk with T± tags and Y insertions.
struct MpoRing {
    std::vector<int> vertices;
    std::vector<RingEdge> edges;
    std::vector<int> y_vertices;
    std::map<int, std::uint32_t> bond_mode;  // MPO bond at each walk vertex
};

inline std::string ket_leg(int x) { return "v" + std::to_string(x); }
inline std::string bra_leg(int x) { return "w" + std::to_string(x); }
inline std::string mid_leg(int x) { return "m" + std::to_string(x); }

struct MpoOptions {
    BerezinSign berezin = BerezinSign::minus;
    YMutation y_mutation = YMutation::none;
    bool normalized = true;  // P = (1/|G|)ΣV(g)
};

// tTr over the ring bonds: ket legs v<x>, bra legs w<x>, ket/bra edge modes left open.
template <class S>
FermionicTensor<S> assemble_v(const Model<S>& m, const MpoRing& ring, int g, const MpoOptions& opt = {}) {
    auto r = FermionicTensor<S>::scalar(scalar_traits<S>::from_int(1));
    for (const auto& e : ring.edges) {
        TLabels L{ket_leg(e.a), ket_leg(e.b), bra_leg(e.a), bra_leg(e.b),
                  e.ket_mode,   e.bra_mode,   ring.bond_mode.at(e.a), ring.bond_mode.at(e.b)};
        r = join(r, build_t(m, g, e.parallel ? Orientation::plus : Orientation::minus, L));
    }
    for (int x : ring.y_vertices) r = join(r, build_y(m, ket_leg(x), bra_leg(x), opt.y_mutation));
    std::vector<std::uint32_t> bonds;
    for (const auto& [x, id] : ring.bond_mode) bonds.push_back(id);
    r = integrate_modes(r, bonds, opt.berezin);
    r.check_parity();
    return r;
}

// X∘Y: the bra side of X contracts with the ket side of Y.
template <class S>
FermionicTensor<S> compose(const FermionicTensor<S>& X, const FermionicTensor<S>& Y, const MpoRing& ring,
                           BerezinSign conv = BerezinSign::minus) {
    std::map<std::string, std::string> lx, ly;
    std::unordered_map<std::uint32_t, std::uint32_t> mx, my;
    std::vector<std::string> summed;
    std::vector<std::uint32_t> mids;
    for (int x : ring.vertices) {
        lx[bra_leg(x)] = mid_leg(x);
        ly[ket_leg(x)] = mid_leg(x);
        summed.push_back(mid_leg(x));
    }
    for (const auto& e : ring.edges) {
        mx[e.bra_mode] = e.mid_mode;
        my[e.ket_mode] = e.mid_mode;
        mids.push_back(e.mid_mode);
    }
    auto j = join(rename_modes(rename_legs(X, lx), mx), rename_modes(rename_legs(Y, ly), my));
    return integrate_modes(sum_legs(j, summed), mids, conv);
}

template <class S>
FermionicTensor<S> projector(const Model<S>& m, const MpoRing& ring, const MpoOptions& opt = {}) {
    auto P = assemble_v(m, ring, 0, opt);
    for (int g = 1; g < m.order(); ++g) P = add(P, assemble_v(m, ring, g, opt));
    if (opt.normalized) P *= scalar_traits<S>::ratio(1, m.order());
    return P;
}

// A∘V: A's virtual legs and edge modes contract with the ket side of V; the result lives on V's bra side
// and is relabelled back onto A's legs and modes.
template <class S>
FermionicTensor<S> apply_mpo(const FermionicTensor<S>& A, const FermionicTensor<S>& V, const MpoRing& ring,
                             BerezinSign conv = BerezinSign::minus) {
    std::vector<std::string> summed;
    std::map<std::string, std::string> back;
    std::unordered_map<std::uint32_t, std::uint32_t> modes;
    std::vector<std::uint32_t> kets;
    for (int x : ring.vertices) {
        summed.push_back(ket_leg(x));
        back[bra_leg(x)] = ket_leg(x);
    }
    for (const auto& e : ring.edges) {
        kets.push_back(e.ket_mode);
        modes[e.bra_mode] = e.ket_mode;
    }
    auto r = integrate_modes(sum_legs(join(A, V), summed), kets, conv);
    return rename_modes(rename_legs(r, back), modes);
}

// V·M with V's bra side contracting M; M is given on ket labels and the result is on ket labels.
template <class S>
FermionicTensor<S> act_on_state(const FermionicTensor<S>& V, const FermionicTensor<S>& M, const MpoRing& ring,
                                BerezinSign conv = BerezinSign::minus) {
    std::map<std::string, std::string> to_bra;
    std::unordered_map<std::uint32_t, std::uint32_t> modes;
    std::vector<std::string> summed;
    std::vector<std::uint32_t> bras;
    for (int x : ring.vertices) {
        to_bra[ket_leg(x)] = bra_leg(x);
        summed.push_back(bra_leg(x));
    }
    for (const auto& e : ring.edges) {
        modes[e.ket_mode] = e.bra_mode;
        bras.push_back(e.bra_mode);
    }
    auto Mb = rename_modes(rename_legs(M, to_bra), modes);
    return integrate_modes(sum_legs(join(V, Mb), summed), bras, conv);
}

// Ã∘A: physical legs and modes contracted; Ã keeps the ket labels, A is moved to the bra labels.
template <class S>
FermionicTensor<S> pseudo_inverse_product(const FermionicTensor<S>& At, const FermionicTensor<S>& A,
                                          const MpoRing& ring, BerezinSign conv = BerezinSign::minus) {
    std::map<std::string, std::string> to_bra;
    std::unordered_map<std::uint32_t, std::uint32_t> modes;
    for (int x : ring.vertices) to_bra[ket_leg(x)] = bra_leg(x);
    for (const auto& e : ring.edges) modes[e.ket_mode] = e.bra_mode;
    auto Ab = rename_modes(rename_legs(A, to_bra), modes);
    std::vector<std::string> phys_legs;
    for (const auto& l : At.legs())
        if (l.role == LegRole::physical) phys_legs.push_back(l.name);
    std::vector<std::uint32_t> phys_modes;
    for (const auto& [id, role] : At.modes())
        if (role == ModeRole::physical) phys_modes.push_back(id);
    auto j = join(At, Ab);
    return integrate_modes(phys_legs.empty() ? j : sum_legs(j, phys_legs), phys_modes, conv);
}

struct Check {
    bool pass = true;
    double max_deviation = 0;
    void merge(bool ok, double dev) {
        pass = pass && ok;
        max_deviation = std::max(max_deviation, dev);
    }
};

struct PairViolation {
    int g = 0, h = 0;
    double deviation = 0;
};

struct RepresentationReport {
    bool pass = true;
    double max_deviation = 0;
    std::vector<PairViolation> violations;
};

// V(g)∘V(h) = V(hg) for all pairs.
template <class S>
RepresentationReport verify_representation(const Model<S>& m, const MpoRing& ring, const MpoOptions& opt = {}) {
    RepresentationReport rep;
    std::vector<FermionicTensor<S>> V;
    for (int g = 0; g < m.order(); ++g) V.push_back(assemble_v(m, ring, g, opt));
    for (int g = 0; g < m.order(); ++g)
        for (int h = 0; h < m.order(); ++h) {
            auto lhs = compose(V[g], V[h], ring, opt.berezin);
            double d = max_deviation(lhs, V[m.G.mul(h, g)]);
            bool ok = tensor_equal(lhs, V[m.G.mul(h, g)]);
            rep.max_deviation = std::max(rep.max_deviation, d);
            if (!ok) {
                rep.pass = false;
                rep.violations.push_back({g, h, d});
            }
        }
    return rep;
}

template <class S>
Check verify_symmetry(const FermionicTensor<S>& A, const FermionicTensor<S>& V, const MpoRing& ring,
                      BerezinSign conv = BerezinSign::minus) {
    auto AV = apply_mpo(A, V, ring, conv);
    Check c;
    c.merge(tensor_equal(AV, A), max_deviation(AV, A));
    return c;
}

template <class S>
Check verify_projector(const FermionicTensor<S>& P, const MpoRing& ring, BerezinSign conv = BerezinSign::minus) {
    auto P2 = compose(P, P, ring, conv);
    Check c;
    c.merge(tensor_equal(P2, P), max_deviation(P2, P));
    return c;
}

template <class S>
Check verify_injectivity(const FermionicTensor<S>& At, const FermionicTensor<S>& A, const FermionicTensor<S>& P,
                         const MpoRing& ring, BerezinSign conv = BerezinSign::minus) {
    auto R = pseudo_inverse_product(At, A, ring, conv);
    Check c;
    c.merge(tensor_equal(R, P), max_deviation(R, P));
    return c;
}

}  // namespace fermitn
