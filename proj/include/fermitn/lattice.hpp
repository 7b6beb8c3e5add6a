#pragma once

#include "fermitn/mpo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermitn {

struct Point {
    double x = 0, y = 0;
};

struct DirectedEdge {
    int tail = 0, head = 0;
};

struct BranchingGraph {
    std::vector<Point> vertices;
    std::vector<DirectedEdge> edges;
    std::vector<std::array<int, 3>> triangles;

    int edge_between(int u, int v) const {
        for (std::size_t i = 0; i < edges.size(); ++i)
            if ((edges[i].tail == u && edges[i].head == v) || (edges[i].tail == v && edges[i].head == u))
                return static_cast<int>(i);
        return -1;
    }
};

struct BranchingViolation {
    std::string kind;  // missing-edge, cyclic-face, no-global-flow, flow-deviation
    int face = -1;
    int edge = -1;
    std::string detail;
};

struct RegionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}
inline double corner_angle(const Point& o, const Point& a, const Point& b) {
    double c = cross(o, a, b);
    double d = (a.x - o.x) * (b.x - o.x) + (a.y - o.y) * (b.y - o.y);
    return std::abs(std::atan2(c, d));
}
}  // namespace detail

// Source (two outgoing), middle, sink (two incoming) of a face, with edges 01, 12, 02 and the sign.
struct TriangleRoles {
    std::array<int, 3> v{};
    std::array<int, 3> e{};
    Orientation orientation = Orientation::plus;
};

inline std::optional<TriangleRoles> triangle_roles(const BranchingGraph& g, int t) {
    const auto& tri = g.triangles[t];
    std::map<int, int> out;
    std::array<int, 3> es{};
    for (int i = 0; i < 3; ++i) {
        int u = tri[i], v = tri[(i + 1) % 3];
        int e = g.edge_between(u, v);
        if (e < 0) return std::nullopt;
        es[i] = e;
        ++out[g.edges[e].tail];
    }
    TriangleRoles r;
    int src = -1, snk = -1, mid = -1;
    for (int x : tri) {
        if (out[x] == 2) src = x;
        else if (out[x] == 0) snk = x;
        else mid = x;
    }
    if (src < 0 || snk < 0 || mid < 0) return std::nullopt;
    r.v = {src, mid, snk};
    r.e = {g.edge_between(src, mid), g.edge_between(mid, snk), g.edge_between(src, snk)};
    // Counter-clockwise source → middle → sink means the majority of edges run counter-clockwise.
    r.orientation = detail::cross(g.vertices[src], g.vertices[mid], g.vertices[snk]) > 0 ? Orientation::plus
                                                                                          : Orientation::minus;
    return r;
}

// Faces must be acyclic and all edges must lie within π/2 of a common flow direction.
inline std::optional<BranchingViolation> validate_branching(const BranchingGraph& g,
                                                            std::optional<Point> flow = std::nullopt) {
    for (std::size_t t = 0; t < g.triangles.size(); ++t) {
        const auto& tri = g.triangles[t];
        for (int i = 0; i < 3; ++i)
            if (g.edge_between(tri[i], tri[(i + 1) % 3]) < 0)
                return BranchingViolation{"missing-edge", static_cast<int>(t), -1, "face lacks an edge"};
        if (!triangle_roles(g, static_cast<int>(t)))
            return BranchingViolation{"cyclic-face", static_cast<int>(t), -1, "face is cyclically oriented"};
    }
    if (g.edges.empty()) return std::nullopt;
    if (flow) {
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            const auto& a = g.vertices[g.edges[i].tail];
            const auto& b = g.vertices[g.edges[i].head];
            if ((b.x - a.x) * flow->x + (b.y - a.y) * flow->y <= 0)
                return BranchingViolation{"flow-deviation", -1, static_cast<int>(i), "edge deviates by π/2 or more"};
        }
        return std::nullopt;
    }
    std::vector<double> ang;
    for (const auto& e : g.edges) {
        const auto& a = g.vertices[e.tail];
        const auto& b = g.vertices[e.head];
        ang.push_back(std::atan2(b.y - a.y, b.x - a.x));
    }
    std::sort(ang.begin(), ang.end());
    double gap = ang.front() + 2 * M_PI - ang.back();
    for (std::size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
    if (gap <= M_PI + 1e-12)
        return BranchingViolation{"no-global-flow", -1, -1, "edge directions do not fit in an open half-plane"};
    return std::nullopt;
}

// Mode numbering for one graph: physical modes first (in the given triangle order), then edge, bra,
// scratch and ring-bond modes.
struct ModeLayout {
    std::vector<std::uint32_t> phys;  // by triangle id
    std::uint32_t T = 0, E = 0, V = 0;

    ModeLayout() = default;
    explicit ModeLayout(const BranchingGraph& g, std::vector<int> phys_order = {}) {
        T = static_cast<std::uint32_t>(g.triangles.size());
        E = static_cast<std::uint32_t>(g.edges.size());
        V = static_cast<std::uint32_t>(g.vertices.size());
        if (phys_order.empty())
            for (std::uint32_t t = 0; t < T; ++t) phys_order.push_back(static_cast<int>(t));
        if (phys_order.size() != T) throw std::invalid_argument("physical order must list every triangle");
        phys.assign(T, 0);
        for (std::uint32_t k = 0; k < T; ++k) phys[phys_order[k]] = k;
    }
    std::uint32_t edge(int e) const { return T + static_cast<std::uint32_t>(e); }
    std::uint32_t bra(int e) const { return T + E + static_cast<std::uint32_t>(e); }
    std::uint32_t mid(int e) const { return T + 2 * E + static_cast<std::uint32_t>(e); }
    std::uint32_t bond(int v) const { return T + 3 * E + static_cast<std::uint32_t>(v); }
};

inline std::string phys_leg(int e) { return "p" + std::to_string(e); }

struct RegionInfo {
    std::vector<int> walk;            // counter-clockwise boundary vertices
    std::vector<int> walk_edges;      // graph edge between walk[i] and walk[i+1]
    std::vector<bool> parallel;       // graph edge points along the walk
    std::vector<int> inner_edges;
    std::vector<int> interior_vertices;
    std::vector<int> y_vertices;
    std::map<int, double> interior_angle;  // at boundary vertices
};

// Boundary walk, interior data and Y positions. The boundary must be one simple closed walk.
inline RegionInfo analyze_region(const BranchingGraph& g, const std::vector<int>& region) {
    if (region.empty()) throw RegionError("empty region");
    std::set<std::pair<int, int>> half;
    std::map<int, double> angle;
    std::set<int> touched;
    for (int t : region) {
        auto tri = g.triangles.at(t);
        if (detail::cross(g.vertices[tri[0]], g.vertices[tri[1]], g.vertices[tri[2]]) < 0) std::swap(tri[1], tri[2]);
        for (int i = 0; i < 3; ++i) {
            half.insert({tri[i], tri[(i + 1) % 3]});
            angle[tri[i]] += detail::corner_angle(g.vertices[tri[i]], g.vertices[tri[(i + 1) % 3]],
                                                  g.vertices[tri[(i + 2) % 3]]);
            touched.insert(tri[i]);
        }
    }
    std::map<int, int> next;
    std::set<int> inner;
    for (auto [u, v] : half) {
        if (half.count({v, u})) {
            inner.insert(g.edge_between(u, v));
            continue;
        }
        if (next.count(u)) throw RegionError("boundary is not a simple closed walk at vertex " + std::to_string(u));
        next[u] = v;
    }
    RegionInfo info;
    int start = next.begin()->first;
    int x = start;
    do {
        info.walk.push_back(x);
        x = next.at(x);
        if (info.walk.size() > next.size()) throw RegionError("boundary walk does not close");
    } while (x != start);
    if (info.walk.size() != next.size()) throw RegionError("region has more than one boundary component");
    info.inner_edges.assign(inner.begin(), inner.end());
    std::set<int> on_boundary(info.walk.begin(), info.walk.end());
    for (int v : touched)
        if (!on_boundary.count(v)) info.interior_vertices.push_back(v);
    const std::size_t n = info.walk.size();
    for (std::size_t i = 0; i < n; ++i) {
        int a = info.walk[i], b = info.walk[(i + 1) % n];
        int e = g.edge_between(a, b);
        info.walk_edges.push_back(e);
        info.parallel.push_back(g.edges[e].tail == a);
    }
    for (std::size_t i = 0; i < n; ++i) {
        int v = info.walk[i];
        const auto& ein = g.edges[info.walk_edges[(i + n - 1) % n]];
        const auto& eout = g.edges[info.walk_edges[i]];
        double a = angle[v];
        info.interior_angle[v] = a;
        bool both_out = ein.tail == v && eout.tail == v;
        bool both_in = ein.head == v && eout.head == v;
        if ((both_out && a < M_PI - 1e-9) || (both_in && a > M_PI + 1e-9)) info.y_vertices.push_back(v);
    }
    return info;
}

inline std::vector<int> place_y(const BranchingGraph& g, const std::vector<int>& region) {
    return analyze_region(g, region).y_vertices;
}

inline MpoRing boundary_mpo(const BranchingGraph& g, const std::vector<int>& region, const ModeLayout& L) {
    auto info = analyze_region(g, region);
    MpoRing ring;
    ring.vertices = info.walk;
    ring.y_vertices = info.y_vertices;
    const std::size_t n = info.walk.size();
    for (std::size_t i = 0; i < n; ++i) {
        int e = info.walk_edges[i];
        ring.edges.push_back({info.walk[i], info.walk[(i + 1) % n], info.parallel[i], L.edge(e), L.bra(e), L.mid(e)});
        ring.bond_mode[info.walk[i]] = L.bond(info.walk[i]);
    }
    return ring;
}

inline TriangleLabels triangle_labels(const BranchingGraph& g, int t, const ModeLayout& L) {
    auto r = triangle_roles(g, t);
    if (!r) throw RegionError("face " + std::to_string(t) + " is not a valid branching triangle");
    TriangleLabels lab;
    for (int i = 0; i < 3; ++i) {
        lab.v[i] = ket_leg(r->v[i]);
        lab.p[i] = phys_leg(r->e[i]);
        lab.e[i] = L.edge(r->e[i]);
    }
    lab.phys = L.phys[t];
    return lab;
}

struct RegionOptions {
    bool sum_interior = true;
    BerezinSign berezin = BerezinSign::minus;
};

// Glued A± tensors with inner bonds contracted. Boundary vertex legs are v<x>, physical legs p<e>.
template <class S>
FermionicTensor<S> region_tensor(const Model<S>& m, const BranchingGraph& g, const std::vector<int>& region,
                                 const ModeLayout& L, const RegionOptions& opt = {}) {
    auto info = analyze_region(g, region);
    auto r = FermionicTensor<S>::scalar(scalar_traits<S>::from_int(1));
    for (int t : region) r = join(r, build_a(m, triangle_roles(g, t)->orientation, triangle_labels(g, t, L)));
    std::vector<std::uint32_t> inner;
    for (int e : info.inner_edges) inner.push_back(L.edge(e));
    r = integrate_modes(r, inner, opt.berezin);
    if (opt.sum_interior && !info.interior_vertices.empty()) {
        std::vector<std::string> legs;
        for (int v : info.interior_vertices) legs.push_back(ket_leg(v));
        r = sum_legs(r, legs);
    }
    r.check_parity();
    return r;
}

// Glued Ã± tensors. With `normalized` the product with the region tensor is (1/|G|)ΣV(g), otherwise ΣV(g);
// interior vertices are averaged so the result does not scale with their number.
template <class S>
FermionicTensor<S> region_tilde(const Model<S>& m, const BranchingGraph& g, const std::vector<int>& region,
                                const ModeLayout& L, bool normalized = true,
                                BerezinSign conv = BerezinSign::minus) {
    auto info = analyze_region(g, region);
    auto r = FermionicTensor<S>::scalar(scalar_traits<S>::from_int(1));
    for (int t : region) r = join(r, build_a_tilde(m, triangle_roles(g, t)->orientation, triangle_labels(g, t, L)));
    std::vector<std::uint32_t> inner;
    for (int e : info.inner_edges) inner.push_back(L.edge(e));
    // Ã carries the mirrored pattern, so its inner pairs appear as θ̄θ and take the opposite sign.
    r = integrate_modes(r, inner, conv == BerezinSign::minus ? BerezinSign::plus : BerezinSign::minus);
    if (!info.interior_vertices.empty()) {
        std::vector<std::string> legs;
        for (int v : info.interior_vertices) legs.push_back(ket_leg(v));
        r = sum_legs(r, legs);
    }
    long den = 1;
    for (std::size_t i = 0; i < info.interior_vertices.size() + (normalized ? 1 : 0); ++i) den *= m.order();
    r *= scalar_traits<S>::ratio(1, den);
    r.check_parity();
    return r;
}

// ---- triangular lattice ----

// Vertices i·a + j·b with a = (1,0), b = (1/2, √3/2); edges along a, b and c = b − a.
// Up triangle U(i,j) = {x, x+a, x+b}, down triangle D(i,j) = {x+a, x+b, x+a+b}.
struct TriLattice {
    BranchingGraph graph;
    std::map<std::pair<int, int>, int> vertex_at;
    std::map<std::pair<int, int>, int> up, down;

    int vertex(int i, int j) const { return vertex_at.at({i, j}); }
    int U(int i, int j) const { return up.at({i, j}); }
    int D(int i, int j) const { return down.at({i, j}); }
};

inline TriLattice triangular_patch(int imin, int imax, int jmin, int jmax) {
    TriLattice L;
    for (int j = jmin; j <= jmax; ++j)
        for (int i = imin; i <= imax; ++i) {
            L.vertex_at[{i, j}] = static_cast<int>(L.graph.vertices.size());
            L.graph.vertices.push_back({i + 0.5 * j, std::sqrt(3.0) / 2 * j});
        }
    auto has = [&](int i, int j) { return L.vertex_at.count({i, j}) > 0; };
    for (int j = jmin; j <= jmax; ++j)
        for (int i = imin; i <= imax; ++i) {
            int x = L.vertex_at[{i, j}];
            if (has(i + 1, j)) L.graph.edges.push_back({x, L.vertex_at[{i + 1, j}]});
            if (has(i, j + 1)) L.graph.edges.push_back({x, L.vertex_at[{i, j + 1}]});
            if (has(i - 1, j + 1)) L.graph.edges.push_back({x, L.vertex_at[{i - 1, j + 1}]});
        }
    for (int j = jmin; j <= jmax; ++j)
        for (int i = imin; i <= imax; ++i) {
            if (has(i + 1, j) && has(i, j + 1)) {
                L.up[{i, j}] = static_cast<int>(L.graph.triangles.size());
                L.graph.triangles.push_back({L.vertex_at[{i, j}], L.vertex_at[{i + 1, j}], L.vertex_at[{i, j + 1}]});
            }
            if (has(i + 1, j) && has(i, j + 1) && has(i + 1, j + 1)) {
                L.down[{i, j}] = static_cast<int>(L.graph.triangles.size());
                L.graph.triangles.push_back(
                    {L.vertex_at[{i + 1, j}], L.vertex_at[{i, j + 1}], L.vertex_at[{i + 1, j + 1}]});
            }
        }
    return L;
}

inline Point lattice_flow() { return {std::cos(M_PI / 4), std::sin(M_PI / 4)}; }

// Single triangle with source 0, middle 1, sink 2; + is counter-clockwise.
inline BranchingGraph minimal_triangle(Orientation o) {
    BranchingGraph g;
    const double h = std::sqrt(3.0) / 2;
    if (o == Orientation::plus) g.vertices = {{0, 0}, {1, 0}, {0.5, h}};
    else g.vertices = {{0, 0}, {0.5, h}, {1, 0}};
    g.edges = {{0, 1}, {1, 2}, {0, 2}};
    g.triangles = {{0, 1, 2}};
    return g;
}

// ---- axiom checks on a region ----

struct RegionReport {
    std::string name;
    bool symmetry = true;
    bool projector = true;
    bool representation = true;
    bool injectivity = true;
    bool orders_agree = true;
    double max_deviation = 0;
    std::vector<int> y_vertices;

    bool pass() const { return symmetry && projector && representation && injectivity && orders_agree; }
};

struct AxiomOptions {
    MpoOptions mpo;
    bool check_representation = true;
    bool check_injectivity = true;
};

template <class S>
RegionReport check_region(const Model<S>& m, const BranchingGraph& g, const std::vector<int>& region,
                          const AxiomOptions& opt = {}, const std::string& name = "") {
    RegionReport rep;
    rep.name = name;
    ModeLayout L(g);
    auto ring = boundary_mpo(g, region, L);
    rep.y_vertices = ring.y_vertices;
    const auto conv = opt.mpo.berezin;
    auto A = region_tensor(m, g, region, L, {true, conv});

    std::vector<FermionicTensor<S>> V;
    for (int x = 0; x < m.order(); ++x) V.push_back(assemble_v(m, ring, x, opt.mpo));
    for (int x = 0; x < m.order(); ++x) {
        auto c = verify_symmetry(A, V[x], ring, conv);
        rep.symmetry = rep.symmetry && c.pass;
        rep.max_deviation = std::max(rep.max_deviation, c.max_deviation);
    }
    if (opt.check_representation) {
        for (int x = 0; x < m.order(); ++x)
            for (int y = 0; y < m.order(); ++y) {
                auto lhs = compose(V[x], V[y], ring, conv);
                const auto& rhs = V[m.G.mul(y, x)];
                rep.representation = rep.representation && tensor_equal(lhs, rhs);
                rep.max_deviation = std::max(rep.max_deviation, max_deviation(lhs, rhs));
            }
    }
    auto P = V[0];
    for (int x = 1; x < m.order(); ++x) P = add(P, V[x]);
    if (opt.mpo.normalized) P *= scalar_traits<S>::ratio(1, m.order());
    if (opt.mpo.normalized) {
        auto c = verify_projector(P, ring, conv);
        rep.projector = c.pass;
        rep.max_deviation = std::max(rep.max_deviation, c.max_deviation);
    } else {
        // Unnormalized sum: P² = |G|·P.
        auto P2 = compose(P, P, ring, conv);
        auto GP = P;
        GP *= scalar_traits<S>::from_int(m.order());
        rep.projector = tensor_equal(P2, GP);
        rep.max_deviation = std::max(rep.max_deviation, max_deviation(P2, GP));
    }
    if (opt.check_injectivity) {
        auto At = region_tilde(m, g, region, L, opt.mpo.normalized, conv);
        auto c = verify_injectivity(At, A, P, ring, conv);
        rep.injectivity = c.pass;
        rep.max_deviation = std::max(rep.max_deviation, c.max_deviation);
    }
    return rep;
}

// ---- concatenation cases ----

struct ConcatCase {
    std::string name;
    bool closing = false;
    std::vector<int> base;
    int added = -1;
};

struct ConcatSuite {
    TriLattice lattice;
    std::vector<ConcatCase> cases;
};

// Open gluings across an a-, b- or c-edge with the new triangle on either side, and closing gluings where
// the added triangle completes the fan around a vertex that is its source, middle or sink.
inline ConcatSuite concat_cases() {
    ConcatSuite s{triangular_patch(-2, 2, -2, 2), {}};
    const auto& L = s.lattice;
    s.cases.push_back({"open a-edge, down triangle added below", false, {L.U(0, 0), L.D(-1, 0)}, L.D(0, -1)});
    s.cases.push_back({"open a-edge, up triangle added above", false, {L.D(0, -1), L.U(1, -1)}, L.U(0, 0)});
    s.cases.push_back({"open b-edge, down triangle added left", false, {L.U(0, 0), L.D(0, 0)}, L.D(-1, 0)});
    s.cases.push_back({"open b-edge, up triangle added right", false, {L.D(-1, 0), L.U(-1, 0)}, L.U(0, 0)});
    s.cases.push_back({"open c-edge, up triangle added left", false, {L.D(0, 0), L.U(1, 0)}, L.U(0, 0)});
    s.cases.push_back({"open c-edge, down triangle added right", false, {L.U(0, 0), L.D(-1, 0)}, L.D(0, 0)});

    // Fan around the origin z: t0 U(z), t1 D(z-a), t2 U(z-a), t3 D(z-a-b), t4 U(z-b), t5 D(z-b).
    const std::array<int, 6> fan{L.U(0, 0), L.D(-1, 0), L.U(-1, 0), L.D(-1, -1), L.U(0, -1), L.D(0, -1)};
    const std::array<const char*, 6> role{"source, up", "source, down", "middle, up",
                                          "sink, down",  "sink, up",     "middle, down"};
    for (int t = 0; t < 6; ++t) {
        ConcatCase c{std::string("closing at ") + role[t] + " triangle", true, {}, fan[t]};
        for (int u = 0; u < 6; ++u)
            if (u != t) c.base.push_back(fan[u]);
        s.cases.push_back(std::move(c));
    }
    return s;
}

struct ConcatReport {
    std::vector<RegionReport> cases;
    bool pass() const {
        return std::all_of(cases.begin(), cases.end(), [](const RegionReport& r) { return r.pass(); });
    }
};

template <class S>
ConcatReport concat_case_suite(const Model<S>& m, const AxiomOptions& opt = {}) {
    auto suite = concat_cases();
    const auto& g = suite.lattice.graph;
    ModeLayout L(g);
    ConcatReport out;
    for (const auto& c : suite.cases) {
        std::vector<int> region = c.base;
        region.push_back(c.added);
        auto rep = check_region(m, g, region, opt, c.name);
        // The glued tensor must not depend on whether the base is contracted first.
        RegionOptions ro{true, opt.mpo.berezin};
        auto all = region_tensor(m, g, region, L, ro);
        auto base = region_tensor(m, g, c.base, L, {false, opt.mpo.berezin});
        auto glued = join(base, build_a(m, triangle_roles(g, c.added)->orientation, triangle_labels(g, c.added, L)));
        auto info = analyze_region(g, region);
        std::set<int> base_inner;
        for (int e : analyze_region(g, c.base).inner_edges) base_inner.insert(e);
        std::vector<std::uint32_t> rest;
        for (int e : info.inner_edges)
            if (!base_inner.count(e)) rest.push_back(L.edge(e));
        glued = integrate_modes(glued, rest, opt.mpo.berezin);
        std::vector<std::string> legs;
        for (int v : info.interior_vertices) legs.push_back(ket_leg(v));
        if (!legs.empty()) glued = sum_legs(glued, legs);
        rep.orders_agree = tensor_equal(all, glued);
        rep.max_deviation = std::max(rep.max_deviation, max_deviation(all, glued));
        out.cases.push_back(std::move(rep));
    }
    return out;
}

}  // namespace fermitn
