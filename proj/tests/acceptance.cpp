// One PASS/FAIL line per acceptance criterion; exit status 1 if any line fails.

#include "fermitn/ftc.hpp"
#include "fermitn/groundstate.hpp"
#include "fermitn/lattice.hpp"
#include "fermitn/model.hpp"
#include "fermitn/mpo.hpp"

#include "property_suite.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

using namespace fermitn;
using Q = GaussRational;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = limit_s <= 0 || dt < limit_s;
    bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << "  " << name << "  [" << o.detail;
    line.precision(3);
    line << std::fixed << "; " << dt << " s";
    if (limit_s > 0) line << (in_time ? " < " : " >= ") << limit_s << " s";
    line << "]";
    std::puts(line.str().c_str());
    std::fflush(stdout);
}

struct Minimal {
    BranchingGraph g;
    ModeLayout L;
    MpoRing ring;
};

Minimal minimal(Orientation o) {
    Minimal m{minimal_triangle(o), {}, {}};
    m.L = ModeLayout(m.g);
    m.ring = boundary_mpo(m.g, {0}, m.L);
    return m;
}

const char* sign_name(int s) { return s > 0 ? "ftc+" : "ftc-"; }

}  // namespace

int main() {
    criterion("pentagon census: Z2, ftc s, roots 4 gives exactly omega(1,1,1) = +i, -i", 1.0, [] {
        auto sols = solve_graded_pentagon(cyclic_group(2), ftc_s(), 4);
        std::set<std::string> vals;
        for (const auto& w : sols) vals.insert(scalar_traits<Q>::from_phase(w(1, 1, 1)).str());
        bool ok = sols.size() == 2 && vals == std::set<std::string>{Q::i().str(), (-Q::i()).str()};
        for (const auto& w : sols) ok = ok && is_normalized(to_scalar_cocycle<Q>(w));
        std::string d = std::to_string(sols.size()) + " solutions:";
        for (const auto& v : vals) d += " " + v;
        return Outcome{ok, d};
    });

    criterion("axiom 1: P+^2 = P+ and P-^2 = P- exactly, both ftc models", 1.0, [] {
        Outcome o{true, ""};
        for (int sign : {1, -1})
            for (auto or_ : {Orientation::plus, Orientation::minus}) {
                auto m = ftc_model<Q>(sign);
                auto mm = minimal(or_);
                auto c = verify_projector(projector(m, mm.ring), mm.ring);
                o.pass = o.pass && c.pass;
                o.detail += std::string(o.detail.empty() ? "" : ", ") + sign_name(sign) + " P" + to_string(or_) +
                            (c.pass ? " ok" : " bad");
            }
        return o;
    });

    criterion("representation: V(g)V(h) = V(hg) for all 4 pairs", 0, [] {
        Outcome o{true, ""};
        int pairs = 0;
        for (int sign : {1, -1})
            for (auto or_ : {Orientation::plus, Orientation::minus}) {
                auto r = verify_representation(ftc_model<Q>(sign), minimal(or_).ring);
                o.pass = o.pass && r.pass;
                pairs += 4 - static_cast<int>(r.violations.size());
            }
        o.detail = std::to_string(pairs) + "/16 pairs exact over ftc+/- and both orientations";
        return o;
    });

    criterion("symmetry: A o V(g) = A for g in {0,1}, both orientations", 0, [] {
        Outcome o{true, ""};
        int ok = 0;
        for (int sign : {1, -1})
            for (auto or_ : {Orientation::plus, Orientation::minus}) {
                auto m = ftc_model<Q>(sign);
                auto mm = minimal(or_);
                auto A = region_tensor(m, mm.g, {0}, mm.L);
                for (int g = 0; g < 2; ++g) {
                    bool p = verify_symmetry(A, assemble_v(m, mm.ring, g), mm.ring).pass;
                    o.pass = o.pass && p;
                    ok += p;
                }
            }
        o.detail = std::to_string(ok) + "/8 exact";
        return o;
    });

    criterion("injectivity: A~ A = P (normalized projector)", 0, [] {
        Outcome o{true, ""};
        int ok = 0;
        for (int sign : {1, -1})
            for (auto or_ : {Orientation::plus, Orientation::minus}) {
                auto m = ftc_model<Q>(sign);
                auto mm = minimal(or_);
                auto A = region_tensor(m, mm.g, {0}, mm.L);
                auto At = region_tilde(m, mm.g, {0}, mm.L, true);
                bool p = verify_injectivity(At, A, projector(m, mm.ring), mm.ring).pass;
                o.pass = o.pass && p;
                ok += p;
            }
        o.detail = std::to_string(ok) + "/4 exact";
        return o;
    });

    criterion("concatenation: 6 open + closing cases pass for ftc+/-, flipped Y detected", 10.0, [] {
        Outcome o{true, ""};
        for (int sign : {1, -1}) {
            auto rep = concat_case_suite(ftc_model<Q>(sign));
            int open = 0, closing = 0, open_ok = 0, closing_ok = 0;
            auto cases = concat_cases().cases;
            for (std::size_t i = 0; i < rep.cases.size(); ++i) {
                bool c = cases[i].closing;
                (c ? closing : open)++;
                if (rep.cases[i].pass()) (c ? closing_ok : open_ok)++;
            }
            o.pass = o.pass && rep.pass() && open == 6;
            o.detail += std::string(sign_name(sign)) + " open " + std::to_string(open_ok) + "/" + std::to_string(open) +
                        " closing " + std::to_string(closing_ok) + "/" + std::to_string(closing) + "; ";
        }
        AxiomOptions mut;
        mut.mpo.y_mutation = YMutation::flip_nontrivial;
        mut.check_injectivity = false;
        mut.check_representation = false;
        auto rep = concat_case_suite(ftc_model<Q>(1), mut);
        int failed = 0;
        for (const auto& r : rep.cases) failed += !r.pass();
        o.pass = o.pass && failed >= 1;
        o.detail += "flipped Y fails " + std::to_string(failed) + "/" + std::to_string(rep.cases.size());
        return o;
    });

    criterion("plaquette: Q_p A_hex = A_hex, 64 configurations, beta = -i, alpha = +i and -i", 30.0, [] {
        Outcome o{true, ""};
        for (int sign : {1, -1}) {
            PlaquetteOptions p;
            p.beta = Complex(0, -1);
            auto rep = verify_plaquette_eigenstate(ftc_model<Q>(sign), p);
            int ok = 0;
            for (const auto& c : rep.configs) ok += c.pass;
            o.pass = o.pass && rep.pass && rep.configs.size() == 64;
            o.detail += std::string(o.detail.empty() ? "" : ", ") + "alpha=" + (sign > 0 ? "+i" : "-i") + " " +
                        std::to_string(ok) + "/64";
        }
        return o;
    });

    criterion("loop insertion: B_p A_hex(v0=0) = A_hex(v0=1) and back", 0, [] {
        Outcome o{true, ""};
        struct Run {
            int sign;
            Complex beta;
        };
        for (auto [sign, beta] : {Run{1, {0, -1}}, Run{-1, {0, 1}}})
            for (int v0 : {0, 1}) {
                PlaquetteOptions p;
                p.beta = beta;
                bool ok = verify_loop_insertion(ftc_model<Q>(sign), v0, p).pass;
                o.pass = o.pass && ok;
                o.detail += std::string(o.detail.empty() ? "" : ", ") + sign_name(sign) +
                            (beta.imag() < 0 ? " beta=-i" : " beta=+i") + " v0=" + std::to_string(v0) +
                            (ok ? " ok" : " bad");
            }
        return o;
    });

    criterion("degeneracy: ftc+/- 4 by count and rank, z2-bosonic-tc 4, trivial 1, count = rank", 0, [] {
        Outcome o{true, ""};
        auto want = [](const std::string& n) { return n == "trivial" ? 1 : n.rfind("ftc", 0) == 0 || n.rfind("z2-", 0) == 0 ? 4 : -1; };
        for (const auto& n : builtin_model_names()) {
            auto m = to_model<Q>(builtin_model(n));
            int c = degeneracy(m), r = degeneracy_by_rank(m);
            o.pass = o.pass && c == r && (want(n) < 0 || c == want(n));
            o.detail += std::string(o.detail.empty() ? "" : ", ") + n + " " + std::to_string(c) + "/" + std::to_string(r);
        }
        return o;
    });

    criterion("identities: eta identity and vanishing criterion for all builtins; >= 1000 random Grassmann cases", 0, [] {
        Outcome o{true, ""};
        long checked = 0, bad = 0;
        for (const auto& n : builtin_model_names()) {
            auto m = to_model<Q>(builtin_model(n));
            auto a = verify_eta_identity(m), b = verify_vanishing_criterion(m);
            checked += a.checked + b.checked;
            bad += static_cast<long>(a.violations.size() + b.violations.size());
            o.pass = o.pass && a.pass && b.pass;
        }
        long cases = 0, fails = 0;
        for (const auto& t : props::run_all(20261016, 200)) {
            cases += t.cases;
            fails += t.failures;
        }
        o.pass = o.pass && cases >= 1000 && fails == 0;
        o.detail = std::to_string(checked) + " identity checks, " + std::to_string(bad) + " violations; " +
                   std::to_string(cases) + " random cases, " + std::to_string(fails) + " failures";
        return o;
    });

    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
