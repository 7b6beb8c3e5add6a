#pragma once

#include "fermitn/groups.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace fermitn {

// Group, 2-cocycle and super-3-cocycle with ω kept as exact phases.
struct PhaseModel {
    std::string name;
    FiniteGroup G;
    Cocycle2 s;
    PhaseCocycle omega;
};

template <class S>
struct Model {
    std::string name;
    FiniteGroup G;
    Cocycle2 s;
    Cocycle3<S> omega;

    int order() const { return G.order(); }
    // ω^{-1} for unit-modulus values.
    S omega_inv(int a, int b, int c) const { return scalar_traits<S>::from_int(1) / omega(a, b, c); }
};

template <class S>
Model<S> to_model(const PhaseModel& m) {
    return {m.name, m.G, m.s, to_scalar_cocycle<S>(m.omega)};
}

inline PhaseModel ftc_phase_model(int sign) {
    PhaseModel m{sign > 0 ? "ftc+" : "ftc-", cyclic_group(2), ftc_s(), PhaseCocycle(2, Phase::one())};
    m.omega.set(1, 1, 1, Phase(sign > 0 ? 1 : 3, 4));
    return m;
}

inline PhaseModel z2_bosonic_tc() { return {"z2-bosonic-tc", cyclic_group(2), Cocycle2(2), PhaseCocycle(2, Phase::one())}; }

inline PhaseModel z2_double_semion() {
    PhaseModel m{"z2-double-semion", cyclic_group(2), Cocycle2(2), PhaseCocycle(2, Phase::one())};
    m.omega.set(1, 1, 1, Phase(1, 2));
    return m;
}

inline PhaseModel s3_untwisted() { return {"s3-untwisted", symmetric_group3(), Cocycle2(6), PhaseCocycle(6, Phase::one())}; }

inline PhaseModel trivial_model() { return {"trivial", trivial_group(), Cocycle2(1), PhaseCocycle(1, Phase::one())}; }

// Z2^3 with ω(a,b,c) = (-1)^{a1 b2 c3}; element index (x1*2 + x2)*2 + x3.
inline PhaseModel z2cubed_type3() {
    FiniteGroup G = direct_product(abelian_group(2, 2), cyclic_group(2));
    PhaseModel m{"z2cubed-type3", G, Cocycle2(8), PhaseCocycle(8, Phase::one())};
    auto bit = [](int x, int i) { return (x >> (2 - i)) & 1; };
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            for (int c = 0; c < 8; ++c)
                if (bit(a, 0) * bit(b, 1) * bit(c, 2)) m.omega.set(a, b, c, Phase(1, 2));
    return m;
}

inline const std::vector<std::string>& builtin_model_names() {
    static const std::vector<std::string> names{"ftc+", "ftc-", "z2-bosonic-tc", "z2-double-semion", "s3-untwisted",
                                                "trivial", "z2cubed-type3"};
    return names;
}

inline PhaseModel builtin_model(const std::string& name) {
    if (name == "ftc+") return ftc_phase_model(+1);
    if (name == "ftc-" || name == "ftc−") return ftc_phase_model(-1);
    if (name == "z2-bosonic-tc") return z2_bosonic_tc();
    if (name == "z2-double-semion") return z2_double_semion();
    if (name == "s3-untwisted") return s3_untwisted();
    if (name == "trivial") return trivial_model();
    if (name == "z2cubed-type3") return z2cubed_type3();
    throw std::invalid_argument("unknown builtin model '" + name + "'");
}

template <class S>
Model<S> ftc_model(int sign) {
    return to_model<S>(ftc_phase_model(sign));
}

}  // namespace fermitn
