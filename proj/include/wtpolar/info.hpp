#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "wtpolar/model.hpp"

namespace wtpolar {

inline double log2_safe(double x) { return std::log2(x); }

inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// H(targets | given) in bits by exact summation over the finite joint.
inline double conditional_entropy(const JointModel& m, const std::vector<Var>& targets,
                                  const std::vector<Var>& given) {
    std::map<std::pair<uint64_t, uint64_t>, double> joint;  // (given-key, target-key)
    std::map<uint64_t, double> marg;
    auto key = [&](const std::vector<Var>& vars, int v, int u1, int u2, int x, int y1, int y2,
                   int z) {
        uint64_t k = 0;
        for (Var var : vars)
            k = k * static_cast<uint64_t>(m.card(var)) +
                static_cast<uint64_t>(m.value_of(var, v, u1, u2, x, y1, y2, z));
        return k;
    };
    m.for_each_joint([&](int v, int u1, int u2, int x, int y1, int y2, int z, double p) {
        joint[{key(given, v, u1, u2, x, y1, y2, z), key(targets, v, u1, u2, x, y1, y2, z)}] += p;
        marg[key(given, v, u1, u2, x, y1, y2, z)] += p;
    });
    double h = 0;
    for (const auto& [k, p] : joint) {
        if (p <= 0) continue;
        h -= p * std::log2(p / marg[k.first]);
    }
    return h;
}

inline double entropy(const JointModel& m, const std::vector<Var>& targets) {
    return conditional_entropy(m, targets, {});
}

inline double mutual_information(const JointModel& m, const std::vector<Var>& a,
                                 const std::vector<Var>& b) {
    return entropy(m, a) - conditional_entropy(m, a, b);
}

inline double conditional_mi(const JointModel& m, const std::vector<Var>& a,
                             const std::vector<Var>& b, const std::vector<Var>& c) {
    std::vector<Var> bc = b;
    bc.insert(bc.end(), c.begin(), c.end());
    return conditional_entropy(m, a, c) - conditional_entropy(m, a, bc);
}

// The entropies and mutual informations entering the region formulas, all in
// bits. Index convention: arrays indexed by k-1 for k in {1,2}.
struct InfoReport {
    double hV = 0, hV_Z = 0, hV_Y1 = 0, hV_Y2 = 0;
    double hU_V[2] = {0, 0};       // H(U_k | V)
    double hU_VZ[2] = {0, 0};      // H(U_k | V Z)
    double hU_VYk[2] = {0, 0};     // H(U_k | V Y_k)
    double hUb_VU[2] = {0, 0};     // H(U_kbar | V U_k), indexed by k
    double hUb_VUZ[2] = {0, 0};    // H(U_kbar | V U_k Z)
    double hUb_VYb[2] = {0, 0};    // H(U_kbar | V Y_kbar)
    double iVZ = 0, iVY1 = 0, iVY2 = 0;
    double iU1U2_V = 0;            // I(U1;U2|V)
    double iUYk_V[2] = {0, 0};     // I(U_k;Y_k|V)
    double iUZ_V[2] = {0, 0};      // I(U_k;Z|V)

    // composite entropies used by the region arithmetic
    double hVU[2] = {0, 0};        // H(V U_k)
    double hVU_Z[2] = {0, 0};      // H(V U_k | Z)
    double hVU_Yk[2] = {0, 0};     // H(V U_k | Y_k)
    double hVU1U2 = 0, hVU1U2_Z = 0;

    double hV_Y(int k) const { return k == 1 ? hV_Y1 : hV_Y2; }
    double iVY(int k) const { return k == 1 ? iVY1 : iVY2; }
    double iVU_Yk(int k) const { return hVU[k - 1] - hVU_Yk[k - 1]; }
    double iVU_Z(int k) const { return hVU[k - 1] - hVU_Z[k - 1]; }
};

inline InfoReport information_quantities(const JointModel& m) {
    InfoReport r;
    r.hV = entropy(m, {Var::V});
    r.hV_Z = conditional_entropy(m, {Var::V}, {Var::Z});
    r.hV_Y1 = conditional_entropy(m, {Var::V}, {Var::Y1});
    r.hV_Y2 = conditional_entropy(m, {Var::V}, {Var::Y2});
    const Var u[2] = {Var::U1, Var::U2};
    const Var y[2] = {Var::Y1, Var::Y2};
    for (int k = 0; k < 2; ++k) {
        Var uk = u[k], ub = u[1 - k], yk = y[k], yb = y[1 - k];
        r.hU_V[k] = conditional_entropy(m, {uk}, {Var::V});
        r.hU_VZ[k] = conditional_entropy(m, {uk}, {Var::V, Var::Z});
        r.hU_VYk[k] = conditional_entropy(m, {uk}, {Var::V, yk});
        r.hUb_VU[k] = conditional_entropy(m, {ub}, {Var::V, uk});
        r.hUb_VUZ[k] = conditional_entropy(m, {ub}, {Var::V, uk, Var::Z});
        r.hUb_VYb[k] = conditional_entropy(m, {ub}, {Var::V, yb});
        r.iUYk_V[k] = conditional_mi(m, {uk}, {yk}, {Var::V});
        r.iUZ_V[k] = conditional_mi(m, {uk}, {Var::Z}, {Var::V});
        r.hVU[k] = entropy(m, {Var::V, uk});
        r.hVU_Z[k] = conditional_entropy(m, {Var::V, uk}, {Var::Z});
        r.hVU_Yk[k] = conditional_entropy(m, {Var::V, uk}, {yk});
    }
    r.hVU1U2 = entropy(m, {Var::V, Var::U1, Var::U2});
    r.hVU1U2_Z = conditional_entropy(m, {Var::V, Var::U1, Var::U2}, {Var::Z});
    r.iVZ = mutual_information(m, {Var::V}, {Var::Z});
    r.iVY1 = mutual_information(m, {Var::V}, {Var::Y1});
    r.iVY2 = mutual_information(m, {Var::V}, {Var::Y2});
    r.iU1U2_V = conditional_mi(m, {Var::U1}, {Var::U2}, {Var::V});
    return r;
}

enum class SituationId { S1 = 1, S2 = 2, S3 = 3 };

// Which of the three orderings of I(V;Z) against I(V;Y1) <= I(V;Y2) holds.
// `swapped` records whether the receiver roles had to be exchanged first so
// that I(V;Y1) <= I(V;Y2); ties resolve toward the smaller situation index.
struct Situation {
    SituationId id = SituationId::S1;
    bool swapped = false;
    bool tie = false;
    std::string tie_note;
};

inline Situation classify_situation(const InfoReport& rep, double tol = 1e-9) {
    Situation s;
    double iy1 = rep.iVY1, iy2 = rep.iVY2;
    if (iy1 > iy2 + tol) {
        s.swapped = true;
        std::swap(iy1, iy2);
    } else if (std::abs(iy1 - iy2) <= tol) {
        s.tie = true;
        s.tie_note = "I(V;Y1) == I(V;Y2) within tolerance";
    }
    double iz = rep.iVZ;
    if (iz <= iy1 + tol) {
        s.id = SituationId::S1;
        if (std::abs(iz - iy1) <= tol) {
            s.tie = true;
            s.tie_note += (s.tie_note.empty() ? "" : "; ") + std::string("I(V;Z) == I(V;Y1)");
        }
    } else if (iz <= iy2 + tol) {
        s.id = SituationId::S2;
        if (std::abs(iz - iy2) <= tol) {
            s.tie = true;
            s.tie_note += (s.tie_note.empty() ? "" : "; ") + std::string("I(V;Z) == I(V;Y2)");
        }
    } else {
        s.id = SituationId::S3;
    }
    return s;
}

inline bool check_marton_feasibility(const InfoReport& r, double tol = 1e-9) {
    return r.iUYk_V[0] + r.iUYk_V[1] >= r.iU1U2_V - tol;
}

}  // namespace wtpolar
