#pragma once

#include <string>
#include <vector>

#include "wtpolar/bits.hpp"
#include "wtpolar/info.hpp"
#include "wtpolar/profile.hpp"

namespace wtpolar {

// High/low index sets of one profile at threshold delta_n.
struct IndexSets {
    IndexSet high;  // h[j] >= 1 - delta
    IndexSet low;   // h[j] <= delta
    double delta = 0;
    double unpolarized_fraction = 0;
};

inline IndexSets threshold_sets(const EntropyProfile& p, double delta) {
    if (!(delta > 0 && delta < 0.5)) throw ValidationError("threshold_sets: delta must be in (0, 0.5)");
    std::vector<int32_t> hi, lo;
    for (int j = 0; j < p.n(); ++j) {
        double v = p.h[static_cast<size_t>(j)];
        if (v >= 1 - delta) hi.push_back(j);
        if (v <= delta) lo.push_back(j);
    }
    IndexSets s;
    s.high = IndexSet(std::move(hi));
    s.low = IndexSet(std::move(lo));
    s.delta = delta;
    s.unpolarized_fraction =
        1.0 - static_cast<double>(s.high.size() + s.low.size()) / static_cast<double>(p.n());
    return s;
}

// The four profiles of the common layer and their thresholded sets.
struct VLayerSets {
    int n = 0;
    double delta = 0;
    IndexSet hV, lV;      // no conditioning
    IndexSet hVZ;         // high given Z
    IndexSet lVY[2];      // low given Y_k
};

inline VLayerSets v_layer_sets(const JointModel& m, const CodeConfig& cfg) {
    VLayerSets s;
    s.n = cfg.n;
    s.delta = cfg.delta_n();
    auto none = threshold_sets(entropy_profile(m, "V", "none", cfg), s.delta);
    s.hV = none.high;
    s.lV = none.low;
    s.hVZ = threshold_sets(entropy_profile(m, "V", "Z", cfg), s.delta).high;
    s.lVY[0] = threshold_sets(entropy_profile(m, "V", "Y1", cfg), s.delta).low;
    s.lVY[1] = threshold_sets(entropy_profile(m, "V", "Y2", cfg), s.delta).low;
    return s;
}

// Secrecy partition of the common layer: G holds indices secured from the
// eavesdropper, C the rest of the uniform area; both split by which
// receivers can infer them.
struct InnerPartition {
    int n = 0;
    IndexSet hV, lV, hVZ, lVY1, lVY2;
    IndexSet G, C;
    IndexSet G0, G1, G2, G12;
    IndexSet C0, C1, C2, C12;
};

inline InnerPartition partition_inner(const VLayerSets& s) {
    InnerPartition p;
    p.n = s.n;
    p.hV = s.hV;
    p.lV = s.lV;
    p.hVZ = s.hVZ;
    p.lVY1 = s.lVY[0];
    p.lVY2 = s.lVY[1];
    p.G = s.hVZ;
    p.C = s.hV.set_minus(s.hVZ);
    IndexSet nl1 = p.lVY1.complement(s.n), nl2 = p.lVY2.complement(s.n);
    p.G0 = p.G.set_intersect(p.lVY1).set_intersect(p.lVY2);
    p.G1 = p.G.set_intersect(nl1).set_intersect(p.lVY2);
    p.G2 = p.G.set_intersect(p.lVY1).set_intersect(nl2);
    p.G12 = p.G.set_intersect(nl1).set_intersect(nl2);
    p.C0 = p.C.set_intersect(p.lVY1).set_intersect(p.lVY2);
    p.C1 = p.C.set_intersect(nl1).set_intersect(p.lVY2);
    p.C2 = p.C.set_intersect(p.lVY1).set_intersect(nl2);
    p.C12 = p.C.set_intersect(nl1).set_intersect(nl2);
    return p;
}

enum class CaseId : uint8_t { A, B, C, D, E, F };

inline char to_char(CaseId c) { return static_cast<char>('A' + static_cast<int>(c)); }

struct CaseDecision {
    CaseId id = CaseId::A;
    SituationId situation = SituationId::S1;
    bool boundary_tie = false;
};

namespace detail {

inline bool case_allowed(CaseId c, SituationId s) {
    switch (c) {
        case CaseId::A: return s == SituationId::S1;
        case CaseId::B: return true;
        case CaseId::C: return s == SituationId::S1 || s == SituationId::S2;
        case CaseId::D: return true;
        case CaseId::E: return s == SituationId::S2 || s == SituationId::S3;
        case CaseId::F: return s == SituationId::S3;
    }
    return false;
}

// Sign template per case over (|G1|-|C2|, |G2|-|C1|, |G0|-|C12|); +1 wants
// > 0, -1 wants < 0, each relaxed to allow equality (ties logged).
inline bool case_matches(CaseId c, int d1, int d2, int d3, bool* tie) {
    static const int sgn[6][3] = {
        {+1, +1, +1},  // A (third comparison is >= in its definition)
        {+1, +1, -1},  // B
        {+1, -1, +1},  // C
        {-1, -1, +1},  // D
        {+1, -1, -1},  // E
        {-1, -1, -1},  // F
    };
    const int* t = sgn[static_cast<int>(c)];
    int d[3] = {d1, d2, d3};
    bool any_tie = false;
    for (int i = 0; i < 3; ++i) {
        if (d[i] == 0) {
            any_tie = true;
            continue;  // ties are compatible with the relaxed comparison
        }
        if ((d[i] > 0) != (t[i] > 0)) return false;
    }
    if (tie) *tie = any_tie;
    return true;
}

}  // namespace detail

// Checks the size chain the situation imposes and returns the matching case.
// Ties resolve as weak inequalities; a size pattern contradicting the
// situation's chain raises InadmissibleCombination.
inline CaseDecision classify_case(const InnerPartition& p, SituationId situation) {
    int d1 = p.G1.size() - p.C2.size();
    int d2 = p.G2.size() - p.C1.size();
    int d3 = p.G0.size() - p.C12.size();
    auto chain_holds = [&](SituationId s) {
        switch (s) {
            case SituationId::S1: return d1 >= d2 && d2 >= -d3;
            case SituationId::S2: return d1 >= -d3 && -d3 >= d2;
            case SituationId::S3: return -d3 >= d1 && d1 >= d2;
        }
        return false;
    };
    if (!chain_holds(situation))
        throw InadmissibleCombination(
            "size pattern (" + std::to_string(d1) + "," + std::to_string(d2) + "," +
            std::to_string(d3) + ") violates the chain for situation " +
            std::to_string(static_cast<int>(situation)));
    for (int ci = 0; ci < 6; ++ci) {
        CaseId c = static_cast<CaseId>(ci);
        if (!detail::case_allowed(c, situation)) continue;
        bool tie = false;
        if (detail::case_matches(c, d1, d2, d3, &tie)) {
            CaseDecision d;
            d.id = c;
            d.situation = situation;
            d.boundary_tie = tie;
            return d;
        }
    }
    throw InadmissibleCombination("no case matches pattern (" + std::to_string(d1) + "," +
                                  std::to_string(d2) + "," + std::to_string(d3) +
                                  ") under situation " + std::to_string(static_cast<int>(situation)));
}

}  // namespace wtpolar
