#pragma once

#include <algorithm>
#include <cmath>

#include "wtpolar/info.hpp"

namespace wtpolar {

// Extreme rate tuple when receiver k's rates are maximized first. All values
// in bits/symbol; rates are indexed by receiver, not by corner role.
struct RateTuple {
    double rs[2] = {0, 0};
    double rw[2] = {0, 0};
    bool has_negative = false;

    double rs1() const { return rs[0]; }
    double rs2() const { return rs[1]; }
    double rw1() const { return rw[0]; }
    double rw2() const { return rw[1]; }
};

// Corner point of the k-th sub-region, assuming the receiver roles are
// already normalized so that I(V;Y1) <= I(V;Y2). Negative components are
// reported as-is with a flag; feasibility handling is the caller's business.
inline RateTuple corner_point(const InfoReport& r, int k) {
    if (k != 1 && k != 2) throw ValidationError("corner_point: k must be 1 or 2");
    int kb = 3 - k;
    RateTuple t;
    t.rs[k - 1] = (r.hV_Z + r.hU_VZ[k - 1]) - (r.hV_Y(k) + r.hU_VYk[k - 1]);
    double floor_term = std::min(r.hV_Y2, r.hV_Z);
    t.rs[kb - 1] = r.hUb_VUZ[k - 1] - r.hUb_VYb[k - 1] - (r.hV_Y(kb) - floor_term);
    t.rw[k - 1] = (r.hV + r.hU_V[k - 1]) - (r.hV_Z + r.hU_VZ[k - 1]);
    t.rw[kb - 1] = r.hUb_VU[k - 1] - r.hUb_VUZ[k - 1];
    t.has_negative = t.rs[0] < -1e-12 || t.rs[1] < -1e-12 || t.rw[0] < -1e-12 || t.rw[1] < -1e-12;
    return t;
}

// All right-hand sides of the region inequalities, plus the
// successive-decoding comparison bounds and the no-eavesdropper reference.
struct RegionReport {
    // confidential-only region
    double s_only_rs[2] = {0, 0};
    double s_only_sum = 0;
    // per-corner sub-regions (first index: k-1)
    double sub_rs_k[2] = {0, 0};     // bound on R_S(k)
    double sub_rs_kb[2] = {0, 0};    // bound on R_S(kbar)
    double sub_rsw_k[2] = {0, 0};    // bound on R_S(k)+R_W(k)
    double sub_rsw_kb[2] = {0, 0};   // bound on R_S(kbar)+R_W(kbar)
    // successive decoding comparison (V decoded by both receivers first)
    double successive_rs[2] = {0, 0};
    // reference region with the eavesdropper removed
    double marton_r[2] = {0, 0};
    double marton_sum = 0;
    double max_common = 0;  // max{I(V;Y1), I(V;Y2), I(V;Z)}
};

inline RegionReport region_bounds(const InfoReport& r) {
    RegionReport out;
    double iVUY[2] = {r.iVU_Yk(1), r.iVU_Yk(2)};
    double iVUZ[2] = {r.iVU_Z(1), r.iVU_Z(2)};
    double iVUUZ = r.hVU1U2 - r.hVU1U2_Z;
    out.max_common = std::max({r.iVY1, r.iVY2, r.iVZ});
    for (int k = 1; k <= 2; ++k) {
        out.s_only_rs[k - 1] = iVUY[k - 1] - iVUZ[k - 1];
        out.marton_r[k - 1] = iVUY[k - 1];
    }
    out.s_only_sum = iVUY[0] + iVUY[1] - r.iU1U2_V - iVUUZ - out.max_common;
    out.marton_sum = iVUY[0] + iVUY[1] - r.iU1U2_V - std::max(r.iVY1, r.iVY2);
    for (int k = 1; k <= 2; ++k) {
        int kb = 3 - k;
        double iUbZ_VU = r.hUb_VU[k - 1] - r.hUb_VUZ[k - 1];
        out.sub_rs_k[k - 1] = iVUY[k - 1] - iVUZ[k - 1];
        out.sub_rs_kb[k - 1] = iVUY[kb - 1] - r.iU1U2_V - iUbZ_VU - out.max_common;
        out.sub_rsw_k[k - 1] = iVUY[k - 1];
        out.sub_rsw_kb[k - 1] = iVUY[kb - 1] - r.iU1U2_V - out.max_common + r.iVZ;
        out.successive_rs[k - 1] = std::min(r.iVY1, r.iVY2) + r.iUYk_V[k - 1] - iVUZ[k - 1];
    }
    return out;
}

// Membership of a corner tuple in the k-th sub-region (with tolerance).
inline bool corner_in_region(const RateTuple& t, const RegionReport& b, int k, double tol = 1e-9) {
    int kb = 3 - k;
    return t.rs[k - 1] <= b.sub_rs_k[k - 1] + tol && t.rs[kb - 1] <= b.sub_rs_kb[k - 1] + tol &&
           t.rs[k - 1] + t.rw[k - 1] <= b.sub_rsw_k[k - 1] + tol &&
           t.rs[kb - 1] + t.rw[kb - 1] <= b.sub_rsw_kb[k - 1] + tol;
}

}  // namespace wtpolar
