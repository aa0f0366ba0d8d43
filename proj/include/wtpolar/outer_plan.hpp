#pragma once

#include <string>
#include <vector>

#include "wtpolar/plan.hpp"

namespace wtpolar {

// Thresholded sets of one outer layer. For the corner layer the context is
// the common sequence; for the companion layer it also includes the corner
// layer, except that receiver-side decodability conditions on (V, Y) only.
struct ULayerSets {
    IndexSet high_ctx;   // H given the full encoding context
    IndexSet low_ctx;    // L given the full encoding context
    IndexSet high_ctxZ;  // H given context and Z
    IndexSet low_ctxY;   // L given V and the receiver's observations
    IndexSet high_V;     // H given V alone (receiver-side uniform part)
};

inline ULayerSets u_layer_sets(const JointModel& m, int receiver, bool companion, int corner_k,
                               const CodeConfig& cfg) {
    std::string layer = receiver == 1 ? "U1" : "U2";
    std::string y = receiver == 1 ? "Y1" : "Y2";
    double delta = cfg.delta_n();
    ULayerSets s;
    if (!companion) {
        auto base = threshold_sets(entropy_profile(m, layer, "V", cfg), delta);
        s.high_ctx = base.high;
        s.low_ctx = base.low;
        s.high_V = base.high;
        s.high_ctxZ = threshold_sets(entropy_profile(m, layer, "VZ", cfg), delta).high;
    } else {
        std::string u = corner_k == 1 ? "U1" : "U2";
        auto base = threshold_sets(entropy_profile(m, layer, "V" + u, cfg), delta);
        s.high_ctx = base.high;
        s.low_ctx = base.low;
        s.high_ctxZ = threshold_sets(entropy_profile(m, layer, "V" + u + "Z", cfg), delta).high;
        s.high_V = threshold_sets(entropy_profile(m, layer, "V", cfg), delta).high;
    }
    s.low_ctxY = threshold_sets(entropy_profile(m, layer, "V" + y, cfg), delta).low;
    return s;
}

// Layout of the outer layer aligned with the corner receiver.
struct OuterLayerK {
    int receiver = 1;
    ULayerSets sets;
    IndexSet F0, Fk, J0, Jk, Dk, Lk;
    IndexSet w_area;  // J0 u Jk
    IndexSet msg_first, msg_mid, msg_last, msg_single;
};

// Layout of the companion outer layer.
struct OuterLayerKb {
    int receiver = 2;
    ULayerSets sets;
    IndexSet Q0, Qkb, B0, Bkb;
    IndexSet Odef;  // SC-drawn positions the receiver needs
    IndexSet O, N, M;
    IndexSet w_area;  // B0 u Bkb
    IndexSet msg_first, msg_mid, msg_last, msg_single;
};

struct OuterPlan {
    int corner = 1;
    OuterLayerK k;
    OuterLayerKb kb;
    bool relaxed = false;
    int truncated_bits = 0;
    std::vector<std::string> notes;

    const IndexSet& k_msg_area(int block, int L) const {
        if (L == 1) return k.msg_single;
        if (block == 1) return k.msg_first;
        if (block == L) return k.msg_last;
        return k.msg_mid;
    }
    const IndexSet& kb_msg_area(int block, int L) const {
        if (L == 1) return kb.msg_single;
        if (block == 1) return kb.msg_first;
        if (block == L) return kb.msg_last;
        return kb.msg_mid;
    }
};

// Assembles the outer-layer index families for one corner point. Repetition
// hosts are chosen lowest-index-first; shortages raise InfeasiblePlan unless
// relax truncates them (recording the rate loss).
inline OuterPlan build_outer_plan(const ULayerSets& for_k, const ULayerSets& for_kb,
                                  const ChainingPlan& plan, bool relax = false) {
    OuterPlan out;
    out.corner = plan.corner;
    const int n = plan.n;
    const int k = plan.corner;
    out.k.receiver = k;
    out.kb.receiver = 3 - k;
    out.k.sets = for_k;
    out.kb.sets = for_kb;

    auto clamp = [&](int want, int avail, const std::string& eq) {
        if (want <= avail) return want;
        if (!relax)
            throw InfeasiblePlan(eq + ": requires " + std::to_string(want) + " but only " +
                                 std::to_string(avail) + " available");
        out.relaxed = true;
        out.truncated_bits += want - avail;
        out.notes.push_back(eq + ": truncated " + std::to_string(want - avail) + " bits");
        return avail;
    };

    // Corner layer: F/J partition of H(U_k | V).
    {
        const ULayerSets& s = for_k;
        IndexSet nl = s.low_ctxY.complement(n);
        IndexSet hz_c = s.high_ctxZ.complement(n);
        out.k.F0 = s.high_ctxZ.set_intersect(s.low_ctxY);
        out.k.Fk = s.high_ctxZ.set_minus(s.low_ctxY);
        out.k.J0 = s.high_ctx.set_intersect(hz_c).set_intersect(s.low_ctxY);
        out.k.Jk = s.high_ctx.set_intersect(hz_c).set_intersect(nl);
        int dwant = out.k.Jk.size();
        if (dwant > out.k.F0.size() && !relax)
            throw InfeasiblePlan(
                "|F0| < |J_k| (" + std::to_string(out.k.F0.size()) + " < " + std::to_string(dwant) +
                "): the regime with I(U_k;Y_k|V) < I(U_k;Z|V) is not supported");
        out.k.Dk = out.k.F0.take_front(clamp(dwant, out.k.F0.size(), "D_k in F0"));
        IndexSet rest = out.k.F0.set_minus(out.k.Dk);
        int lk_expect = plan.corner == 1 ? plan.delta1_size() : plan.delta2_size();
        {
            int c_k = k == 1 ? plan.cells.C1.size() : plan.cells.C2.size();
            int g_kb = k == 1 ? plan.cells.G2.size() : plan.cells.G1.size();
            int lk_formula =
                std::max(0, c_k + plan.cells.C12.size() - plan.cells.G0.size() - g_kb);
            if (!relax && !plan.relaxed && lk_formula != lk_expect)
                throw InfeasiblePlan("L_k ledger mismatch: formula " + std::to_string(lk_formula) +
                                     " vs chain remainder " + std::to_string(lk_expect));
        }
        out.k.Lk = rest.take_front(clamp(lk_expect, rest.size(), "L_k in F0 \\ D_k"));
        out.k.w_area = out.k.J0.set_union(out.k.Jk);
        IndexSet dl = out.k.Dk.set_union(out.k.Lk);
        if (k == 1) {
            out.k.msg_first = out.k.F0.set_union(out.k.Fk).set_minus(dl);
            out.k.msg_mid = out.k.F0.set_minus(dl);
            out.k.msg_last = out.k.F0;
        } else {
            out.k.msg_first = out.k.F0.set_union(out.k.Fk);
            out.k.msg_mid = out.k.F0.set_minus(dl);
            out.k.msg_last = out.k.F0.set_minus(dl);
        }
        out.k.msg_single = out.k.F0.set_union(out.k.Fk);
    }

    // Companion layer: Q/B partition of H(U_kbar | V U_k) plus the key-masked
    // repetition of its SC-drawn, receiver-needed positions.
    {
        const ULayerSets& s = for_kb;
        IndexSet nl = s.low_ctxY.complement(n);
        IndexSet hz_c = s.high_ctxZ.complement(n);
        out.kb.Q0 = s.high_ctxZ.set_intersect(s.low_ctxY);
        out.kb.Qkb = s.high_ctxZ.set_minus(s.low_ctxY);
        out.kb.B0 = s.high_ctx.set_intersect(hz_c).set_intersect(s.low_ctxY);
        out.kb.Bkb = s.high_ctx.set_intersect(hz_c).set_intersect(nl);
        out.kb.Odef = s.high_ctx.complement(n).set_intersect(s.high_V).set_intersect(nl);
        IndexSet pool = out.kb.Q0;
        out.kb.O = pool.take_front(clamp(out.kb.Odef.size(), pool.size(), "O in Q0"));
        pool = pool.set_minus(out.kb.O);
        out.kb.N = pool.take_front(clamp(out.kb.Bkb.size(), pool.size(), "N in Q0 \\ O"));
        pool = pool.set_minus(out.kb.N);
        int m_expect = plan.corner == 1 ? plan.delta2_size()
                                        : plan.pi1_size() + plan.delta1_size();
        {
            int m_formula;
            if (k == 1) {
                m_formula = std::max(0, plan.cells.C2.size() + plan.cells.C12.size() -
                                            plan.cells.G0.size() - plan.cells.G1.size());
            } else {
                m_formula = plan.decision.situation == SituationId::S3
                                ? std::max(0, plan.cells.C1.size() + plan.cells.C12.size() -
                                                  plan.cells.G0.size() - plan.cells.G2.size())
                                : plan.cells.G1.size() + plan.cells.C1.size() -
                                      plan.cells.G2.size() - plan.cells.C2.size();
            }
            if (!relax && !plan.relaxed && m_formula != m_expect)
                throw InfeasiblePlan("M ledger mismatch: formula " + std::to_string(m_formula) +
                                     " vs repetition load " + std::to_string(m_expect));
        }
        out.kb.M = pool.take_front(clamp(m_expect, pool.size(), "M in Q0 \\ (O u N)"));
        out.kb.w_area = out.kb.B0.set_union(out.kb.Bkb);
        IndexSet onm = out.kb.O.set_union(out.kb.N).set_union(out.kb.M);
        if (out.kb.receiver == 2) {
            out.kb.msg_first = out.kb.Q0.set_union(out.kb.Qkb);
            out.kb.msg_mid = out.kb.Q0.set_minus(onm);
            out.kb.msg_last = out.kb.Q0.set_minus(onm);
        } else {
            out.kb.msg_first = out.kb.Q0.set_union(out.kb.Qkb).set_minus(onm);
            out.kb.msg_mid = out.kb.Q0.set_minus(onm);
            out.kb.msg_last = out.kb.Q0;
        }
        out.kb.msg_single = out.kb.Q0.set_union(out.kb.Qkb);
    }
    return out;
}

}  // namespace wtpolar
