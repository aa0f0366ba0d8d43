#pragma once

#include <array>
#include <string>
#include <vector>

#include "wtpolar/sets.hpp"

namespace wtpolar {

// Slicing of the repeated chain segments. Each of the six sequences carried
// across blocks is split into three contiguous parts: part 1 lands in the
// matching primary repetition area, part 2 in the auxiliary area, and part 3
// travels through the outer layer.
enum class SeqId : uint8_t { Psi, PsiBar, Theta, ThetaBar, Gamma, GammaBar };
using PartTriple = std::array<int, 3>;

struct ChainingPlan {
    int n = 0;
    int L = 1;
    int corner = 1;  // receiver whose rates are maximized
    CaseDecision decision;
    InnerPartition cells;

    IndexSet R1, R1p, R2, R2p, R12, R12p, RS, I, RLam;
    IndexSet IG1, IG2;  // I cap G1 / G2 (the forwarded message areas)

    PartTriple parts[6] = {};

    // Confidential-message areas of the common layer per block position.
    IndexSet msg_first, msg_mid, msg_last;
    IndexSet pad_last;  // boundary positions with no content at the last block

    bool relaxed = false;
    int truncated_bits = 0;
    std::vector<std::string> notes;

    const PartTriple& part(SeqId s) const { return parts[static_cast<int>(s)]; }

    int delta1_size() const {
        return corner == 1 ? part(SeqId::ThetaBar)[2] + part(SeqId::GammaBar)[2]
                           : part(SeqId::Theta)[2] + part(SeqId::Gamma)[2];
    }
    int delta2_size() const {
        return corner == 1 ? part(SeqId::Psi)[2] + part(SeqId::Gamma)[2]
                           : part(SeqId::PsiBar)[2] + part(SeqId::GammaBar)[2];
    }
    int pi1_size() const { return IG1.size(); }
    int pi2_size() const { return IG2.size(); }

    // Confidential payload of the common layer per block index (1-based).
    int sv_size(int block) const {
        if (L == 1) return cells.G.size();
        if (block == 1) return msg_first.size();
        if (block == L) return msg_last.size();
        return msg_mid.size();
    }
    const IndexSet& msg_area(int block) const {
        static const IndexSet empty;
        (void)empty;
        if (L == 1) return msg_single_;
        if (block == 1) return msg_first;
        if (block == L) return msg_last;
        return msg_mid;
    }
    IndexSet msg_single_;  // all of G when L == 1
};

namespace detail {

struct PlanBuilder {
    bool relax = false;
    ChainingPlan* plan = nullptr;

    int clamp(int want, int avail, const std::string& eq) {
        if (want <= avail) return want;
        if (!relax)
            throw InfeasiblePlan(eq + ": requires " + std::to_string(want) + " indices but only " +
                                 std::to_string(avail) + " available at this blocklength");
        plan->relaxed = true;
        plan->truncated_bits += want - avail;
        plan->notes.push_back(eq + ": truncated " + std::to_string(want - avail) + " bits");
        return avail;
    }
};

}  // namespace detail

// Builds the chained-repetition layout of the common layer for one corner
// point. Subset choices are lowest-index-first, so identical inputs always
// produce identical plans.
inline ChainingPlan build_plan(const InnerPartition& p, const CaseDecision& decision, int corner,
                               int L, bool relax = false) {
    if (corner != 1 && corner != 2) throw ValidationError("corner must be 1 or 2");
    if (L < 1) throw ValidationError("L must be >= 1");
    ChainingPlan out;
    out.n = p.n;
    out.L = L;
    out.corner = corner;
    out.decision = decision;
    out.cells = p;
    detail::PlanBuilder b{relax, &out};

    const int g0 = p.G0.size(), g1 = p.G1.size(), g2 = p.G2.size();
    const int c1 = p.C1.size(), c2 = p.C2.size(), c12 = p.C12.size();

    out.R2 = p.G1.take_front(b.clamp(std::min(c2, g1), g1, "R2 in G1"));
    out.R12 = p.G0.take_front(std::min(c12, g0));
    IndexSet g0_rest = p.G0.set_minus(out.R12);

    IndexSet r1base = p.G2.take_front(std::min(c1, g2));
    int r12p = std::min({std::max(0, c2 - out.R2.size()), g0_rest.size(),
                         std::max(0, c1 - r1base.size())});
    out.R12p = g0_rest.take_front(r12p);
    g0_rest = g0_rest.set_minus(out.R12p);

    int ext = corner == 1
                  ? std::min(std::max(0, c1 - r1base.size() - r12p), g0_rest.size())
                  : 0;
    out.R1 = r1base.set_union(g0_rest.take_front(ext));

    bool r1p_active = corner == 1 || decision.situation == SituationId::S3;
    int r1p = r1p_active ? std::min(std::max(0, c12 - out.R12.size()),
                                    g2 - std::min(c1, g2))
                         : 0;
    out.R1p = p.G2.set_minus(r1base).take_front(std::max(0, r1p));

    int r2p = std::min(std::max(0, c12 - out.R12.size()), g1 - out.R2.size());
    out.R2p = p.G1.set_minus(out.R2).take_front(r2p);

    IndexSet rs_pool = p.G1.set_minus(out.R2).set_minus(out.R2p);
    int rs_want = p.G2.set_minus(out.R1).set_minus(out.R1p).size();
    out.RS = rs_pool.take_front(b.clamp(rs_want, rs_pool.size(), "R_S in G1 (secrecy repetition)"));

    IndexSet removed = out.R1.set_union(out.R1p).set_union(out.R12).set_union(out.R12p);
    if (corner == 1) {
        out.I = p.G0.set_union(p.G2).set_minus(removed);
        out.RLam = p.G12.set_union(p.G1.set_minus(out.R2).set_minus(out.R2p).set_minus(out.RS));
    } else {
        out.I = p.G0.set_union(p.G1).set_union(p.G2).set_minus(
            removed.set_union(out.R2).set_union(out.R2p).set_union(out.RS));
        out.RLam = p.G12;
    }
    out.IG1 = out.I.set_intersect(p.G1);
    out.IG2 = out.I.set_intersect(p.G2);

    // Part tables: (primary repetition, auxiliary repetition, outer-layer
    // remainder). Which sequences are key-masked depends on the corner.
    auto triple = [](int cell, int a, int bb) {
        if (cell - a - bb < 0) throw InfeasiblePlan("negative segment remainder; case tables inconsistent");
        return PartTriple{a, bb, cell - a - bb};
    };
    PartTriple backTop = triple(c2, out.R2.size(), out.R12p.size());      // C2 toward later blocks
    PartTriple backMid = triple(c12, out.R12.size(), out.R2p.size());     // C12 toward later blocks
    PartTriple fwdTop = triple(c1, out.R1.size(), out.R12p.size());       // C1 toward earlier blocks
    PartTriple fwdMid = triple(c12, out.R12.size(), out.R1p.size());      // C12 toward earlier blocks
    if (corner == 1) {
        out.parts[static_cast<int>(SeqId::Psi)] = backTop;
        out.parts[static_cast<int>(SeqId::Gamma)] = backMid;
        out.parts[static_cast<int>(SeqId::ThetaBar)] = fwdTop;
        out.parts[static_cast<int>(SeqId::GammaBar)] = fwdMid;
        out.parts[static_cast<int>(SeqId::PsiBar)] = {c2, 0, 0};
        out.parts[static_cast<int>(SeqId::Theta)] = {c1, 0, 0};
    } else {
        out.parts[static_cast<int>(SeqId::PsiBar)] = backTop;
        out.parts[static_cast<int>(SeqId::GammaBar)] = backMid;
        out.parts[static_cast<int>(SeqId::Theta)] = fwdTop;
        out.parts[static_cast<int>(SeqId::Gamma)] = fwdMid;
        out.parts[static_cast<int>(SeqId::Psi)] = {c2, 0, 0};
        out.parts[static_cast<int>(SeqId::ThetaBar)] = {c1, 0, 0};
    }

    out.msg_first = out.I.set_union(p.G1).set_union(p.G12);
    out.msg_mid = out.I;
    out.msg_last = out.I.set_union(p.G2);
    out.msg_single_ = p.G;
    out.pad_last = out.R1.set_minus(p.G2);  // boundary hole: no later block feeds it

    // Cross-checks against the summary ledger of the construction.
    if (!relax) {
        int d1 = out.delta1_size(), d2 = out.delta2_size();
        int d2_expect = std::max(0, c2 + c12 - g0 - g1);
        if (d2 != d2_expect)
            throw InfeasiblePlan("delta2 ledger mismatch: " + std::to_string(d2) + " vs " +
                                 std::to_string(d2_expect));
        if (corner == 1) {
            int d1_expect = std::max(0, c1 + c12 - g0 - g2);
            if (d1 != d1_expect)
                throw InfeasiblePlan("delta1 ledger mismatch: " + std::to_string(d1) + " vs " +
                                     std::to_string(d1_expect));
            if (out.pi1_size() != 0) throw InfeasiblePlan("Pi1 must be empty at this corner");
        } else {
            int m1_expect = decision.situation == SituationId::S3
                                ? std::max(0, c1 + c12 - g0 - g2)
                                : g1 + c1 - g2 - c2;
            if (out.pi1_size() + d1 != m1_expect)
                throw InfeasiblePlan("Pi1+delta1 ledger mismatch: " +
                                     std::to_string(out.pi1_size() + d1) + " vs " +
                                     std::to_string(m1_expect));
        }
    }
    return out;
}

// Retry helper for finite blocklengths: when the size pattern contradicts
// the situation implied by the mutual informations, fall back to a situation
// whose chain the observed sizes do satisfy (the constructions converge as n
// grows, so this only matters at desk scale).
inline CaseDecision classify_case_with_fallback(const InnerPartition& p, SituationId preferred,
                                                bool* substituted = nullptr) {
    if (substituted) *substituted = false;
    try {
        return classify_case(p, preferred);
    } catch (const InadmissibleCombination&) {
    }
    for (SituationId s : {SituationId::S1, SituationId::S2, SituationId::S3}) {
        if (s == preferred) continue;
        try {
            CaseDecision d = classify_case(p, s);
            if (substituted) *substituted = true;
            return d;
        } catch (const InadmissibleCombination&) {
        }
    }
    throw InadmissibleCombination("size pattern fits no situation chain");
}

}  // namespace wtpolar
