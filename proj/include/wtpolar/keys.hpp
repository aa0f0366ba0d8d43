#pragma once

#include <string>

#include "wtpolar/outer_plan.hpp"
#include "wtpolar/rng.hpp"

namespace wtpolar {

enum class KeyId : uint8_t { None, GammaV, ThetaV, PsiV, ThetaU, PsiU, O, UpsPhiV1, UpsPhiV2, UpsPhiU1, UpsPhiU2 };

// Pre-shared uniform keys. The chain keys (Gamma/Theta/Psi/O) are reused in
// every block, so their rate vanishes as L grows; the UpsPhi keys encrypt the
// out-of-band side information.
struct KeyRing {
    int corner = 1;
    Bits gammaV, thetaV, psiV, thetaU, psiU, oU;
    Bits upsPhiV[2], upsPhiU[2];

    const Bits& key(KeyId id) const {
        switch (id) {
            case KeyId::GammaV: return gammaV;
            case KeyId::ThetaV: return thetaV;
            case KeyId::PsiV: return psiV;
            case KeyId::ThetaU: return thetaU;
            case KeyId::PsiU: return psiU;
            case KeyId::O: return oU;
            case KeyId::UpsPhiV1: return upsPhiV[0];
            case KeyId::UpsPhiV2: return upsPhiV[1];
            case KeyId::UpsPhiU1: return upsPhiU[0];
            case KeyId::UpsPhiU2: return upsPhiU[1];
            default: break;
        }
        throw ValidationError("key(None)");
    }

    size_t chain_key_bits() const {
        return gammaV.size() + thetaV.size() + psiV.size() + thetaU.size() + psiU.size() + oU.size();
    }
    size_t side_info_key_bits() const {
        return upsPhiV[0].size() + upsPhiV[1].size() + upsPhiU[0].size() + upsPhiU[1].size();
    }
    size_t total_bits() const { return chain_key_bits() + side_info_key_bits(); }
};

// Side-information areas of the common layer for receiver ell (1-based).
inline IndexSet ups_v_area(const InnerPartition& c, int ell) {
    const IndexSet& l = ell == 1 ? c.lVY1 : c.lVY2;
    return c.hV.set_intersect(l.complement(c.n));
}
inline IndexSet phi_v_area(const InnerPartition& c, int ell) {
    const IndexSet& l = ell == 1 ? c.lVY1 : c.lVY2;
    return c.hV.complement(c.n).set_intersect(l.complement(c.n));
}
inline IndexSet needed_v_area(const InnerPartition& c, int ell) {
    const IndexSet& l = ell == 1 ? c.lVY1 : c.lVY2;
    return l.complement(c.n);
}

inline IndexSet ups_u_area(const ULayerSets& s, int n) {
    return s.high_V.set_minus(s.low_ctxY);
}
inline IndexSet phi_u_area(const ULayerSets& s, int n) {
    return s.high_V.complement(n).set_minus(s.low_ctxY);
}
inline IndexSet needed_u_area(const ULayerSets& s, int n) { return s.low_ctxY.complement(n); }

inline const ULayerSets& layer_sets_for_receiver(const OuterPlan& outer, int ell) {
    return ell == outer.corner ? outer.k.sets : outer.kb.sets;
}

// Draws the key ring for one corner point. With use_session_keys disabled
// the chain keys become all-zero placeholders of the same length (empirical
// leakage studies only); the side-information keys stay uniform.
inline KeyRing generate_keys(const ChainingPlan& plan, const OuterPlan& outer,
                             const CodeConfig& cfg, RandomSource& src) {
    KeyRing kr;
    kr.corner = plan.corner;
    const int n = plan.n;
    auto draw = [&](size_t len, bool session) {
        if (session && !cfg.use_session_keys) return Bits(len, 0);
        return src.uniform_bits(len);
    };
    kr.gammaV = draw(static_cast<size_t>(plan.cells.C12.size()), true);
    if (plan.corner == 1) {
        kr.thetaV = draw(static_cast<size_t>(plan.cells.C1.size()), true);
        kr.thetaU = draw(static_cast<size_t>(outer.k.Jk.size()), true);
    } else {
        kr.psiV = draw(static_cast<size_t>(plan.cells.C2.size()), true);
        kr.psiU = draw(static_cast<size_t>(outer.k.Jk.size()), true);
    }
    kr.oU = draw(static_cast<size_t>(outer.kb.Odef.size()), true);
    for (int ell = 1; ell <= 2; ++ell) {
        size_t lv = static_cast<size_t>(plan.L) * static_cast<size_t>(phi_v_area(plan.cells, ell).size()) +
                    static_cast<size_t>(ups_v_area(plan.cells, ell).size());
        kr.upsPhiV[ell - 1] = draw(lv, false);
        const ULayerSets& us = layer_sets_for_receiver(outer, ell);
        size_t lu = static_cast<size_t>(plan.L) * static_cast<size_t>(phi_u_area(us, n).size()) +
                    static_cast<size_t>(ups_u_area(us, n).size());
        kr.upsPhiU[ell - 1] = draw(lu, false);
    }
    return kr;
}

}  // namespace wtpolar
