#pragma once

#include <map>
#include <string>

#include "wtpolar/codec.hpp"
#include "wtpolar/region.hpp"

namespace wtpolar {

// Finite-length rates read off the plan ledger, plus every overhead the
// scheme spends beyond the messages themselves.
struct EmpiricalRates {
    RateTuple rates;  // indexed by receiver
    int n = 0, L = 1, corner = 1;
    // overhead ledger, all in bits for the whole chain
    size_t chain_key_bits = 0;
    size_t side_info_key_bits = 0;
    size_t side_info_bits = 0;
    size_t sc_random_bits = 0;
    size_t pad_bits = 0;
    double key_rate() const { return static_cast<double>(chain_key_bits + side_info_key_bits) / (static_cast<double>(n) * L); }
    double sc_rate() const { return static_cast<double>(sc_random_bits) / (static_cast<double>(n) * L); }
};

inline EmpiricalRates empirical_rates(const ChainingPlan& plan, const OuterPlan& outer) {
    EmpiricalRates e;
    const int n = plan.n, L = plan.L, k = plan.corner;
    e.n = n;
    e.L = L;
    e.corner = k;
    double nl = static_cast<double>(n) * L;

    double sv = 0, su_k = 0, su_kb = 0;
    for (int i = 1; i <= L; ++i) {
        sv += plan.sv_size(i);
        su_k += outer.k_msg_area(i, L).size();
        su_kb += outer.kb_msg_area(i, L).size();
    }
    e.rates.rs[k - 1] = (sv + su_k) / nl;
    e.rates.rs[2 - k] = su_kb / nl;
    e.rates.rw[k - 1] =
        (static_cast<double>(L) * plan.cells.C.size() + static_cast<double>(L) * outer.k.w_area.size()) / nl;
    e.rates.rw[2 - k] = static_cast<double>(L) * outer.kb.w_area.size() / nl;

    // overheads
    e.chain_key_bits = static_cast<size_t>(plan.cells.C12.size()) + static_cast<size_t>(outer.kb.Odef.size()) +
                       static_cast<size_t>(k == 1 ? plan.cells.C1.size() : plan.cells.C2.size()) +
                       static_cast<size_t>(outer.k.Jk.size());
    for (int ell = 1; ell <= 2; ++ell) {
        size_t pv = static_cast<size_t>(phi_v_area(plan.cells, ell).size());
        size_t uv = static_cast<size_t>(ups_v_area(plan.cells, ell).size());
        const ULayerSets& us = layer_sets_for_receiver(outer, ell);
        size_t pu = static_cast<size_t>(phi_u_area(us, n).size());
        size_t uu = static_cast<size_t>(ups_u_area(us, n).size());
        e.side_info_key_bits += static_cast<size_t>(L) * (pv + pu) + uv + uu;
    }
    e.side_info_bits = e.side_info_key_bits;  // one-time pad, same length
    size_t scA = static_cast<size_t>(plan.cells.hV.complement(n).set_minus(plan.cells.lV).size());
    size_t scK = static_cast<size_t>(
        outer.k.sets.high_ctx.complement(n).set_minus(outer.k.sets.low_ctx).size());
    size_t scB = static_cast<size_t>(
        outer.kb.sets.high_ctx.complement(n).set_minus(outer.kb.sets.low_ctx).size());
    e.sc_random_bits = static_cast<size_t>(L) * (scA + scK + scB);
    e.pad_bits = L > 1 ? static_cast<size_t>(plan.pad_last.size()) : 0;
    return e;
}

}  // namespace wtpolar
