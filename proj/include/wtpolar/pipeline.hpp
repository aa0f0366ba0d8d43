#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wtpolar/codec.hpp"
#include "wtpolar/rates.hpp"
#include "wtpolar/region.hpp"

namespace wtpolar {

// Everything derived from one (model, config, corner) triple. The model is
// normalized so that I(V;Y1) <= I(V;Y2); `swapped` tells whether receiver
// labels were exchanged (reports must be relabeled back).
struct Pipeline {
    JointModel model;  // normalized
    bool swapped = false;
    InfoReport report;
    Situation situation;
    InnerPartition partition;
    CaseDecision decision;
    bool situation_substituted = false;
    ChainingPlan plan;
    OuterPlan outer;
    CodeConfig cfg;
    int corner_user = 1;  // in the caller's receiver labels
    int corner = 1;       // in normalized labels

    int to_user_receiver(int ell_normalized) const {
        return swapped ? 3 - ell_normalized : ell_normalized;
    }
};

inline Pipeline build_pipeline(const JointModel& model_in, const CodeConfig& cfg, int corner_user,
                               bool allow_situation_fallback = true) {
    cfg.validate();
    if (corner_user != 1 && corner_user != 2) throw ValidationError("corner must be 1 or 2");
    Pipeline p;
    p.cfg = cfg;
    p.corner_user = corner_user;
    InfoReport raw = information_quantities(model_in);
    Situation s0 = classify_situation(raw);
    p.swapped = s0.swapped;
    p.model = s0.swapped ? model_in.swapped() : model_in;
    p.report = s0.swapped ? information_quantities(p.model) : raw;
    p.situation = classify_situation(p.report);
    p.corner = p.swapped ? 3 - corner_user : corner_user;

    p.partition = partition_inner(v_layer_sets(p.model, cfg));
    if (allow_situation_fallback) {
        p.decision = classify_case_with_fallback(p.partition, p.situation.id,
                                                 &p.situation_substituted);
    } else {
        p.decision = classify_case(p.partition, p.situation.id);
    }
    p.plan = build_plan(p.partition, p.decision, p.corner, cfg.L, cfg.relax);
    ULayerSets for_k = u_layer_sets(p.model, p.corner, false, p.corner, cfg);
    ULayerSets for_kb = u_layer_sets(p.model, 3 - p.corner, true, p.corner, cfg);
    p.outer = build_outer_plan(for_k, for_kb, p.plan, cfg.relax);
    return p;
}

}  // namespace wtpolar
