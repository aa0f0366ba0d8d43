#pragma once

#include <sstream>
#include <string>

#include "json.hpp"
#include "wtpolar/channel.hpp"
#include "wtpolar/exactverify.hpp"
#include "wtpolar/pipeline.hpp"

namespace wtpolar {

inline void emit_set(std::ostringstream& os, const std::string& name, const IndexSet& s) {
    os << "set " << name;
    for (int32_t j : s) os << " " << j;
    os << "\n";
}

// Versioned text format listing every named set as sorted index lists.
inline std::string serialize_plan(const ChainingPlan& plan, const OuterPlan& outer) {
    std::ostringstream os;
    os << "wtpolar-plan v1\n";
    os << "n " << plan.n << " L " << plan.L << " corner " << plan.corner << " case "
       << to_char(plan.decision.id) << " situation " << static_cast<int>(plan.decision.situation)
       << "\n";
    const InnerPartition& c = plan.cells;
    emit_set(os, "G0", c.G0);
    emit_set(os, "G1", c.G1);
    emit_set(os, "G2", c.G2);
    emit_set(os, "G12", c.G12);
    emit_set(os, "C0", c.C0);
    emit_set(os, "C1", c.C1);
    emit_set(os, "C2", c.C2);
    emit_set(os, "C12", c.C12);
    emit_set(os, "R1", plan.R1);
    emit_set(os, "R1p", plan.R1p);
    emit_set(os, "R2", plan.R2);
    emit_set(os, "R2p", plan.R2p);
    emit_set(os, "R12", plan.R12);
    emit_set(os, "R12p", plan.R12p);
    emit_set(os, "RS", plan.RS);
    emit_set(os, "I", plan.I);
    emit_set(os, "RLam", plan.RLam);
    emit_set(os, "F0", outer.k.F0);
    emit_set(os, "Fk", outer.k.Fk);
    emit_set(os, "J0", outer.k.J0);
    emit_set(os, "Jk", outer.k.Jk);
    emit_set(os, "Dk", outer.k.Dk);
    emit_set(os, "Lk", outer.k.Lk);
    emit_set(os, "Q0", outer.kb.Q0);
    emit_set(os, "Qkb", outer.kb.Qkb);
    emit_set(os, "B0", outer.kb.B0);
    emit_set(os, "Bkb", outer.kb.Bkb);
    emit_set(os, "Odef", outer.kb.Odef);
    emit_set(os, "O", outer.kb.O);
    emit_set(os, "N", outer.kb.N);
    emit_set(os, "M", outer.kb.M);
    for (int s = 0; s < 6; ++s) {
        static const char* names[] = {"Psi", "PsiBar", "Theta", "ThetaBar", "Gamma", "GammaBar"};
        const auto& t = plan.parts[s];
        os << "parts " << names[s] << " " << t[0] << " " << t[1] << " " << t[2] << "\n";
    }
    return os.str();
}

inline std::string bits_string(const Bits& b) {
    std::string s;
    s.reserve(b.size());
    for (uint8_t v : b) s.push_back(v ? '1' : '0');
    return s;
}

// Introspection dump of one transmission (golden-file friendly).
inline nlohmann::json transmission_json(const ChainTransmission& tx) {
    nlohmann::json j;
    j["n"] = tx.n;
    j["L"] = tx.L;
    j["corner"] = tx.corner;
    auto blocks = [&](const std::vector<Bits>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Bits& b : v) arr.push_back(bits_string(b));
        return arr;
    };
    j["A"] = blocks(tx.A);
    j["T1"] = blocks(tx.T1);
    j["T2"] = blocks(tx.T2);
    j["V"] = blocks(tx.V);
    j["U1"] = blocks(tx.U1);
    j["U2"] = blocks(tx.U2);
    j["X"] = blocks(tx.X);
    nlohmann::json segs;
    for (const auto& [k, v] : tx.segments) segs[k] = bits_string(v);
    j["segments"] = segs;
    return j;
}

inline nlohmann::json rates_json(const EmpiricalRates& e) {
    nlohmann::json j;
    j["rs1"] = e.rates.rs[0];
    j["rs2"] = e.rates.rs[1];
    j["rw1"] = e.rates.rw[0];
    j["rw2"] = e.rates.rw[1];
    j["chain_key_bits"] = e.chain_key_bits;
    j["side_info_key_bits"] = e.side_info_key_bits;
    j["sc_random_bits"] = e.sc_random_bits;
    j["pad_bits"] = e.pad_bits;
    j["key_rate"] = e.key_rate();
    return j;
}

inline nlohmann::json region_json(const InfoReport& rep) {
    RegionReport b = region_bounds(rep);
    nlohmann::json j;
    j["info"] = {{"I_V_Z", rep.iVZ},      {"I_V_Y1", rep.iVY1},
                 {"I_V_Y2", rep.iVY2},    {"I_U1U2_V", rep.iU1U2_V},
                 {"H_V", rep.hV},         {"H_V_Z", rep.hV_Z},
                 {"H_V_Y1", rep.hV_Y1},   {"H_V_Y2", rep.hV_Y2}};
    j["s_only"] = {{"rs1", b.s_only_rs[0]}, {"rs2", b.s_only_rs[1]}, {"sum", b.s_only_sum}};
    for (int k = 1; k <= 2; ++k) {
        nlohmann::json sub;
        sub["rs_k"] = b.sub_rs_k[k - 1];
        sub["rs_kbar"] = b.sub_rs_kb[k - 1];
        sub["rsw_k"] = b.sub_rsw_k[k - 1];
        sub["rsw_kbar"] = b.sub_rsw_kb[k - 1];
        sub["successive_rs"] = b.successive_rs[k - 1];
        RateTuple c = corner_point(rep, k);
        sub["corner"] = {{"rs1", c.rs[0]}, {"rs2", c.rs[1]}, {"rw1", c.rw[0]}, {"rw2", c.rw[1]}};
        j["sub_region"][std::to_string(k)] = sub;
    }
    j["marton"] = {{"r1", b.marton_r[0]}, {"r2", b.marton_r[1]}, {"sum", b.marton_sum}};
    return j;
}

}  // namespace wtpolar
