#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wtpolar/keys.hpp"
#include "wtpolar/outer_plan.hpp"
#include "wtpolar/polar.hpp"

namespace wtpolar {

enum class Lyr : uint8_t { A = 0, T1 = 1, T2 = 2 };

inline const char* to_string(Lyr l) {
    switch (l) {
        case Lyr::A: return "A";
        case Lyr::T1: return "T1";
        case Lyr::T2: return "T2";
    }
    return "?";
}

// One side of a repetition equation: a run of positions of (layer, block),
// optionally masked by a slice of a pre-shared key.
struct Term {
    Lyr layer;
    int block = 0;  // 1-based
    IndexSet pos;
    KeyId key = KeyId::None;
    int key_off = 0;
};

// content(target) = XOR over sources (each source read at its positions and
// unmasked/masked by its key slice). All segment contents are in ascending
// index order.
struct Equation {
    Term target;
    std::vector<Term> sources;
    bool needs_sc_output = false;  // source area is written by SC, not by content rules
    std::string name;
};

// Uniform message material for one transmission.
struct MessageSet {
    std::vector<Bits> w_v;     // common-layer private part (receiver = corner)
    std::vector<Bits> s_v;     // common-layer confidential part
    std::vector<Bits> w_u[2];  // per receiver (index ell-1)
    std::vector<Bits> s_u[2];

    bool operator==(const MessageSet& o) const {
        for (int e = 0; e < 2; ++e)
            if (w_u[e] != o.w_u[e] || s_u[e] != o.s_u[e]) return false;
        return w_v == o.w_v && s_v == o.s_v;
    }
};

struct ChainTransmission {
    int n = 0, L = 0, corner = 1;
    std::vector<Bits> A, T1, T2;          // transform domain, one per block
    std::vector<Bits> V, U1, U2, X;       // symbol domain
    Bits upsV[2], upsU[2];                // boundary side info per receiver
    std::vector<Bits> phiV[2], phiU[2];   // per-block side info per receiver
    Bits bundleV_enc[2], bundleU_enc[2];  // (ups, phi_1..L) xor key
    std::vector<Bits> pad;                // boundary padding content per block
    std::map<std::string, Bits> segments; // introspection copies

    const std::vector<Bits>& layer(Lyr l) const {
        return l == Lyr::A ? A : (l == Lyr::T1 ? T1 : T2);
    }
    std::vector<Bits>& layer(Lyr l) { return l == Lyr::A ? A : (l == Lyr::T1 ? T1 : T2); }
};

// Static layout shared by encoder and decoders: free-content areas, the
// repetition equations, and the SC specification per layer.
struct CodecLayout {
    int n = 0, L = 0, corner = 1;
    std::vector<Equation> equations;

    // per-layer SC information
    IndexSet sc_area[3];   // complement of the uniform area
    IndexSet sc_det[3];    // deterministically filled part (low set)
    IndexSet odef;         // companion-layer SC output needed by its receiver
    Lyr kb_layer = Lyr::T2;

    // free content areas (messages and pads) per layer per block (1-based)
    struct FreeArea {
        Lyr layer;
        int block;
        IndexSet pos;
        std::string what;  // "w_v", "s_v", "w_u1", "s_u1", "w_u2", "s_u2", "pad"
    };
    std::vector<FreeArea> free_areas;
};

namespace detail {

inline void add_eq(std::vector<Equation>& eqs, Equation e) {
    if (e.target.pos.empty()) return;
    for (const Term& t : e.sources)
        if (t.pos.size() != e.target.pos.size() && !t.pos.empty())
            throw PlanMismatch("equation " + e.name + ": term length mismatch");
    std::vector<Term> keep;
    for (Term& t : e.sources)
        if (!t.pos.empty()) keep.push_back(std::move(t));
    e.sources = std::move(keep);
    if (e.sources.empty()) return;  // boundary: nothing feeds this area
    eqs.push_back(std::move(e));
}

}  // namespace detail

inline CodecLayout build_layout(const ChainingPlan& plan, const OuterPlan& outer) {
    CodecLayout lay;
    lay.n = plan.n;
    lay.L = plan.L;
    lay.corner = plan.corner;
    const int L = plan.L;
    const int k = plan.corner;
    const Lyr tk = k == 1 ? Lyr::T1 : Lyr::T2;
    const Lyr tkb = k == 1 ? Lyr::T2 : Lyr::T1;
    lay.kb_layer = tkb;
    const InnerPartition& c = plan.cells;

    lay.sc_area[0] = c.hV.complement(plan.n);
    lay.sc_det[0] = c.lV;
    lay.sc_area[static_cast<int>(tk)] = outer.k.sets.high_ctx.complement(plan.n);
    lay.sc_det[static_cast<int>(tk)] = outer.k.sets.low_ctx;
    lay.sc_area[static_cast<int>(tkb)] = outer.kb.sets.high_ctx.complement(plan.n);
    lay.sc_det[static_cast<int>(tkb)] = outer.kb.sets.low_ctx;
    lay.odef = outer.kb.Odef;

    // --- free content ---
    for (int i = 1; i <= L; ++i) {
        lay.free_areas.push_back({Lyr::A, i, c.C, "w_v"});
        lay.free_areas.push_back({Lyr::A, i, plan.msg_area(i), "s_v"});
        if (L > 1 && i == L && !plan.pad_last.empty())
            lay.free_areas.push_back({Lyr::A, i, plan.pad_last, "pad"});
        lay.free_areas.push_back({tk, i, outer.k.w_area, std::string("w_u") + char('0' + k)});
        lay.free_areas.push_back({tk, i, outer.k_msg_area(i, L), std::string("s_u") + char('0' + k)});
        lay.free_areas.push_back({tkb, i, outer.kb.w_area, std::string("w_u") + char('0' + (3 - k))});
        lay.free_areas.push_back({tkb, i, outer.kb_msg_area(i, L), std::string("s_u") + char('0' + (3 - k))});
    }
    if (L == 1) return lay;  // single block: no cross-block repetitions

    auto slice = [&](const IndexSet& cell, const PartTriple& ps, int part) {
        int off = 0;
        for (int p = 0; p < part; ++p) off += ps[p];
        return cell.sub_range(off, ps[part]);
    };
    auto part_off = [&](const PartTriple& ps, int part) {
        int off = 0;
        for (int p = 0; p < part; ++p) off += ps[p];
        return off;
    };

    const PartTriple& psi = plan.part(k == 1 ? SeqId::Psi : SeqId::PsiBar);
    const PartTriple& gammaBack = plan.part(k == 1 ? SeqId::Gamma : SeqId::GammaBar);
    const PartTriple& theta = plan.part(k == 1 ? SeqId::ThetaBar : SeqId::Theta);
    const PartTriple& gammaFwd = plan.part(k == 1 ? SeqId::GammaBar : SeqId::Gamma);
    KeyId keyBackC2 = k == 2 ? KeyId::PsiV : KeyId::None;
    KeyId keyBackC12 = k == 2 ? KeyId::GammaV : KeyId::None;
    KeyId keyFwdC1 = k == 1 ? KeyId::ThetaV : KeyId::None;
    KeyId keyFwdC12 = k == 1 ? KeyId::GammaV : KeyId::None;

    auto& eqs = lay.equations;
    for (int i = 1; i <= L; ++i) {
        // common layer
        if (i >= 2) {
            detail::add_eq(eqs, {{Lyr::A, i, plan.RLam}, {{Lyr::A, i - 1, plan.RLam}}, false, "Lambda"});
            detail::add_eq(eqs, {{Lyr::A, i, plan.RS},
                                 {{Lyr::A, i - 1, plan.IG2.take_front(plan.RS.size())}},
                                 false,
                                 "Pi2->RS"});
            detail::add_eq(eqs, {{Lyr::A, i, plan.R2},
                                 {{Lyr::A, i - 1, slice(c.C2, psi, 0), keyBackC2, part_off(psi, 0)}},
                                 false,
                                 "Psi1->R2"});
            detail::add_eq(eqs, {{Lyr::A, i, plan.R2p},
                                 {{Lyr::A, i - 1, slice(c.C12, gammaBack, 1), keyBackC12,
                                   part_off(gammaBack, 1)}},
                                 false,
                                 "Gamma2->R2'"});
        }
        if (i <= L - 1) {
            detail::add_eq(eqs, {{Lyr::A, i, plan.R1},
                                 {{Lyr::A, i + 1, slice(c.C1, theta, 0), keyFwdC1, part_off(theta, 0)}},
                                 false,
                                 "Theta1->R1"});
            detail::add_eq(eqs, {{Lyr::A, i, plan.R1p},
                                 {{Lyr::A, i + 1, slice(c.C12, gammaFwd, 1), keyFwdC12,
                                   part_off(gammaFwd, 1)}},
                                 false,
                                 "Gamma2fwd->R1'"});
        }
        {
            Equation e{{Lyr::A, i, plan.R12}, {}, false, "Gamma1xGamma1"};
            if (i >= 2)
                e.sources.push_back({Lyr::A, i - 1, slice(c.C12, gammaBack, 0), keyBackC12, 0});
            if (i <= L - 1)
                e.sources.push_back({Lyr::A, i + 1, slice(c.C12, gammaFwd, 0), keyFwdC12, 0});
            detail::add_eq(eqs, std::move(e));
        }
        {
            Equation e{{Lyr::A, i, plan.R12p}, {}, false, "Psi2xTheta2"};
            if (i >= 2)
                e.sources.push_back({Lyr::A, i - 1, slice(c.C2, psi, 1), keyBackC2, part_off(psi, 1)});
            if (i <= L - 1)
                e.sources.push_back({Lyr::A, i + 1, slice(c.C1, theta, 1), keyFwdC1, part_off(theta, 1)});
            detail::add_eq(eqs, std::move(e));
        }

        // corner-side outer layer
        if (i >= 2)
            detail::add_eq(eqs, {{tk, i, outer.k.Fk}, {{tk, i - 1, outer.k.Fk}}, false, "LambdaU_k"});
        if (k == 1) {
            if (i <= L - 1) {
                detail::add_eq(eqs, {{tk, i, outer.k.Dk},
                                     {{tk, i + 1, outer.k.Jk, KeyId::ThetaU, 0}},
                                     false,
                                     "ThetaU->D"});
                IndexSet la = outer.k.Lk.take_front(theta[2]);
                IndexSet lb = outer.k.Lk.sub_range(theta[2], gammaFwd[2]);
                detail::add_eq(eqs, {{tk, i, la},
                                     {{Lyr::A, i + 1, slice(c.C1, theta, 2), keyFwdC1, part_off(theta, 2)}},
                                     false,
                                     "Delta1a->L_k"});
                detail::add_eq(eqs, {{tk, i, lb},
                                     {{Lyr::A, i + 1, slice(c.C12, gammaFwd, 2), keyFwdC12,
                                       part_off(gammaFwd, 2)}},
                                     false,
                                     "Delta1b->L_k"});
            }
        } else {
            if (i >= 2) {
                detail::add_eq(eqs, {{tk, i, outer.k.Dk},
                                     {{tk, i - 1, outer.k.Jk, KeyId::PsiU, 0}},
                                     false,
                                     "PsiU->D"});
                IndexSet la = outer.k.Lk.take_front(psi[2]);
                IndexSet lb = outer.k.Lk.sub_range(psi[2], gammaBack[2]);
                detail::add_eq(eqs, {{tk, i, la},
                                     {{Lyr::A, i - 1, slice(c.C2, psi, 2), keyBackC2, part_off(psi, 2)}},
                                     false,
                                     "Delta2a->L_k"});
                detail::add_eq(eqs, {{tk, i, lb},
                                     {{Lyr::A, i - 1, slice(c.C12, gammaBack, 2), keyBackC12,
                                       part_off(gammaBack, 2)}},
                                     false,
                                     "Delta2b->L_k"});
            }
        }

        // companion outer layer
        if (i >= 2)
            detail::add_eq(eqs, {{tkb, i, outer.kb.Qkb}, {{tkb, i - 1, outer.kb.Qkb}}, false, "LambdaU_kb"});
        if (k == 1) {
            // companion feeds receiver 2, chained toward later blocks
            if (i >= 2) {
                detail::add_eq(eqs, {{tkb, i, outer.kb.N}, {{tkb, i - 1, outer.kb.Bkb}}, false, "PsiU2->N"});
                IndexSet ma = outer.kb.M.take_front(psi[2]);
                IndexSet mb = outer.kb.M.sub_range(psi[2], gammaBack[2]);
                detail::add_eq(eqs, {{tkb, i, ma},
                                     {{Lyr::A, i - 1, slice(c.C2, psi, 2), keyBackC2, part_off(psi, 2)}},
                                     false,
                                     "Delta2a->M"});
                detail::add_eq(eqs, {{tkb, i, mb},
                                     {{Lyr::A, i - 1, slice(c.C12, gammaBack, 2), keyBackC12,
                                       part_off(gammaBack, 2)}},
                                     false,
                                     "Delta2b->M"});
                detail::add_eq(eqs, {{tkb, i, outer.kb.O},
                                     {{tkb, i - 1, outer.kb.Odef, KeyId::O, 0}},
                                     true,
                                     "Obar"});
            }
        } else {
            // companion feeds receiver 1, chained toward earlier blocks
            if (i <= L - 1) {
                detail::add_eq(eqs, {{tkb, i, outer.kb.N}, {{tkb, i + 1, outer.kb.Bkb}}, false, "ThetaU1->N"});
                IndexSet ma = outer.kb.M.take_front(plan.IG1.size());
                IndexSet mb = outer.kb.M.sub_range(plan.IG1.size(), theta[2]);
                IndexSet mc = outer.kb.M.sub_range(plan.IG1.size() + theta[2], gammaFwd[2]);
                detail::add_eq(eqs, {{tkb, i, ma}, {{Lyr::A, i + 1, plan.IG1}}, false, "Pi1->M"});
                detail::add_eq(eqs, {{tkb, i, mb},
                                     {{Lyr::A, i + 1, slice(c.C1, theta, 2), keyFwdC1, part_off(theta, 2)}},
                                     false,
                                     "Delta1a->M"});
                detail::add_eq(eqs, {{tkb, i, mc},
                                     {{Lyr::A, i + 1, slice(c.C12, gammaFwd, 2), keyFwdC12,
                                       part_off(gammaFwd, 2)}},
                                     false,
                                     "Delta1b->M"});
                detail::add_eq(eqs, {{tkb, i, outer.kb.O},
                                     {{tkb, i + 1, outer.kb.Odef, KeyId::O, 0}},
                                     true,
                                     "Obar"});
            }
        }
    }
    return lay;
}

// Verifies that free areas, equation targets, and the SC area tile every
// block of every layer exactly once.
inline void audit_layout(const CodecLayout& lay) {
    const int n = lay.n;
    std::vector<std::vector<int>> cover(3 * static_cast<size_t>(lay.L),
                                        std::vector<int>(static_cast<size_t>(n), 0));
    auto mark = [&](Lyr l, int block, const IndexSet& pos, const std::string& what) {
        auto& row = cover[static_cast<size_t>(static_cast<int>(l) * lay.L + block - 1)];
        for (int32_t j : pos) {
            if (row[static_cast<size_t>(j)]++)
                throw PlanMismatch("position written twice: layer " + std::string(to_string(l)) +
                                   " block " + std::to_string(block) + " index " +
                                   std::to_string(j) + " (" + what + ")");
        }
    };
    for (const auto& f : lay.free_areas) mark(f.layer, f.block, f.pos, f.what);
    for (const auto& e : lay.equations) mark(e.target.layer, e.target.block, e.target.pos, e.name);
    for (int l = 0; l < 3; ++l)
        for (int b = 1; b <= lay.L; ++b) mark(static_cast<Lyr>(l), b, lay.sc_area[l], "sc");
    for (auto& row : cover)
        for (int j = 0; j < n; ++j)
            if (!row[static_cast<size_t>(j)]) throw PlanMismatch("position never written: index " + std::to_string(j));
}

inline MessageSet draw_messages(const ChainingPlan& plan, const OuterPlan& outer, RandomSource& src) {
    MessageSet ms;
    const int L = plan.L, k = plan.corner;
    for (int i = 1; i <= L; ++i) {
        ms.w_v.push_back(src.uniform_bits(static_cast<size_t>(plan.cells.C.size())));
        ms.s_v.push_back(src.uniform_bits(static_cast<size_t>(plan.msg_area(i).size())));
    }
    for (int i = 1; i <= L; ++i) {
        ms.w_u[k - 1].push_back(src.uniform_bits(static_cast<size_t>(outer.k.w_area.size())));
        ms.s_u[k - 1].push_back(src.uniform_bits(static_cast<size_t>(outer.k_msg_area(i, L).size())));
    }
    for (int i = 1; i <= L; ++i) {
        ms.w_u[2 - k].push_back(src.uniform_bits(static_cast<size_t>(outer.kb.w_area.size())));
        ms.s_u[2 - k].push_back(src.uniform_bits(static_cast<size_t>(outer.kb_msg_area(i, L).size())));
    }
    return ms;
}

namespace detail {

inline Bits keyed(const Bits& seg, const KeyRing& kr, KeyId key, int off) {
    if (key == KeyId::None) return seg;
    const Bits& kb = kr.key(key);
    if (kb.size() < static_cast<size_t>(off) + seg.size())
        throw PlanMismatch("key material missing or too short for this segment");
    Bits out = seg;
    for (size_t t = 0; t < out.size(); ++t) out[t] ^= kb[static_cast<size_t>(off) + t];
    return out;
}

}  // namespace detail

// Algorithmic encoder for one transmission of L chained blocks.
inline ChainTransmission encode_chain(const MessageSet& ms, const ChainingPlan& plan,
                                      const OuterPlan& outer, const KeyRing& kr,
                                      const JointModel& model, const CodeConfig& cfg,
                                      RandomSource& src) {
    const int n = plan.n, L = plan.L, k = plan.corner;
    CodecLayout lay = build_layout(plan, outer);
    audit_layout(lay);

    ChainTransmission tx;
    tx.n = n;
    tx.L = L;
    tx.corner = k;
    tx.A.assign(static_cast<size_t>(L), Bits(static_cast<size_t>(n), 0));
    tx.T1 = tx.T2 = tx.A;
    tx.V = tx.U1 = tx.U2 = tx.X = tx.A;
    tx.pad.assign(static_cast<size_t>(L), Bits());

    // message sizes must match the plan ledger
    auto expect = [&](size_t got, size_t want, const std::string& what) {
        if (got != want)
            throw PlanMismatch("message size mismatch for " + what + ": " + std::to_string(got) +
                               " vs " + std::to_string(want));
    };
    expect(ms.w_v.size(), static_cast<size_t>(L), "w_v blocks");
    for (int i = 1; i <= L; ++i) {
        expect(ms.w_v[static_cast<size_t>(i - 1)].size(), static_cast<size_t>(plan.cells.C.size()), "w_v");
        expect(ms.s_v[static_cast<size_t>(i - 1)].size(), static_cast<size_t>(plan.msg_area(i).size()), "s_v");
        expect(ms.w_u[k - 1][static_cast<size_t>(i - 1)].size(), static_cast<size_t>(outer.k.w_area.size()), "w_u(k)");
        expect(ms.s_u[k - 1][static_cast<size_t>(i - 1)].size(),
               static_cast<size_t>(outer.k_msg_area(i, L).size()), "s_u(k)");
        expect(ms.w_u[2 - k][static_cast<size_t>(i - 1)].size(), static_cast<size_t>(outer.kb.w_area.size()),
               "w_u(kb)");
        expect(ms.s_u[2 - k][static_cast<size_t>(i - 1)].size(),
               static_cast<size_t>(outer.kb_msg_area(i, L).size()), "s_u(kb)");
    }

    // 1. free content
    for (const auto& f : lay.free_areas) {
        const Bits* content = nullptr;
        Bits padbits;
        int i = f.block;
        if (f.what == "w_v") content = &ms.w_v[static_cast<size_t>(i - 1)];
        else if (f.what == "s_v") content = &ms.s_v[static_cast<size_t>(i - 1)];
        else if (f.what == "w_u1") content = &ms.w_u[0][static_cast<size_t>(i - 1)];
        else if (f.what == "s_u1") content = &ms.s_u[0][static_cast<size_t>(i - 1)];
        else if (f.what == "w_u2") content = &ms.w_u[1][static_cast<size_t>(i - 1)];
        else if (f.what == "s_u2") content = &ms.s_u[1][static_cast<size_t>(i - 1)];
        else {
            padbits = src.uniform_bits(static_cast<size_t>(f.pos.size()));
            tx.pad[static_cast<size_t>(i - 1)] = padbits;
            content = &tx.pad[static_cast<size_t>(i - 1)];
        }
        write_bits(tx.layer(f.layer)[static_cast<size_t>(i - 1)], f.pos, *content);
    }

    // 2. repetition equations that do not read SC output. Inner-layer and
    //    corner-layer chains only ever read free content or earlier links of
    //    the same chain, so two sweeps in block order settle them.
    auto eval_plain = [&](const Equation& e) {
        Bits acc(static_cast<size_t>(e.target.pos.size()), 0);
        for (const Term& t : e.sources) {
            Bits src_bits = read_bits(tx.layer(t.layer)[static_cast<size_t>(t.block - 1)], t.pos);
            acc = xor_bits(acc, detail::keyed(src_bits, kr, t.key, t.key_off));
        }
        write_bits(tx.layer(e.target.layer)[static_cast<size_t>(e.target.block - 1)], e.target.pos, acc);
    };
    for (int sweep = 0; sweep < 2; ++sweep)
        for (const auto& e : lay.equations)
            if (!e.needs_sc_output) eval_plain(e);

    // 3. SC fills. The common layer first, then the corner layer, then the
    //    companion layer in its chaining direction (its O repetition reads SC
    //    output of the adjacent block).
    auto modes_for = [&](Lyr l) {
        std::vector<FillMode> modes(static_cast<size_t>(n), FillMode::Hold);
        for (int32_t j : lay.sc_area[static_cast<int>(l)]) modes[static_cast<size_t>(j)] = FillMode::Random;
        for (int32_t j : lay.sc_det[static_cast<int>(l)]) modes[static_cast<size_t>(j)] = FillMode::Deterministic;
        return modes;
    };

    {
        ScEngine engA(model.source(Var::V, {}), n);
        auto modes = modes_for(Lyr::A);
        std::vector<int> sigma(static_cast<size_t>(n), 0);
        for (int i = 0; i < L; ++i) {
            Bits sym;
            tx.A[static_cast<size_t>(i)] = sc_fill(engA, modes, tx.A[static_cast<size_t>(i)], sigma, src, &sym);
            tx.V[static_cast<size_t>(i)] = sym;
        }
    }
    {
        Var uk = k == 1 ? Var::U1 : Var::U2;
        ScEngine engK(model.source(uk, {Var::V}), n);
        Lyr tkl = k == 1 ? Lyr::T1 : Lyr::T2;
        auto modes = modes_for(tkl);
        for (int i = 0; i < L; ++i) {
            std::vector<int> sigma(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) sigma[static_cast<size_t>(j)] = tx.V[static_cast<size_t>(i)][static_cast<size_t>(j)];
            Bits sym;
            auto& blk = tx.layer(tkl)[static_cast<size_t>(i)];
            blk = sc_fill(engK, modes, blk, sigma, src, &sym);
            (k == 1 ? tx.U1 : tx.U2)[static_cast<size_t>(i)] = sym;
        }
    }
    {
        Var ukb = k == 1 ? Var::U2 : Var::U1;
        Var uk = k == 1 ? Var::U1 : Var::U2;
        ScEngine engB(model.source(ukb, {Var::V, uk}), n);
        Lyr tbl = lay.kb_layer;
        auto modes = modes_for(tbl);
        auto fill_block = [&](int i) {
            // O repetition first: reads the adjacent block's SC output
            for (const auto& e : lay.equations)
                if (e.needs_sc_output && e.target.block == i + 1) eval_plain(e);
            std::vector<int> sigma(static_cast<size_t>(n));
            const Bits& vs = tx.V[static_cast<size_t>(i)];
            const Bits& us = (k == 1 ? tx.U1 : tx.U2)[static_cast<size_t>(i)];
            for (int j = 0; j < n; ++j)
                sigma[static_cast<size_t>(j)] = vs[static_cast<size_t>(j)] * 2 + us[static_cast<size_t>(j)];
            Bits sym;
            auto& blk = tx.layer(tbl)[static_cast<size_t>(i)];
            blk = sc_fill(engB, modes, blk, sigma, src, &sym);
            (k == 1 ? tx.U2 : tx.U1)[static_cast<size_t>(i)] = sym;
        };
        if (k == 1)
            for (int i = 0; i < L; ++i) fill_block(i);
        else
            for (int i = L - 1; i >= 0; --i) fill_block(i);
    }

    // 4. symbol-domain channel input
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < n; ++j)
            tx.X[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                model.f(tx.V[static_cast<size_t>(i)][static_cast<size_t>(j)],
                        tx.U1[static_cast<size_t>(i)][static_cast<size_t>(j)],
                        tx.U2[static_cast<size_t>(i)][static_cast<size_t>(j)]);

    // 5. side information and its encryption
    for (int ell = 1; ell <= 2; ++ell) {
        IndexSet upsA = ups_v_area(plan.cells, ell);
        IndexSet phiA = phi_v_area(plan.cells, ell);
        int boundary = ell == 1 ? 0 : L - 1;
        tx.upsV[ell - 1] = read_bits(tx.A[static_cast<size_t>(boundary)], upsA);
        for (int i = 0; i < L; ++i)
            tx.phiV[ell - 1].push_back(read_bits(tx.A[static_cast<size_t>(i)], phiA));
        const ULayerSets& us = layer_sets_for_receiver(outer, ell);
        Lyr tl = ell == 1 ? Lyr::T1 : Lyr::T2;
        tx.upsU[ell - 1] = read_bits(tx.layer(tl)[static_cast<size_t>(boundary)], ups_u_area(us, n));
        for (int i = 0; i < L; ++i)
            tx.phiU[ell - 1].push_back(read_bits(tx.layer(tl)[static_cast<size_t>(i)], phi_u_area(us, n)));
        Bits bundle = tx.upsV[ell - 1];
        for (const Bits& b : tx.phiV[ell - 1]) bundle = concat_bits(bundle, b);
        tx.bundleV_enc[ell - 1] = xor_bits(bundle, kr.upsPhiV[ell - 1]);
        bundle = tx.upsU[ell - 1];
        for (const Bits& b : tx.phiU[ell - 1]) bundle = concat_bits(bundle, b);
        tx.bundleU_enc[ell - 1] = xor_bits(bundle, kr.upsPhiU[ell - 1]);
    }

    // introspection segments
    for (int i = 1; i <= L; ++i) {
        auto& Ab = tx.A[static_cast<size_t>(i - 1)];
        tx.segments["Psi@" + std::to_string(i)] = read_bits(Ab, plan.cells.C2);
        tx.segments["Theta@" + std::to_string(i)] = read_bits(Ab, plan.cells.C1);
        tx.segments["Gamma@" + std::to_string(i)] = read_bits(Ab, plan.cells.C12);
        tx.segments["Lambda@" + std::to_string(i)] = read_bits(Ab, plan.RLam);
        tx.segments["Pi1@" + std::to_string(i)] = read_bits(Ab, plan.IG1);
        tx.segments["Pi2@" + std::to_string(i)] = read_bits(Ab, plan.IG2);
        Lyr tbl = lay.kb_layer;
        tx.segments["Odef@" + std::to_string(i)] =
            read_bits(tx.layer(tbl)[static_cast<size_t>(i - 1)], outer.kb.Odef);
    }
    (void)cfg;
    return tx;
}

// What one legitimate receiver sees: its channel output blocks plus the
// encrypted side information and its pre-shared keys.
struct ReceiverView {
    int receiver = 1;
    std::vector<std::vector<int>> y_blocks;  // per block, per symbol
    Bits bundleV_enc, bundleU_enc;
    KeyRing keys;  // only this receiver's keys are populated
};

inline KeyRing keys_for_receiver(const KeyRing& kr, int ell) {
    KeyRing out;
    out.corner = kr.corner;
    out.gammaV = kr.gammaV;
    if (kr.corner == 1) {
        out.thetaV = kr.thetaV;
        if (ell == 1) out.thetaU = kr.thetaU;
        if (ell == 2) out.oU = kr.oU;
    } else {
        out.psiV = kr.psiV;
        if (ell == 2) out.psiU = kr.psiU;
        if (ell == 1) out.oU = kr.oU;
    }
    out.upsPhiV[ell - 1] = kr.upsPhiV[ell - 1];
    out.upsPhiU[ell - 1] = kr.upsPhiU[ell - 1];
    return out;
}

inline ReceiverView make_receiver_view(const ChainTransmission& tx, const KeyRing& kr, int ell,
                                       const std::vector<std::vector<int>>& y_blocks) {
    ReceiverView v;
    v.receiver = ell;
    v.y_blocks = y_blocks;
    v.bundleV_enc = tx.bundleV_enc[ell - 1];
    v.bundleU_enc = tx.bundleU_enc[ell - 1];
    v.keys = keys_for_receiver(kr, ell);
    return v;
}

struct DecodeResult {
    MessageSet messages;          // only this receiver's components populated
    std::vector<Bits> A, T_own;   // decoded transform-domain blocks
    bool oracle_consistent = true;
};

namespace detail {

struct Known {
    Bits mask;  // 0/1 per position
    Bits val;
};

class Solver {
public:
    Solver(int n, int L) : n_(n), L_(L) {
        for (auto& layer : known_)
            layer.assign(static_cast<size_t>(L), Known{Bits(static_cast<size_t>(n), 0), Bits(static_cast<size_t>(n), 0)});
    }

    Known& at(Lyr l, int block) { return known_[static_cast<int>(l)][static_cast<size_t>(block - 1)]; }

    bool term_known(const Term& t) const {
        const Known& k = known_[static_cast<int>(t.layer)][static_cast<size_t>(t.block - 1)];
        for (int32_t j : t.pos)
            if (!k.mask[static_cast<size_t>(j)]) return false;
        return true;
    }

    Bits read_term(const Term& t, const KeyRing& kr) const {
        const Known& k = known_[static_cast<int>(t.layer)][static_cast<size_t>(t.block - 1)];
        Bits out = read_bits(k.val, t.pos);
        return keyed(out, kr, t.key, t.key_off);
    }

    // Assign values (idempotent; conflicting assignment means a logic error).
    void assign(const Term& t, const Bits& plain_content, const KeyRing& kr) {
        Bits raw = keyed(plain_content, kr, t.key, t.key_off);  // unmask back to stored bits
        Known& k = at(t.layer, t.block);
        for (int i = 0; i < t.pos.size(); ++i) {
            size_t j = static_cast<size_t>(t.pos[i]);
            if (k.mask[j]) {
                if (k.val[j] != raw[static_cast<size_t>(i)])
                    throw PlanMismatch("solver derived conflicting values");
            } else {
                k.mask[j] = 1;
                k.val[j] = raw[static_cast<size_t>(i)];
                ++assigned_;
            }
        }
    }

    // Propagate every solvable equation to a fixpoint.
    void fixpoint(const std::vector<Equation>& eqs, const KeyRing& kr) {
        bool progress = true;
        while (progress) {
            progress = false;
            size_t before = assigned_;
            for (const Equation& e : eqs) {
                int unknown = -1;
                bool tgt_known = term_known(e.target);
                int missing = tgt_known ? 0 : 1;
                for (size_t s = 0; s < e.sources.size(); ++s)
                    if (!term_known(e.sources[s])) {
                        ++missing;
                        unknown = static_cast<int>(s);
                    }
                if (missing == 0) continue;
                if (missing > 1) continue;
                if (!tgt_known && e.sources.empty()) continue;
                if (!tgt_known) {
                    // evaluate forward
                    Bits acc(static_cast<size_t>(e.target.pos.size()), 0);
                    for (const Term& t : e.sources) acc = xor_bits(acc, read_term(t, kr));
                    assign(e.target, keyed(acc, kr, e.target.key, e.target.key_off), kr);
                    // target terms carry no key in this layout; keyed() above is a no-op
                    progress = true;
                } else {
                    // solve for the single unknown source
                    Bits acc = read_term(e.target, kr);
                    for (size_t s = 0; s < e.sources.size(); ++s)
                        if (static_cast<int>(s) != unknown) acc = xor_bits(acc, read_term(e.sources[s], kr));
                    assign(e.sources[static_cast<size_t>(unknown)], acc, kr);
                    progress = true;
                }
            }
            if (assigned_ == before) progress = false;
        }
    }

private:
    int n_, L_;
    std::array<std::vector<Known>, 3> known_;
    size_t assigned_ = 0;
};

}  // namespace detail

// Joint decoder for one receiver: blocks are decoded in this receiver's
// chaining direction; after each block the repetition equations are
// propagated to a fixpoint, which assembles the needed positions of the next
// block. With `oracle` set, SC decisions are replaced by the true blocks and
// every derived value is checked against them (exact bookkeeping test).
inline DecodeResult decode_receiver(const ReceiverView& view, const ChainingPlan& plan,
                                    const OuterPlan& outer, const JointModel& model,
                                    const ChainTransmission* oracle = nullptr) {
    const int n = plan.n, L = plan.L, ell = view.receiver;
    CodecLayout lay = build_layout(plan, outer);
    const Lyr tl = ell == 1 ? Lyr::T1 : Lyr::T2;
    const bool own_is_corner = ell == plan.corner;
    const ULayerSets& us = own_is_corner ? outer.k.sets : outer.kb.sets;

    // decrypt side information
    IndexSet upsA = ups_v_area(plan.cells, ell);
    IndexSet phiA = phi_v_area(plan.cells, ell);
    IndexSet upsU = ups_u_area(us, n);
    IndexSet phiU = phi_u_area(us, n);
    Bits bv = xor_bits(view.bundleV_enc, view.keys.upsPhiV[ell - 1]);
    Bits bu = xor_bits(view.bundleU_enc, view.keys.upsPhiU[ell - 1]);

    detail::Solver solver(n, L);
    int boundary = ell == 1 ? 1 : L;
    solver.assign({Lyr::A, boundary, upsA}, slice_bits(bv, 0, upsA.size()), view.keys);
    for (int i = 0; i < L; ++i)
        solver.assign({Lyr::A, i + 1, phiA},
                      slice_bits(bv, upsA.size() + i * phiA.size(), phiA.size()), view.keys);
    solver.assign({tl, boundary, upsU}, slice_bits(bu, 0, upsU.size()), view.keys);
    for (int i = 0; i < L; ++i)
        solver.assign({tl, i + 1, phiU},
                      slice_bits(bu, upsU.size() + i * phiU.size(), phiU.size()), view.keys);

    // receivers only see their own layer's equations plus the common layer's
    std::vector<Equation> eqs;
    for (const Equation& e : lay.equations) {
        auto relevant = [&](Lyr l) { return l == Lyr::A || l == tl; };
        bool ok = relevant(e.target.layer);
        for (const Term& t : e.sources) ok = ok && relevant(t.layer);
        if (ok) eqs.push_back(e);
    }

    IndexSet neededA = needed_v_area(plan.cells, ell);
    IndexSet neededT = needed_u_area(us, n);

    ScEngine engA(model.source(Var::V, {ell == 1 ? Var::Y1 : Var::Y2}), n);
    ScEngine engT(model.source(ell == 1 ? Var::U1 : Var::U2, {Var::V, ell == 1 ? Var::Y1 : Var::Y2}), n);

    DecodeResult res;
    res.A.assign(static_cast<size_t>(L), Bits());
    res.T_own.assign(static_cast<size_t>(L), Bits());

    auto sc_block = [&](Lyr layer, int block, const ScEngine& eng, const std::vector<int>& sigma,
                        const IndexSet& needed) {
        detail::Known& k = solver.at(layer, block);
        for (int32_t j : needed)
            if (!k.mask[static_cast<size_t>(j)])
                throw PlanMismatch("decoder is missing needed position " + std::to_string(j) +
                                   " of layer " + to_string(layer) + " block " + std::to_string(block));
        Bits decoded;
        if (oracle) {
            const Bits& truth = oracle->layer(layer)[static_cast<size_t>(block - 1)];
            for (int j = 0; j < n; ++j)
                if (k.mask[static_cast<size_t>(j)] && k.val[static_cast<size_t>(j)] != truth[static_cast<size_t>(j)])
                    throw PlanMismatch("oracle mismatch at layer " + std::string(to_string(layer)) +
                                       " block " + std::to_string(block) + " index " + std::to_string(j));
            decoded = truth;
        } else {
            bool all_known = true;
            for (int j = 0; j < n && all_known; ++j) all_known = k.mask[static_cast<size_t>(j)] != 0;
            if (all_known)
                decoded = k.val;
            else
                decoded = sc_decode(eng, k.mask, k.val, sigma, /*lenient=*/true);
        }
        k.mask.assign(static_cast<size_t>(n), 1);
        k.val = decoded;
        return decoded;
    };

    auto decode_block = [&](int block) {
        solver.fixpoint(eqs, view.keys);
        std::vector<int> sigmaA(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) sigmaA[static_cast<size_t>(j)] = view.y_blocks[static_cast<size_t>(block - 1)][static_cast<size_t>(j)];
        Bits a = sc_block(Lyr::A, block, engA, sigmaA, neededA);
        res.A[static_cast<size_t>(block - 1)] = a;
        Bits v = polar_transform(a);
        solver.fixpoint(eqs, view.keys);
        std::vector<int> sigmaT(static_cast<size_t>(n));
        int ycard = ell == 1 ? model.ny1 : model.ny2;
        for (int j = 0; j < n; ++j)
            sigmaT[static_cast<size_t>(j)] =
                v[static_cast<size_t>(j)] * ycard + view.y_blocks[static_cast<size_t>(block - 1)][static_cast<size_t>(j)];
        Bits t = sc_block(tl, block, engT, sigmaT, neededT);
        res.T_own[static_cast<size_t>(block - 1)] = t;
        solver.fixpoint(eqs, view.keys);
    };

    if (ell == 1)
        for (int b = 1; b <= L; ++b) decode_block(b);
    else
        for (int b = L; b >= 1; --b) decode_block(b);

    // message extraction
    MessageSet& msg = res.messages;
    for (int i = 1; i <= L; ++i) {
        if (own_is_corner) {
            msg.w_v.push_back(read_bits(res.A[static_cast<size_t>(i - 1)], plan.cells.C));
            msg.s_v.push_back(read_bits(res.A[static_cast<size_t>(i - 1)], plan.msg_area(i)));
            msg.w_u[ell - 1].push_back(read_bits(res.T_own[static_cast<size_t>(i - 1)], outer.k.w_area));
            msg.s_u[ell - 1].push_back(read_bits(res.T_own[static_cast<size_t>(i - 1)], outer.k_msg_area(i, L)));
        } else {
            msg.w_u[ell - 1].push_back(read_bits(res.T_own[static_cast<size_t>(i - 1)], outer.kb.w_area));
            msg.s_u[ell - 1].push_back(read_bits(res.T_own[static_cast<size_t>(i - 1)], outer.kb_msg_area(i, L)));
        }
    }
    return res;
}

// True when this receiver's decoded messages match the transmitted ones.
inline bool messages_match(const MessageSet& sent, const DecodeResult& got, int ell, int corner) {
    if (ell == corner) {
        if (got.messages.w_v != sent.w_v || got.messages.s_v != sent.s_v) return false;
    }
    return got.messages.w_u[ell - 1] == sent.w_u[ell - 1] &&
           got.messages.s_u[ell - 1] == sent.s_u[ell - 1];
}

}  // namespace wtpolar
