#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "wtpolar/bounds.hpp"
#include "wtpolar/pipeline.hpp"

namespace wtpolar {

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ValidationError("total_variation: size mismatch");
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

namespace detail {

// Enumerates every realization of the encoder's randomness (messages, keys,
// pads, SC draws) with its exact probability. The visitor receives the drawn
// messages, the finished transmission, and the branch weight.
inline void enumerate_encodings(
    const Pipeline& p,
    const std::function<void(const MessageSet&, const ChainTransmission&, double)>& visit) {
    const int cap = p.cfg.enum_bit_cap;
    std::vector<uint8_t> script;
    std::function<void()> rec = [&]() {
        ScriptedSource src(script);
        KeyRing keys = generate_keys(p.plan, p.outer, p.cfg, src);
        MessageSet msgs = draw_messages(p.plan, p.outer, src);
        ChainTransmission tx = encode_chain(msgs, p.plan, p.outer, keys, p.model, p.cfg, src);
        if (!src.overran()) {
            double w = src.weight();
            if (w > 0) visit(msgs, tx, w);
            return;
        }
        if (static_cast<int>(script.size()) >= cap)
            throw StateSpaceTooLarge("encoder randomness exceeds " + std::to_string(cap) +
                                     " bits; exact enumeration refused");
        double p1 = src.probs()[script.size()];
        if (1 - p1 > 0) {
            script.push_back(0);
            rec();
            script.pop_back();
        }
        if (p1 > 0) {
            script.push_back(1);
            rec();
            script.pop_back();
        }
    };
    rec();
}

inline Bits confidential_bits(const MessageSet& ms, bool with_rx1, bool with_rx2) {
    Bits s;
    for (const Bits& b : ms.s_v) s = concat_bits(s, b);  // belongs to the corner receiver
    if (with_rx1)
        for (const Bits& b : ms.s_u[0]) s = concat_bits(s, b);
    if (with_rx2)
        for (const Bits& b : ms.s_u[1]) s = concat_bits(s, b);
    return s;
}

}  // namespace detail

struct TvReport {
    std::vector<double> tv_per_block;
    double tv_max = 0;
    BoundReport bound;
    bool within_bound = true;
};

// Exact total variation between the encoder-induced per-block distribution of
// the three transform-domain layers and the memoryless reference, by full
// enumeration of messages, keys, and encoder randomness.
inline TvReport exact_tv(const Pipeline& p) {
    const int n = p.cfg.n, L = p.cfg.L;
    if (n > 4) throw StateSpaceTooLarge("exact_tv supports block lengths up to 4");
    size_t bins = static_cast<size_t>(1) << (3 * n);
    std::vector<std::vector<double>> q(static_cast<size_t>(L), std::vector<double>(bins, 0.0));
    detail::enumerate_encodings(p, [&](const MessageSet&, const ChainTransmission& tx, double w) {
        for (int i = 0; i < L; ++i) {
            uint64_t key = bits_to_u64(tx.A[static_cast<size_t>(i)]) |
                           (bits_to_u64(tx.T1[static_cast<size_t>(i)]) << n) |
                           (bits_to_u64(tx.T2[static_cast<size_t>(i)]) << (2 * n));
            q[static_cast<size_t>(i)][static_cast<size_t>(key)] += w;
        }
    });

    // reference: the transform of n independent copies of p(v,u1,u2)
    std::vector<double> ref(bins, 0.0);
    for (uint64_t va = 0; va < (1ull << n); ++va)
        for (uint64_t ua = 0; ua < (1ull << n); ++ua)
            for (uint64_t ub = 0; ub < (1ull << n); ++ub) {
                double pr = 1.0;
                for (int j = 0; j < n; ++j) {
                    int v = static_cast<int>((va >> j) & 1), u1 = static_cast<int>((ua >> j) & 1),
                        u2 = static_cast<int>((ub >> j) & 1);
                    pr *= p.model.p_vu[static_cast<size_t>(JointModel::vu_index(v, u1, u2))];
                }
                if (pr == 0) continue;
                auto tobits = [&](uint64_t w64) {
                    Bits b(static_cast<size_t>(n));
                    for (int j = 0; j < n; ++j) b[static_cast<size_t>(j)] = static_cast<uint8_t>((w64 >> j) & 1);
                    return b;
                };
                uint64_t a = bits_to_u64(polar_transform(tobits(va)));
                uint64_t t1 = bits_to_u64(polar_transform(tobits(ua)));
                uint64_t t2 = bits_to_u64(polar_transform(tobits(ub)));
                ref[static_cast<size_t>(a | (t1 << n) | (t2 << (2 * n)))] += pr;
            }

    TvReport rep;
    rep.bound = bound_report(p.cfg);
    for (int i = 0; i < L; ++i) {
        double tv = total_variation(q[static_cast<size_t>(i)], ref);
        rep.tv_per_block.push_back(tv);
        rep.tv_max = std::max(rep.tv_max, tv);
    }
    rep.within_bound = rep.tv_max <= rep.bound.delta_star;
    return rep;
}

struct LeakageReport {
    double leakage_z = 0;            // I(S; Z blocks)
    double leakage_z_side = 0;       // I(S; Z blocks, encrypted side information)
    size_t s_bits = 0;
    BoundReport bound;
    bool within_bound = true;
};

// Exact information leakage about the confidential messages from the
// eavesdropper's observations, by full enumeration. Both views are computed:
// the channel outputs alone, and the channel outputs together with the
// encrypted side information (equal when the one-time-pad keys are on).
inline LeakageReport exact_leakage(const Pipeline& p, bool count_rx1 = true, bool count_rx2 = true) {
    const int n = p.cfg.n, L = p.cfg.L;
    if (n > 4) throw StateSpaceTooLarge("exact_leakage supports block lengths up to 4");
    double zcells = std::pow(static_cast<double>(p.model.nz), n * L);
    if (zcells > (1 << 20)) throw StateSpaceTooLarge("eavesdropper observation space too large");
    const int zn = p.model.nz;

    std::map<std::pair<uint64_t, uint64_t>, double> joint, joint_side;
    std::map<uint64_t, double> ps;
    std::map<uint64_t, double> pz, pz_side;
    size_t sbits = 0;

    detail::enumerate_encodings(p, [&](const MessageSet& ms, const ChainTransmission& tx, double w) {
        Bits s = detail::confidential_bits(ms, count_rx1, count_rx2);
        sbits = s.size();
        if (s.size() > 48) throw StateSpaceTooLarge("confidential payload too large to enumerate");
        uint64_t skey = bits_to_u64(s);
        Bits side;
        for (int ell = 0; ell < 2; ++ell) {
            side = concat_bits(side, tx.bundleV_enc[ell]);
            side = concat_bits(side, tx.bundleU_enc[ell]);
        }
        if (side.size() > 40) throw StateSpaceTooLarge("side information too large to enumerate");
        uint64_t sidekey = bits_to_u64(side);
        int sidebits = static_cast<int>(side.size());
        ps[skey] += w;
        // enumerate eavesdropper sequences over all blocks jointly
        int total = n * L;
        std::vector<int> zs(static_cast<size_t>(total), 0);
        for (;;) {
            double pzx = 1.0;
            for (int t = 0; t < total && pzx > 0; ++t) {
                int x = tx.X[static_cast<size_t>(t / n)][static_cast<size_t>(t % n)];
                double m = 0;
                for (int y1 = 0; y1 < p.model.ny1; ++y1)
                    for (int y2 = 0; y2 < p.model.ny2; ++y2)
                        m += p.model.p_channel(x, y1, y2, zs[static_cast<size_t>(t)]);
                pzx *= m;
            }
            if (pzx > 0) {
                uint64_t zkey = 0;
                for (int t = 0; t < total; ++t) zkey = zkey * static_cast<uint64_t>(zn) + static_cast<uint64_t>(zs[static_cast<size_t>(t)]);
                joint[{skey, zkey}] += w * pzx;
                pz[zkey] += w * pzx;
                uint64_t zskey = (zkey << sidebits) | sidekey;
                joint_side[{skey, zskey}] += w * pzx;
                pz_side[zskey] += w * pzx;
            }
            int t = 0;
            while (t < total && ++zs[static_cast<size_t>(t)] == zn) zs[static_cast<size_t>(t++)] = 0;
            if (t == total) break;
        }
    });

    auto mi = [](const std::map<std::pair<uint64_t, uint64_t>, double>& j,
                 const std::map<uint64_t, double>& pa, const std::map<uint64_t, double>& pb) {
        double out = 0;
        for (const auto& [k, pj] : j) {
            if (pj <= 0) continue;
            out += pj * std::log2(pj / (pa.at(k.first) * pb.at(k.second)));
        }
        return std::max(0.0, out);
    };
    LeakageReport rep;
    rep.s_bits = sbits;
    rep.leakage_z = mi(joint, ps, pz);
    rep.leakage_z_side = mi(joint_side, ps, pz_side);
    rep.bound = bound_report(p.cfg);
    rep.within_bound = rep.leakage_z <= rep.bound.L_delta_S;
    return rep;
}

}  // namespace wtpolar
