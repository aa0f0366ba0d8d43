#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wtpolar/errors.hpp"

namespace wtpolar {

// Variables of the one-shot source. V, U1, U2, X are binary; the channel
// output alphabets are finite and user-set.
enum class Var { V, U1, U2, X, Y1, Y2, Z };

// Per-symbol source for a binary target given a finite side symbol:
// q[sigma][x] is the joint probability of (side = sigma, target = x).
struct SourceSpec {
    int side_card = 1;
    std::vector<std::array<double, 2>> q;  // size side_card

    double p_target_one() const {
        double s = 0;
        for (const auto& a : q) s += a[1];
        return s;
    }
};

// Joint distribution of the memoryless source: p(v,u1,u2) on {0,1}^3, a
// deterministic map x = f(v,u1,u2), and a channel table p(y1,y2,z|x).
class JointModel {
public:
    int ny1 = 2, ny2 = 2, nz = 2;
    std::array<double, 8> p_vu;      // index v*4 + u1*2 + u2
    std::array<uint8_t, 8> f_table;  // same indexing
    std::vector<double> chan;        // [x][y1][y2][z] row-major

    static int vu_index(int v, int u1, int u2) { return v * 4 + u1 * 2 + u2; }
    int chan_index(int x, int y1, int y2, int z) const {
        return ((x * ny1 + y1) * ny2 + y2) * nz + z;
    }
    double p_channel(int x, int y1, int y2, int z) const {
        return chan[static_cast<size_t>(chan_index(x, y1, y2, z))];
    }
    uint8_t f(int v, int u1, int u2) const { return f_table[static_cast<size_t>(vu_index(v, u1, u2))]; }

    void validate() const {
        for (double p : p_vu)
            if (p < 0) throw NegativeProbability("p_vu1u2 entry negative");
        for (double p : chan)
            if (p < 0) throw NegativeProbability("channel entry negative");
        double s = 0;
        for (double p : p_vu) s += p;
        if (std::abs(s - 1.0) > 1e-9)
            throw RowSumError("p_vu1u2 sums to " + std::to_string(s));
        for (int x = 0; x < 2; ++x) {
            double r = 0;
            for (int y1 = 0; y1 < ny1; ++y1)
                for (int y2 = 0; y2 < ny2; ++y2)
                    for (int z = 0; z < nz; ++z) r += p_channel(x, y1, y2, z);
            if (std::abs(r - 1.0) > 1e-9)
                throw RowSumError("channel row for x=" + std::to_string(x) + " sums to " +
                                  std::to_string(r));
        }
        for (uint8_t b : f_table)
            if (b > 1) throw NonDeterministicX("f_table entry not a bit");
    }

    void normalize() {
        double s = 0;
        for (double p : p_vu) s += p;
        for (double& p : p_vu) p /= s;
        for (int x = 0; x < 2; ++x) {
            double r = 0;
            for (int y1 = 0; y1 < ny1; ++y1)
                for (int y2 = 0; y2 < ny2; ++y2)
                    for (int z = 0; z < nz; ++z) r += p_channel(x, y1, y2, z);
            for (int y1 = 0; y1 < ny1; ++y1)
                for (int y2 = 0; y2 < ny2; ++y2)
                    for (int z = 0; z < nz; ++z)
                        chan[static_cast<size_t>(chan_index(x, y1, y2, z))] /= r;
        }
    }

    int card(Var v) const {
        switch (v) {
            case Var::Y1: return ny1;
            case Var::Y2: return ny2;
            case Var::Z: return nz;
            default: return 2;
        }
    }

    // Iterate the full joint p(v,u1,u2,x,y1,y2,z); fn receives the symbol
    // tuple and its probability. Zero-probability atoms are skipped.
    template <class Fn>
    void for_each_joint(Fn&& fn) const {
        for (int v = 0; v < 2; ++v)
            for (int u1 = 0; u1 < 2; ++u1)
                for (int u2 = 0; u2 < 2; ++u2) {
                    double pw = p_vu[static_cast<size_t>(vu_index(v, u1, u2))];
                    if (pw == 0) continue;
                    int x = f(v, u1, u2);
                    for (int y1 = 0; y1 < ny1; ++y1)
                        for (int y2 = 0; y2 < ny2; ++y2)
                            for (int z = 0; z < nz; ++z) {
                                double pc = p_channel(x, y1, y2, z);
                                if (pc == 0) continue;
                                fn(v, u1, u2, x, y1, y2, z, pw * pc);
                            }
                }
    }

    int value_of(Var var, int v, int u1, int u2, int x, int y1, int y2, int z) const {
        switch (var) {
            case Var::V: return v;
            case Var::U1: return u1;
            case Var::U2: return u2;
            case Var::X: return x;
            case Var::Y1: return y1;
            case Var::Y2: return y2;
            case Var::Z: return z;
        }
        return 0;
    }

    // Per-symbol joint of (target | context tuple), used by the SC engine and
    // profile construction. Context symbols are encoded lexicographically in
    // the order the context variables are listed.
    SourceSpec source(Var target, const std::vector<Var>& context) const {
        SourceSpec s;
        s.side_card = 1;
        for (Var c : context) s.side_card *= card(c);
        s.q.assign(static_cast<size_t>(s.side_card), {0.0, 0.0});
        for_each_joint([&](int v, int u1, int u2, int x, int y1, int y2, int z, double p) {
            int sigma = 0;
            for (Var c : context) sigma = sigma * card(c) + value_of(c, v, u1, u2, x, y1, y2, z);
            int t = value_of(target, v, u1, u2, x, y1, y2, z);
            s.q[static_cast<size_t>(sigma)][static_cast<size_t>(t)] += p;
        });
        return s;
    }

    int encode_context(const std::vector<Var>& context, const std::vector<int>& values) const {
        int sigma = 0;
        for (size_t i = 0; i < context.size(); ++i) sigma = sigma * card(context[i]) + values[i];
        return sigma;
    }

    // Swap the roles of receiver 1 and receiver 2 (u1<->u2, y1<->y2).
    JointModel swapped() const {
        JointModel m;
        m.ny1 = ny2;
        m.ny2 = ny1;
        m.nz = nz;
        for (int v = 0; v < 2; ++v)
            for (int u1 = 0; u1 < 2; ++u1)
                for (int u2 = 0; u2 < 2; ++u2) {
                    m.p_vu[static_cast<size_t>(vu_index(v, u1, u2))] =
                        p_vu[static_cast<size_t>(vu_index(v, u2, u1))];
                    m.f_table[static_cast<size_t>(vu_index(v, u1, u2))] =
                        f_table[static_cast<size_t>(vu_index(v, u2, u1))];
                }
        m.chan.assign(static_cast<size_t>(2 * m.ny1 * m.ny2 * m.nz), 0.0);
        for (int x = 0; x < 2; ++x)
            for (int y1 = 0; y1 < ny1; ++y1)
                for (int y2 = 0; y2 < ny2; ++y2)
                    for (int z = 0; z < nz; ++z)
                        m.chan[static_cast<size_t>(m.chan_index(x, y2, y1, z))] = p_channel(x, y1, y2, z);
        return m;
    }
};

namespace detail {
inline double json_prob(const nlohmann::json& j) {
    if (j.is_string()) {
        try {
            return std::stod(j.get<std::string>());
        } catch (...) {
            throw ValidationError("probability string does not parse: " + j.get<std::string>());
        }
    }
    if (j.is_number()) return j.get<double>();
    throw ValidationError("probability entry is neither number nor string");
}
}  // namespace detail

// Model spec file: JSON with keys `alphabets`, `p_vu1u2`, `f_table`,
// `channel`. The channel is nested [x][y1][y2][z]. `f_table` entries must be
// 0/1; a stochastic `x_given_vu1u2` table is rejected unless every row is a
// point mass.
inline JointModel load_model(const nlohmann::json& spec) {
    JointModel m;
    if (!spec.contains("alphabets")) throw ValidationError("model spec missing 'alphabets'");
    const auto& al = spec.at("alphabets");
    m.ny1 = al.value("Y1", 2);
    m.ny2 = al.value("Y2", 2);
    m.nz = al.value("Z", 2);
    if (m.ny1 < 1 || m.ny2 < 1 || m.nz < 1) throw ValidationError("alphabet sizes must be >= 1");

    const auto& pv = spec.at("p_vu1u2");
    if (pv.size() != 8) throw ValidationError("p_vu1u2 must have 8 entries (v,u1,u2 lexicographic)");
    for (int i = 0; i < 8; ++i) m.p_vu[static_cast<size_t>(i)] = detail::json_prob(pv[static_cast<size_t>(i)]);

    if (spec.contains("f_table")) {
        const auto& ft = spec.at("f_table");
        if (ft.size() != 8) throw ValidationError("f_table must have 8 entries");
        for (int i = 0; i < 8; ++i) {
            int b = ft[static_cast<size_t>(i)].get<int>();
            if (b != 0 && b != 1) throw NonDeterministicX("f_table entry not in {0,1}");
            m.f_table[static_cast<size_t>(i)] = static_cast<uint8_t>(b);
        }
    } else if (spec.contains("x_given_vu1u2")) {
        const auto& xt = spec.at("x_given_vu1u2");
        if (xt.size() != 8) throw ValidationError("x_given_vu1u2 must have 8 rows");
        for (int i = 0; i < 8; ++i) {
            const auto& row = xt[static_cast<size_t>(i)];
            double p0 = detail::json_prob(row[0]), p1 = detail::json_prob(row[1]);
            if (std::abs(p0 + p1 - 1.0) > 1e-9) throw RowSumError("x_given_vu1u2 row not normalized");
            if (std::abs(p0 - 1.0) < 1e-12)
                m.f_table[static_cast<size_t>(i)] = 0;
            else if (std::abs(p1 - 1.0) < 1e-12)
                m.f_table[static_cast<size_t>(i)] = 1;
            else
                throw NonDeterministicX("x table is stochastic; X must be a function of (v,u1,u2)");
        }
    } else {
        throw ValidationError("model spec missing 'f_table'");
    }

    const auto& ch = spec.at("channel");
    if (ch.size() != 2) throw ValidationError("channel must have 2 input rows");
    m.chan.assign(static_cast<size_t>(2 * m.ny1 * m.ny2 * m.nz), 0.0);
    for (int x = 0; x < 2; ++x) {
        const auto& cy1 = ch[static_cast<size_t>(x)];
        if (static_cast<int>(cy1.size()) != m.ny1) throw ValidationError("channel Y1 dimension mismatch");
        for (int y1 = 0; y1 < m.ny1; ++y1) {
            const auto& cy2 = cy1[static_cast<size_t>(y1)];
            if (static_cast<int>(cy2.size()) != m.ny2) throw ValidationError("channel Y2 dimension mismatch");
            for (int y2 = 0; y2 < m.ny2; ++y2) {
                const auto& cz = cy2[static_cast<size_t>(y2)];
                if (static_cast<int>(cz.size()) != m.nz) throw ValidationError("channel Z dimension mismatch");
                for (int z = 0; z < m.nz; ++z)
                    m.chan[static_cast<size_t>(m.chan_index(x, y1, y2, z))] = detail::json_prob(cz[static_cast<size_t>(z)]);
            }
        }
    }
    m.validate();
    m.normalize();
    return m;
}

}  // namespace wtpolar
