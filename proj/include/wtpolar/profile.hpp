#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "wtpolar/info.hpp"
#include "wtpolar/model.hpp"
#include "wtpolar/polar.hpp"
#include "wtpolar/rng.hpp"

namespace wtpolar {

enum class ProfileMethod : uint8_t { Exact, MonteCarlo };

inline const char* to_string(ProfileMethod m) {
    return m == ProfileMethod::Exact ? "exact" : "mc";
}

struct CodeConfig {
    int n = 16;
    double beta = 0.25;          // in (0, 1/2)
    int L = 2;                   // chained blocks
    ProfileMethod method = ProfileMethod::Exact;
    int mc_samples = 10000;
    uint64_t seed = 1;
    int exact_atom_cap = 4096;   // per-node distinct-posterior cap for exact profiles
    int enum_bit_cap = 22;       // exhaustive-verification randomness budget (bits)
    bool use_session_keys = true;  // the block-coupling keys; disable only for leakage studies
    bool relax = false;

    double delta_n() const { return std::exp2(-std::pow(static_cast<double>(n), beta)); }

    void validate() const {
        if (!is_power_of_two(static_cast<size_t>(n))) throw LengthNotPowerOfTwo("CodeConfig: n must be a power of 2");
        if (!(beta > 0.0 && beta < 0.5)) throw ValidationError("CodeConfig: beta must be in (0, 1/2)");
        if (L < 1) throw ValidationError("CodeConfig: L must be >= 1");
        if (method == ProfileMethod::MonteCarlo && mc_samples < 1)
            throw ValidationError("CodeConfig: sample count must be >= 1");
    }
};

// Per-index conditional entropies H(A(j) | A^{1:j-1}, side) of one layer.
struct EntropyProfile {
    std::string layer;  // "V", "U1", "U2"
    std::string cond;   // e.g. "none", "Z", "VY1", "VU1Z"
    ProfileMethod method = ProfileMethod::Exact;
    int samples = 0;
    std::vector<double> h;  // size n, values in [0,1]
    double max_ci_width = 0.0;   // Monte-Carlo only
    bool sample_warning = false;

    int n() const { return static_cast<int>(h.size()); }
};

namespace detail {

// Distribution over posteriors: atom (w, r) means the side information takes
// a class of values with total probability w under which P(x=1 | side) = r.
// Merging equal posteriors is lossless for every downstream quantity.
struct Atom {
    double w;
    double r;
};
using AtomDist = std::vector<Atom>;

inline void merge_atoms(AtomDist& d, int cap) {
    std::sort(d.begin(), d.end(), [](const Atom& a, const Atom& b) { return a.r < b.r; });
    AtomDist out;
    for (const Atom& a : d) {
        if (a.w <= 0) continue;
        if (!out.empty() && std::abs(out.back().r - a.r) <= 1e-12)
            out.back().w += a.w;
        else
            out.push_back(a);
    }
    if (static_cast<int>(out.size()) > cap)
        throw StateSpaceTooLarge("exact profile: " + std::to_string(out.size()) +
                                 " posterior classes exceed cap " + std::to_string(cap));
    d = std::move(out);
}

inline AtomDist atoms_from_source(const SourceSpec& s, int cap) {
    AtomDist d;
    d.reserve(s.q.size());
    for (const auto& a : s.q) {
        double w = a[0] + a[1];
        if (w <= 0) continue;
        d.push_back({w, a[1] / w});
    }
    merge_atoms(d, cap);
    return d;
}

inline double dist_entropy(const AtomDist& d) {
    double h = 0;
    for (const Atom& a : d) h += a.w * binary_entropy(a.r);
    return h;
}

inline AtomDist combine_minus(const AtomDist& d, int cap) {
    AtomDist out;
    out.reserve(d.size() * d.size());
    for (const Atom& a : d)
        for (const Atom& b : d) {
            double r = a.r * (1 - b.r) + b.r * (1 - a.r);
            out.push_back({a.w * b.w, r});
        }
    merge_atoms(out, cap);
    return out;
}

inline AtomDist combine_plus(const AtomDist& d, int cap) {
    AtomDist out;
    out.reserve(2 * d.size() * d.size());
    for (const Atom& a : d)
        for (const Atom& b : d) {
            double w = a.w * b.w;
            // c = x1 ^ x2 becomes part of the conditioning
            for (int c = 0; c < 2; ++c) {
                double pc = c ? a.r * (1 - b.r) + b.r * (1 - a.r)
                              : a.r * b.r + (1 - a.r) * (1 - b.r);
                if (pc <= 0) continue;
                double num = (c ? (1 - a.r) : a.r) * b.r;  // P(x2=1, c)
                out.push_back({w * pc, num / pc});
            }
        }
    merge_atoms(out, cap);
    return out;
}

inline void exact_profile_rec(const AtomDist& d, int depth, int cap, std::vector<double>& out) {
    if (depth == 0) {
        out.push_back(dist_entropy(d));
        return;
    }
    exact_profile_rec(combine_minus(d, cap), depth - 1, cap, out);
    exact_profile_rec(combine_plus(d, cap), depth - 1, cap, out);
}

}  // namespace detail

// Exact per-index profile by lossless posterior-class evolution. Cost grows
// with the number of distinct posterior classes; sources whose posteriors
// stay in {0, 1/2, 1} (erasure-like structure) evaluate in O(n).
inline std::vector<double> exact_profile_values(const SourceSpec& src, int n, int atom_cap) {
    if (!is_power_of_two(static_cast<size_t>(n))) throw LengthNotPowerOfTwo("exact_profile: n");
    int depth = 0;
    while ((1 << depth) < n) ++depth;
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n));
    detail::exact_profile_rec(detail::atoms_from_source(src, atom_cap), depth, atom_cap, out);
    return out;
}

// Closed-form erasure recursion (independent oracle for erasure-structured
// sources): returns the per-index synthetic erasure probabilities, which for
// a uniform input equal the per-index conditional entropies.
inline std::vector<double> bec_erasure_profile(double e0, int n) {
    if (!is_power_of_two(static_cast<size_t>(n))) throw LengthNotPowerOfTwo("bec_erasure_profile: n");
    // Index path = bits of (j-1) from most significant to least: 0 takes the
    // combining branch, 1 the refinement branch.
    std::vector<double> cur{e0};
    while (static_cast<int>(cur.size()) < n) {
        std::vector<double> nxt;
        nxt.reserve(cur.size() * 2);
        for (double e : cur) {
            nxt.push_back(2 * e - e * e);
            nxt.push_back(e * e);
        }
        cur = std::move(nxt);
    }
    return cur;
}

// True if every side symbol either determines the target or leaves it
// uniform, with a uniform marginal; such sources follow the erasure recursion.
inline bool is_erasure_like(const SourceSpec& s, double* erasure = nullptr) {
    double e = 0, p1 = 0, tot = 0;
    for (const auto& a : s.q) {
        double w = a[0] + a[1];
        if (w <= 0) continue;
        tot += w;
        p1 += a[1];
        double r = a[1] / w;
        if (std::abs(r - 0.5) <= 1e-12)
            e += w;
        else if (r > 1e-12 && r < 1 - 1e-12)
            return false;
    }
    if (std::abs(p1 / tot - 0.5) > 1e-12) return false;
    if (erasure) *erasure = e / tot;
    return true;
}

struct McProfileResult {
    std::vector<double> h;
    double max_ci_width = 0;
};

// Plug-in estimate of E[-log2 P(A(j) | A^{1:j-1}, side)] by sampling from the
// joint and running one SC sweep per sample along the true path. Welford
// accumulation gives a per-index confidence width.
inline McProfileResult mc_profile_values(const SourceSpec& src, int n, int samples, RngStream rng) {
    if (samples < 1) throw ValidationError("mc_profile: sample count must be >= 1");
    ScEngine eng(src, n);
    std::vector<double> mean(static_cast<size_t>(n), 0.0), m2(static_cast<size_t>(n), 0.0);
    // cumulative over (sigma, x) for sampling
    std::vector<double> cum;
    cum.reserve(src.q.size() * 2);
    double acc = 0;
    for (const auto& a : src.q) {
        acc += a[0];
        cum.push_back(acc);
        acc += a[1];
        cum.push_back(acc);
    }
    std::vector<int> sigma(static_cast<size_t>(n));
    Bits x(static_cast<size_t>(n));
    for (int t = 0; t < samples; ++t) {
        for (int i = 0; i < n; ++i) {
            double u = rng.uniform() * acc;
            size_t lo = static_cast<size_t>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            if (lo >= cum.size()) lo = cum.size() - 1;
            sigma[static_cast<size_t>(i)] = static_cast<int>(lo / 2);
            x[static_cast<size_t>(i)] = static_cast<uint8_t>(lo % 2);
        }
        Bits u_true = polar_transform(x);
        eng.run(sigma, [&](int idx, double p0, double p1) -> uint8_t {
            uint8_t b = u_true[static_cast<size_t>(idx)];
            double p = b ? p1 : p0;
            double val = p > 0 ? -std::log2(p) : 60.0;  // clamp impossible-sample artifacts
            double delta = val - mean[static_cast<size_t>(idx)];
            mean[static_cast<size_t>(idx)] += delta / (t + 1);
            m2[static_cast<size_t>(idx)] += delta * (val - mean[static_cast<size_t>(idx)]);
            return b;
        });
    }
    McProfileResult res;
    res.h = mean;
    for (int i = 0; i < n; ++i) {
        double var = samples > 1 ? m2[static_cast<size_t>(i)] / (samples - 1) : 0.0;
        double ci = 2 * 1.96 * std::sqrt(var / samples);
        res.max_ci_width = std::max(res.max_ci_width, ci);
    }
    return res;
}

// Layer/conditioning naming used by profile files and reports.
struct LayerRequest {
    std::string layer;          // "V", "U1", "U2"
    std::string cond;           // "none","Z","Y1","Y2","V","VZ","VY1","VY2","VU1","VU2","VU1Z","VU2Z"
    Var target;
    std::vector<Var> context;
};

inline LayerRequest layer_request(const std::string& layer, const std::string& cond) {
    LayerRequest r;
    r.layer = layer;
    r.cond = cond;
    if (layer == "V")
        r.target = Var::V;
    else if (layer == "U1")
        r.target = Var::U1;
    else if (layer == "U2")
        r.target = Var::U2;
    else
        throw ValidationError("unknown layer " + layer);
    auto add = [&](char c) {
        switch (c) {
            case 'V': r.context.push_back(Var::V); break;
            case 'Z': r.context.push_back(Var::Z); break;
            default: throw ValidationError("bad conditioning " + cond);
        }
    };
    for (size_t i = 0; i < cond.size();) {
        if (cond == "none") break;
        char c = cond[i];
        if (c == 'Y' || c == 'U') {
            if (i + 1 >= cond.size()) throw ValidationError("bad conditioning " + cond);
            int idx = cond[i + 1] - '0';
            if (c == 'Y') r.context.push_back(idx == 1 ? Var::Y1 : Var::Y2);
            else r.context.push_back(idx == 1 ? Var::U1 : Var::U2);
            i += 2;
        } else {
            add(c);
            ++i;
        }
    }
    if (std::find(r.context.begin(), r.context.end(), r.target) != r.context.end())
        throw ValidationError("conditioning contains the target layer");
    return r;
}

inline EntropyProfile entropy_profile(const JointModel& m, const std::string& layer,
                                      const std::string& cond, const CodeConfig& cfg) {
    LayerRequest req = layer_request(layer, cond);
    SourceSpec src = m.source(req.target, req.context);
    EntropyProfile p;
    p.layer = layer;
    p.cond = cond;
    p.method = cfg.method;
    if (cfg.method == ProfileMethod::Exact) {
        p.h = exact_profile_values(src, cfg.n, cfg.exact_atom_cap);
    } else {
        auto res = mc_profile_values(src, cfg.n, cfg.mc_samples,
                                     RngStream(cfg.seed, "profile/" + layer + "/" + cond));
        p.h = std::move(res.h);
        for (double& v : p.h) v = std::clamp(v, 0.0, 1.0);
        p.samples = cfg.mc_samples;
        p.max_ci_width = res.max_ci_width;
        p.sample_warning = res.max_ci_width > 0.05;
    }
    return p;
}

inline std::string serialize_profile(const EntropyProfile& p) {
    std::ostringstream os;
    os.precision(17);
    os << "wtpolar-profile v1\n";
    os << "layer " << p.layer << " cond " << p.cond << "\n";
    os << "method " << to_string(p.method);
    if (p.method == ProfileMethod::MonteCarlo) os << " samples " << p.samples;
    os << "\n";
    os << "n " << p.n() << "\n";
    os << "h";
    for (double v : p.h) os << " " << v;
    os << "\n";
    return os.str();
}

inline EntropyProfile parse_profile(const std::string& text) {
    std::istringstream is(text);
    std::string tag, ver;
    is >> tag >> ver;
    if (tag != "wtpolar-profile" || ver != "v1") throw ValidationError("bad profile header");
    EntropyProfile p;
    std::string kw;
    is >> kw >> p.layer >> kw >> p.cond;
    is >> kw;
    std::string meth;
    is >> meth;
    p.method = meth == "exact" ? ProfileMethod::Exact : ProfileMethod::MonteCarlo;
    is >> kw;
    if (kw == "samples") {
        is >> p.samples >> kw;
    }
    int n = 0;
    is >> n;
    is >> kw;
    p.h.resize(static_cast<size_t>(n));
    for (double& v : p.h) is >> v;
    return p;
}

}  // namespace wtpolar
