#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "wtpolar/bits.hpp"
#include "wtpolar/model.hpp"
#include "wtpolar/rng.hpp"

namespace wtpolar {

inline bool is_power_of_two(size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Polar transform: multiply by the m-fold Kronecker power of the self-inverse
// kernel [[1,0],[1,1]] over GF(2), natural (non-bit-reversed) indexing.
// At n=2 this maps (x1,x2) -> (x1^x2, x2); the map is an involution.
inline Bits polar_transform(Bits x) {
    size_t n = x.size();
    if (!is_power_of_two(n)) throw LengthNotPowerOfTwo("polar_transform: length " + std::to_string(n));
    for (size_t h = 1; h < n; h <<= 1)
        for (size_t b = 0; b < n; b += 2 * h)
            for (size_t j = b; j < b + h; ++j) x[j] ^= x[j + h];
    return x;
}

using W2 = std::array<double, 2>;

// Per-index visitor contract: given the conditional (p0, p1) of the next
// transform-domain bit, return the bit to commit.
using ScVisitor = std::function<uint8_t(int j, double p0, double p1)>;

namespace detail {

inline W2 normalized(double w0, double w1, bool lenient, const char* where) {
    double s = w0 + w1;
    if (!(s > 0)) {
        // A committed bit contradicted the evidence. In lenient mode the
        // sweep continues with an uninformative conditional (the block is
        // already lost); strict mode reports the inconsistency.
        if (lenient) return {0.5, 0.5};
        throw ZeroEvidence(std::string("conditioning event has probability zero (") + where + ")");
    }
    return {w0 / s, w1 / s};
}

inline Bits sc_pass(std::vector<W2>& w, int& j, const ScVisitor& visit, bool lenient) {
    size_t len = w.size();
    if (len == 1) {
        W2 p = normalized(w[0][0], w[0][1], lenient, "leaf");
        uint8_t bit = visit(j++, p[0], p[1]);
        return {bit};
    }
    size_t h = len / 2;
    std::vector<W2> sub(h);
    for (size_t i = 0; i < h; ++i) {
        // source combining: c_i = x_i ^ x_{i+h}
        double w0 = w[i][0] * w[i + h][0] + w[i][1] * w[i + h][1];
        double w1 = w[i][1] * w[i + h][0] + w[i][0] * w[i + h][1];
        sub[i] = normalized(w0, w1, lenient, "combine");
    }
    Bits c = sc_pass(sub, j, visit, lenient);
    for (size_t i = 0; i < h; ++i) {
        // d_i = x_{i+h} given the decided c_i
        double w0 = w[i][c[i] ^ 0] * w[i + h][0];
        double w1 = w[i][c[i] ^ 1] * w[i + h][1];
        sub[i] = normalized(w0, w1, lenient, "refine");
    }
    Bits d = sc_pass(sub, j, visit, lenient);
    Bits x(len);
    for (size_t i = 0; i < h; ++i) {
        x[i] = c[i] ^ d[i];
        x[i + h] = d[i];
    }
    return x;
}

}  // namespace detail

// One successive-cancellation sweep over a block. Leaf weights carry the
// per-position joint q(x, sigma_i); the visitor sees conditionals of the
// transform-domain bits in index order and commits them. Returns the
// symbol-domain sequence (equal to the transform of the committed bits).
class ScEngine {
public:
    ScEngine(SourceSpec src, int n) : src_(std::move(src)), n_(n) {
        if (!is_power_of_two(static_cast<size_t>(n))) throw LengthNotPowerOfTwo("ScEngine: n");
    }

    const SourceSpec& source() const { return src_; }
    int n() const { return n_; }

    Bits run(const std::vector<int>& sigma, const ScVisitor& visit, bool lenient = false) const {
        if (static_cast<int>(sigma.size()) != n_) throw ValidationError("side sequence length mismatch");
        std::vector<W2> w(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            int s = sigma[static_cast<size_t>(i)];
            if (s < 0 || s >= src_.side_card) throw ValidationError("side symbol out of range");
            w[static_cast<size_t>(i)] = src_.q[static_cast<size_t>(s)];
        }
        int j = 0;
        return detail::sc_pass(w, j, visit, lenient);
    }

private:
    SourceSpec src_;
    int n_;
};

// P(A(j)=0 | A^{1:j-1}=prefix, side) and its complement. j is 1-based.
inline std::pair<double, double> sc_conditional(const ScEngine& eng, int j, const Bits& prefix,
                                                const std::vector<int>& sigma) {
    if (j < 1 || j > eng.n()) throw ValidationError("sc_conditional: index out of range");
    if (static_cast<int>(prefix.size()) != j - 1) throw ValidationError("sc_conditional: prefix length");
    std::pair<double, double> out{0.5, 0.5};
    eng.run(sigma, [&](int idx, double p0, double p1) -> uint8_t {
        if (idx < j - 1) return prefix[static_cast<size_t>(idx)];
        if (idx == j - 1) out = {p0, p1};
        return p1 > p0 ? 1 : 0;
    });
    return out;
}

enum class FillMode : uint8_t { Hold, Deterministic, Random };

// Visits indices in order; `Hold` copies the provided bit, `Deterministic`
// commits the argmax of the conditional, `Random` samples from it.
inline Bits sc_fill(const ScEngine& eng, const std::vector<FillMode>& modes, const Bits& held,
                    const std::vector<int>& sigma, RandomSource& src, Bits* symbol_out = nullptr) {
    if (static_cast<int>(modes.size()) != eng.n() || held.size() != modes.size())
        throw ValidationError("sc_fill: mode/held length mismatch");
    Bits decided(static_cast<size_t>(eng.n()));
    Bits x = eng.run(sigma, [&](int idx, double p0, double p1) -> uint8_t {
        uint8_t b;
        switch (modes[static_cast<size_t>(idx)]) {
            case FillMode::Hold: b = held[static_cast<size_t>(idx)]; break;
            case FillMode::Deterministic: b = p1 > p0 ? 1 : 0; break;
            default: b = src.bernoulli(p1); break;
        }
        decided[static_cast<size_t>(idx)] = b;
        return b;
    });
    if (symbol_out) *symbol_out = x;
    return decided;
}

// Fills unknown positions by successive argmax given observations and the
// known positions (any superset of the complement of the layer's low set).
inline Bits sc_decode(const ScEngine& eng, const std::vector<uint8_t>& known_mask, const Bits& known,
                      const std::vector<int>& sigma, bool lenient = false) {
    if (static_cast<int>(known_mask.size()) != eng.n() || known.size() != known_mask.size())
        throw ValidationError("sc_decode: known mask length mismatch");
    Bits decided(static_cast<size_t>(eng.n()));
    eng.run(sigma, [&](int idx, double p0, double p1) -> uint8_t {
        uint8_t b = known_mask[static_cast<size_t>(idx)] ? known[static_cast<size_t>(idx)]
                                                         : (p1 > p0 ? 1 : 0);
        decided[static_cast<size_t>(idx)] = b;
        return b;
    }, lenient);
    return decided;
}

}  // namespace wtpolar
