#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>
#include <vector>

#include "wtpolar/pipeline.hpp"

namespace wtpolar {

struct ChannelDraw {
    std::vector<std::vector<int>> y1, y2, z;  // per block, per symbol
};

// Memoryless use of the broadcast channel: outputs drawn i.i.d. per symbol
// from p(y1,y2,z | x).
inline ChannelDraw transmit(const std::vector<Bits>& x_blocks, const JointModel& m, RngStream& rng) {
    ChannelDraw out;
    std::vector<std::vector<double>> cum(2);
    int cells = m.ny1 * m.ny2 * m.nz;
    for (int x = 0; x < 2; ++x) {
        cum[static_cast<size_t>(x)].resize(static_cast<size_t>(cells));
        double acc = 0;
        for (int c = 0; c < cells; ++c) {
            acc += m.chan[static_cast<size_t>(x * cells + c)];
            cum[static_cast<size_t>(x)][static_cast<size_t>(c)] = acc;
        }
    }
    for (const Bits& xb : x_blocks) {
        std::vector<int> y1(xb.size()), y2(xb.size()), z(xb.size());
        for (size_t i = 0; i < xb.size(); ++i) {
            const auto& c = cum[xb[i]];
            double u = rng.uniform() * c.back();
            size_t cell = static_cast<size_t>(std::lower_bound(c.begin(), c.end(), u) - c.begin());
            if (cell >= c.size()) cell = c.size() - 1;
            int zc = static_cast<int>(cell) % m.nz;
            int y2c = (static_cast<int>(cell) / m.nz) % m.ny2;
            int y1c = static_cast<int>(cell) / (m.nz * m.ny2);
            y1[i] = y1c;
            y2[i] = y2c;
            z[i] = zc;
        }
        out.y1.push_back(std::move(y1));
        out.y2.push_back(std::move(y2));
        out.z.push_back(std::move(z));
    }
    return out;
}

struct ExperimentConfig {
    CodeConfig code;
    int corner = 1;
    int trials = 100;
    int threads = 0;  // 0 = hardware
};

struct ExperimentReport {
    int trials = 0;
    int errors[2] = {0, 0};  // joint (W,S) mismatches per receiver (user labels)
    double error_rate(int ell) const { return trials ? static_cast<double>(errors[ell - 1]) / trials : 0.0; }
    EmpiricalRates rates;
    bool swapped = false;
    double runtime_seconds = 0;
};

// One end-to-end trial: draw keys and messages, encode, push through the
// channel, decode at both receivers, compare jointly per receiver.
inline void run_one_trial(const Pipeline& p, uint64_t seed, uint64_t trial, bool err_out[2]) {
    SamplingSource src(RngStream(seed, "trial", trial));
    KeyRing keys = generate_keys(p.plan, p.outer, p.cfg, src);
    MessageSet msgs = draw_messages(p.plan, p.outer, src);
    ChainTransmission tx = encode_chain(msgs, p.plan, p.outer, keys, p.model, p.cfg, src);
    RngStream chan_rng(seed, "channel", trial);
    ChannelDraw ch = transmit(tx.X, p.model, chan_rng);
    for (int ell = 1; ell <= 2; ++ell) {
        ReceiverView view = make_receiver_view(tx, keys, ell, ell == 1 ? ch.y1 : ch.y2);
        DecodeResult dec = decode_receiver(view, p.plan, p.outer, p.model);
        err_out[ell - 1] = !messages_match(msgs, dec, ell, p.corner);
    }
}

inline ExperimentReport run_trials(const Pipeline& p, const ExperimentConfig& ec) {
    if (ec.trials < 1) throw ValidationError("trial count must be >= 1");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::array<uint8_t, 2>> results(static_cast<size_t>(ec.trials));
    int nthreads = ec.threads > 0 ? ec.threads
                                  : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nthreads = std::min<int>(nthreads, ec.trials);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr fail;
    std::mutex fail_mu;
    for (int w = 0; w < nthreads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                int t = next.fetch_add(1);
                if (t >= ec.trials) return;
                bool err[2] = {false, false};
                try {
                    run_one_trial(p, p.cfg.seed, static_cast<uint64_t>(t), err);
                } catch (...) {
                    std::lock_guard<std::mutex> g(fail_mu);
                    if (!fail) fail = std::current_exception();
                    return;
                }
                results[static_cast<size_t>(t)] = {static_cast<uint8_t>(err[0]), static_cast<uint8_t>(err[1])};
            }
        });
    for (auto& th : pool) th.join();
    if (fail) std::rethrow_exception(fail);

    ExperimentReport rep;
    rep.trials = ec.trials;
    rep.swapped = p.swapped;
    for (const auto& r : results) {
        // relabel back to the caller's receiver indices
        int e1 = r[0], e2 = r[1];
        if (p.swapped) std::swap(e1, e2);
        rep.errors[0] += e1;
        rep.errors[1] += e2;
    }
    rep.rates = empirical_rates(p.plan, p.outer);
    if (p.swapped) {
        std::swap(rep.rates.rates.rs[0], rep.rates.rates.rs[1]);
        std::swap(rep.rates.rates.rw[0], rep.rates.rates.rw[1]);
    }
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace wtpolar
