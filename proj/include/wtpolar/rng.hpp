#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "wtpolar/errors.hpp"

namespace wtpolar {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_name(std::string_view name) {
    // FNV-1a
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// All randomness in a run is derived from one master seed by named stream
// splitting, so identical configs reproduce identical artifacts.
class RngStream {
public:
    RngStream() : eng_(0) {}
    RngStream(uint64_t master_seed, std::string_view name, uint64_t index = 0)
        : eng_(splitmix64(splitmix64(master_seed ^ hash_name(name)) ^ index)) {}

    uint8_t bit() { return static_cast<uint8_t>(eng_() & 1u); }

    uint8_t bernoulli(double p1) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(eng_) < p1 ? 1 : 0;
    }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

    uint64_t integer(uint64_t bound) {
        return std::uniform_int_distribution<uint64_t>(0, bound - 1)(eng_);
    }

    std::vector<uint8_t> bits(size_t len) {
        std::vector<uint8_t> out(len);
        for (auto& b : out) b = bit();
        return out;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

// Abstraction over the encoder's stochastic choices. The sampling
// implementation draws from an RngStream; the scripted one replays a fixed
// choice vector and records the probability of each choice, which lets the
// exact verifiers enumerate the full randomness space of one encoding.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual uint8_t bernoulli(double p1) = 0;
    uint8_t uniform_bit() { return bernoulli(0.5); }
    std::vector<uint8_t> uniform_bits(size_t len) {
        std::vector<uint8_t> out(len);
        for (auto& b : out) b = uniform_bit();
        return out;
    }
};

class SamplingSource final : public RandomSource {
public:
    explicit SamplingSource(RngStream stream) : stream_(std::move(stream)) {}
    uint8_t bernoulli(double p1) override { return stream_.bernoulli(p1); }

private:
    RngStream stream_;
};

class ScriptedSource final : public RandomSource {
public:
    explicit ScriptedSource(std::vector<uint8_t> script) : script_(std::move(script)) {}

    uint8_t bernoulli(double p1) override {
        if (cursor_ >= script_.size()) {
            overran_ = true;
            probs_.push_back(p1);
            return 0;
        }
        uint8_t b = script_[cursor_++];
        probs_.push_back(b ? p1 : 1.0 - p1);
        return b;
    }

    // Number of draws requested so far (script may be shorter on probe runs).
    size_t draws() const { return probs_.size(); }
    bool overran() const { return overran_; }

    double weight() const {
        double w = 1.0;
        for (double p : probs_) w *= p;
        return w;
    }
    const std::vector<double>& probs() const { return probs_; }

private:
    std::vector<uint8_t> script_;
    size_t cursor_ = 0;
    bool overran_ = false;
    std::vector<double> probs_;
};

}  // namespace wtpolar
