#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "testmodels.hpp"

using namespace wtpolar;
using Catch::Approx;

TEST_CASE("profile examples at n=2") {
    CodeConfig cfg;
    cfg.n = 2;
    cfg.method = ProfileMethod::Exact;
    SECTION("BEC(0.5): (0.75, 0.25)") {
        JointModel m = wtm::bec_on_v(0.5, 0.5, 0.5);
        EntropyProfile p = entropy_profile(m, "V", "Y1", cfg);
        REQUIRE(p.n() == 2);
        CHECK(p.h[0] == Approx(0.75).margin(1e-12));
        CHECK(p.h[1] == Approx(0.25).margin(1e-12));
    }
    SECTION("noiseless observation: all entries near zero") {
        JointModel m = wtm::bec_on_v(0.0, 0.5, 0.5);
        EntropyProfile p = entropy_profile(m, "V", "Y1", cfg);
        for (double h : p.h) CHECK(h <= 1e-9);
    }
    SECTION("no conditioning, uniform input: all ones") {
        JointModel m = wtm::bec_on_v(0.5, 0.5, 0.5);
        EntropyProfile p = entropy_profile(m, "V", "none", cfg);
        for (double h : p.h) CHECK(h == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("exact profile matches the closed-form erasure recursion") {
    JointModel m = wtm::bec_on_v(0.37, 0.5, 0.5);
    for (int n : {2, 8, 64, 1024}) {
        CodeConfig cfg;
        cfg.n = n;
        EntropyProfile p = entropy_profile(m, "V", "Y1", cfg);
        auto oracle = bec_erasure_profile(0.37, n);
        for (int j = 0; j < n; ++j)
            CHECK(p.h[static_cast<size_t>(j)] == Approx(oracle[static_cast<size_t>(j)]).margin(1e-9));
    }
}

TEST_CASE("chain rule: entropies sum to n times the source entropy") {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        JointModel m = wtm::random_generic_model(seed);
        double h = entropy(m, {Var::V});
        for (int n : {2, 4, 8, 16}) {
            CodeConfig cfg;
            cfg.n = n;
            cfg.exact_atom_cap = 1 << 16;
            EntropyProfile p = entropy_profile(m, "V", "none", cfg);
            double sum = std::accumulate(p.h.begin(), p.h.end(), 0.0);
            CHECK(sum == Approx(n * h).margin(1e-6));
        }
    }
}

TEST_CASE("chain rule with conditioning on a generic model") {
    JointModel m = wtm::random_generic_model(9, 2, 2, 2);
    double h = conditional_entropy(m, {Var::V}, {Var::Z});
    CodeConfig cfg;
    cfg.n = 8;
    cfg.exact_atom_cap = 1 << 16;
    EntropyProfile p = entropy_profile(m, "V", "Z", cfg);
    CHECK(std::accumulate(p.h.begin(), p.h.end(), 0.0) == Approx(8 * h).margin(1e-6));
}

TEST_CASE("monte carlo profile agrees with the exact profile") {
    JointModel m = wtm::random_generic_model(14);
    CodeConfig ex;
    ex.n = 16;
    ex.exact_atom_cap = 1 << 16;
    EntropyProfile pe = entropy_profile(m, "V", "Y1", ex);
    CodeConfig mc = ex;
    mc.method = ProfileMethod::MonteCarlo;
    mc.mc_samples = 20000;
    mc.seed = 5;
    EntropyProfile pm = entropy_profile(m, "V", "Y1", mc);
    for (int j = 0; j < 16; ++j)
        CHECK(pm.h[static_cast<size_t>(j)] == Approx(pe.h[static_cast<size_t>(j)]).margin(0.03));
    CHECK_FALSE(pm.sample_warning);
}

TEST_CASE("monte carlo flags too-small sample counts") {
    JointModel m = wtm::random_generic_model(14);
    CodeConfig mc;
    mc.n = 16;
    mc.method = ProfileMethod::MonteCarlo;
    mc.mc_samples = 20;
    EntropyProfile pm = entropy_profile(m, "V", "Y1", mc);
    CHECK(pm.sample_warning);
}

TEST_CASE("polarization trend on the erasure recursion oracle") {
    // Fraction of indices polarized past (0.1, 0.9) is nondecreasing from
    // n=8 up. (At n=4 the fraction transiently overshoots: 2 of 4 indices
    // sit outside (0.1,0.9) while at n=8 only 2 of 8 do.)
    double prev = -1;
    for (int n = 8; n <= 1024; n *= 2) {
        auto prof = bec_erasure_profile(0.5, n);
        int cnt = 0;
        for (double e : prof)
            if (e > 0.9 || e < 0.1) ++cnt;
        double frac = static_cast<double>(cnt) / n;
        CHECK(frac >= prev - 1e-12);
        prev = frac;
    }
    CHECK(prev >= 0.8);
}

TEST_CASE("state space cap raises on atom explosion") {
    JointModel m = wtm::random_generic_model(21);
    CodeConfig cfg;
    cfg.n = 256;
    cfg.exact_atom_cap = 64;
    CHECK_THROWS_AS(entropy_profile(m, "V", "Y1", cfg), StateSpaceTooLarge);
}

TEST_CASE("profile serialization round trip") {
    JointModel m = wtm::bec_on_v(0.4, 0.5, 0.5);
    CodeConfig cfg;
    cfg.n = 16;
    EntropyProfile p = entropy_profile(m, "V", "Z", cfg);
    EntropyProfile q = parse_profile(serialize_profile(p));
    CHECK(q.layer == p.layer);
    CHECK(q.cond == p.cond);
    REQUIRE(q.n() == p.n());
    for (int j = 0; j < p.n(); ++j)
        CHECK(q.h[static_cast<size_t>(j)] == Approx(p.h[static_cast<size_t>(j)]).margin(1e-15));
}

TEST_CASE("erasure-likeness detection") {
    JointModel bec = wtm::bec_on_v(0.4, 0.5, 0.5);
    double e = 0;
    CHECK(is_erasure_like(bec.source(Var::V, {Var::Y1}), &e));
    CHECK(e == Approx(0.4).margin(1e-12));
    JointModel gen = wtm::majority_model(0.3, 0.3, 0.3);
    CHECK_FALSE(is_erasure_like(gen.source(Var::V, {Var::Y1})));
}

TEST_CASE("code config validation") {
    CodeConfig cfg;
    cfg.n = 12;
    CHECK_THROWS_AS(cfg.validate(), LengthNotPowerOfTwo);
    cfg.n = 16;
    cfg.beta = 0.7;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.beta = 0.3;
    cfg.L = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.L = 2;
    cfg.method = ProfileMethod::MonteCarlo;
    cfg.mc_samples = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
