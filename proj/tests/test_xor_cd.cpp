#include <bit>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pnc/bp_upnc.hpp"
#include "pnc/jt_cnc.hpp"
#include "pnc/xor_cd.hpp"
#include "support.hpp"

using namespace pnc;
using testsupport::random_packet;
using testsupport::uniform;

TEST_SUITE("xor_cd") {

TEST_CASE("stage 1 on noiseless frames gives indicators at the coded xor")
{
    Xoshiro256ss rng(21);
    for (auto mod : {Modulation::bpsk, Modulation::qpsk}) {
        const Constellation c(mod);
        const auto cfg = make_ra_config(30, 3, 2);
        const auto xa = encode(random_packet(mod, 30, rng), cfg);
        const auto xb = encode(random_packet(mod, 30, rng), cfg);
        for (double delta : {0.0, 0.5}) {
            ChannelParams p;
            p.delta = delta;
            p.phi = std::numbers::pi / 8;
            p.es_n0_db = 40.0;
            const auto tables = xor_cd_stage1(transmit(xa, xb, p, rng, true), p, c);
            const auto x = xor_packets(xa, xb);
            REQUIRE(tables.size() == x.size());
            for (std::size_t n = 0; n < x.size(); ++n) {
                CHECK(tables[n].p[x.symbols[n]] > 1.0 - 1e-9);
                CHECK(argmax(tables[n], c) == x.symbols[n]);
            }
        }
    }
}

TEST_CASE("stage 1 equals the exhaustive xor posteriors on small frames")
{
    Xoshiro256ss rng(22);
    for (int trial = 0; trial < 60; ++trial) {
        const auto mod = trial % 2 ? Modulation::qpsk : Modulation::bpsk;
        const Constellation c(mod);
        const std::size_t n = 1 + rng.below(4);
        ChannelParams p;
        p.delta = uniform(rng, 0.05, 0.95);
        p.phi = uniform(rng, 0.0, 6.2);
        p.es_n0_db = uniform(rng, 0.0, 10.0);
        const auto f = transmit(random_packet(mod, n, rng), random_packet(mod, n, rng), p, rng);
        const auto tables = xor_cd_stage1(f, p, c);
        const auto ref = oracle::pair_posteriors(testsupport::bps(mod), f.samples, f.variances, p.phi);
        for (std::size_t i = 0; i < n; ++i) {
            const auto x = oracle::xor_group(ref[i], c.size());
            for (int s = 0; s < c.size(); ++s)
                CHECK(std::abs(tables[i].p[std::size_t(s)] - x[std::size_t(s)]) < 1e-9);
        }
    }
}

TEST_CASE("stage 1 with no information is uniform")
{
    Xoshiro256ss rng(23);
    const Constellation c(Modulation::qpsk);
    ChannelParams p;
    p.delta = 0.5;
    p.es_n0_db = -90.0;
    const auto xa = random_packet(Modulation::qpsk, 9, rng);
    const auto tables = xor_cd_stage1(transmit(xa, xa, p, rng, true), p, c);
    for (const auto& t : tables)
        for (double v : t.values())
            CHECK(v == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("end to end on noiseless frames")
{
    Xoshiro256ss rng(24);
    for (int i = 0; i < 12; ++i) {
        const auto mod = i % 2 ? Modulation::qpsk : Modulation::bpsk;
        const auto cfg = make_ra_config(40, 3, rng());
        const auto sa = random_packet(mod, 40, rng);
        const auto sb = random_packet(mod, 40, rng);
        ChannelParams p;
        p.delta = i % 3 == 0 ? 0.0 : 0.5;
        p.phi = (i % 4) * std::numbers::pi / 8;
        p.es_n0_db = 40.0;
        const auto f = transmit(encode(sa, cfg), encode(sb, cfg), p, rng, true);
        const auto r = decode_xorcd(f, p, cfg);
        CHECK(r.xor_sources.symbols == xor_packets(sa, sb).symbols);
        CHECK(r.stage1_tables.size() == cfg.n());
        CHECK(r.converged);
    }
}

TEST_CASE("stage 2 depends on the frame only through the stage-1 tables")
{
    Xoshiro256ss rng(25);
    const Constellation c(Modulation::qpsk);
    const auto cfg = make_ra_config(50, 3, 4);
    ChannelParams p;
    p.delta = 0.5;
    p.phi = 0.4;
    p.es_n0_db = 1.0;
    const auto f = transmit(encode(random_packet(Modulation::qpsk, 50, rng), cfg),
                            encode(random_packet(Modulation::qpsk, 50, rng), cfg), p, rng);
    const auto whole = decode_xorcd(f, p, cfg);
    const auto injected = xor_cd_stage2(xor_cd_stage1(f, p, c), cfg, Modulation::qpsk);
    CHECK(whole.xor_sources.symbols == injected.xor_sources.symbols);
    CHECK(whole.iterations_used == injected.iterations_used);
    for (std::size_t m = 0; m < 50; ++m)
        for (int s = 0; s < 4; ++s)
            CHECK(whole.posteriors[m].p[std::size_t(s)] == injected.posteriors[m].p[std::size_t(s)]);
}

TEST_CASE("stage 2 tracks the exhaustive point-to-point MAP decoder")
{
    Xoshiro256ss rng(26);
    // Eb/N0 = 4 dB with Eb the energy per coded bit.
    const double es = 4.0 + 10.0 * std::log10(2.0);
    const Constellation c(Modulation::qpsk);
    std::size_t agree = 0, total = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto cfg = make_ra_config(2, 3, std::uint64_t(trial) + 1);
        ChannelParams p;
        p.delta = trial % 2 ? 0.5 : 0.0;
        p.phi = (trial / 2) % 2 ? std::numbers::pi / 4 : 0.0;
        p.es_n0_db = es;
        const auto f = transmit(encode(random_packet(Modulation::qpsk, 2, rng), cfg),
                                encode(random_packet(Modulation::qpsk, 2, rng), cfg), p, rng);
        const auto tables = xor_cd_stage1(f, p, c);
        const auto r = xor_cd_stage2(tables, cfg, Modulation::qpsk);
        std::vector<oracle::Table> ot;
        for (const auto& t : tables)
            ot.push_back(testsupport::as_vector(t));
        const auto ref = oracle::ra_map(ot, 4, 2, 3, cfg.interleaver);
        for (std::size_t m = 0; m < 2; ++m) {
            agree += int(r.xor_sources.symbols[m]) == oracle::argmax_label(ref[m]);
            ++total;
        }
    }
    MESSAGE("agreement " << double(agree) / double(total));
    CHECK(double(agree) / double(total) >= 0.97);
}

}

TEST_SUITE("paired_frames") {

TEST_CASE("Jt-CNC beats XOR-CD on identical frames inside the XOR-CD waterfall")
{
    const std::size_t m = 2048;
    const auto cfg = make_ra_config(m, 3, 1);
    const Constellation c(Modulation::qpsk);
    ChannelParams p;
    p.delta = 0.0;
    p.phi = std::numbers::pi / 4;
    // 8 dB is past both waterfalls (zero errors either way); 4.5 dB is not.
    p.es_n0_db = 4.5 + 10.0 * std::log10(2.0) - 10.0 * std::log10(3.0);
    auto g = build_graph(cfg, 2 * cfg.n() + 1, true, c);
    std::uint64_t jt = 0, xc = 0;
    for (int pkt = 0; pkt < 200; ++pkt) {
        Xoshiro256ss rng(mix64(std::uint64_t(pkt) + 1000));
        const auto sa = random_packet(Modulation::qpsk, m, rng);
        const auto sb = random_packet(Modulation::qpsk, m, rng);
        const auto f = transmit(encode(sa, cfg), encode(sb, cfg), p, rng);
        const auto truth = xor_packets(sa, sb);
        g.load_evidence(f, p);
        const auto d = g.iterate();
        const auto r = decode_xorcd(f, p, cfg);
        for (std::size_t i = 0; i < m; ++i) {
            jt += std::uint64_t(std::popcount(unsigned(d.xor_sources.symbols[i] ^ truth.symbols[i])));
            xc += std::uint64_t(std::popcount(unsigned(r.xor_sources.symbols[i] ^ truth.symbols[i])));
        }
    }
    MESSAGE("bit errors: Jt-CNC " << jt << ", XOR-CD " << xc);
    CHECK(jt < xc);
}

}
