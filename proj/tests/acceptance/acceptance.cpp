// Acceptance suite. `pnc_acceptance <n>` runs criterion n, no argument runs
// all of them. Each criterion ends with exactly one line
//   criterion <n> PASS|FAIL: <summary>
// and indented trace lines before it show the points that were simulated.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "oracle.hpp"
#include "pnc/bp_upnc.hpp"
#include "pnc/jt_cnc.hpp"
#include "pnc/sim.hpp"
#include "pnc/xor_cd.hpp"
#include "support.hpp"

using namespace pnc;
using testsupport::random_packet;
using testsupport::uniform;

namespace {

constexpr double pi = std::numbers::pi;
const double phi_grid[] = {0.0, pi / 8, pi / 4, 3 * pi / 8, pi / 2};

struct Verdict {
    bool pass = false;
    std::string summary;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---- BER curves ----

SweepConfig desk_config(Scheme scheme, Modulation mod)
{
    SweepConfig cfg;
    cfg.scheme = scheme;
    cfg.modulation = mod;
    cfg.master_seed = 2024;
    if (is_coded(scheme)) {
        cfg.packets_per_point = 1000;
        cfg.bits_per_packet = mod == Modulation::qpsk ? 4096 : 2048;
    } else {
        cfg.packets_per_point = 2000;
        cfg.bits_per_packet = 2048;
    }
    return cfg;
}

// Simulated points, shared between criteria run in one process.
std::map<std::tuple<int, int, double, double, double>, BerRecord> point_cache;

// BER at one grid point. Packets run in chunks; a point whose BER is already
// known to sit far above the target stops early, since only its rough level
// matters to the search.
BerRecord evaluate(const SweepConfig& cfg, double delta, double phi, double eb, double target)
{
    const auto key = std::make_tuple(int(cfg.scheme), int(cfg.modulation), delta, phi, eb);
    if (auto it = point_cache.find(key); it != point_cache.end())
        return it->second;
    const std::uint64_t chunk = is_coded(cfg.scheme) ? 100 : 500;
    BerRecord r;
    r.scheme = cfg.scheme;
    r.modulation = cfg.modulation;
    r.delta = delta;
    r.phi = phi;
    r.ebn0_db = eb;
    for (std::uint64_t first = 0; first < cfg.packets_per_point; first += chunk) {
        const auto n = std::min<std::uint64_t>(chunk, cfg.packets_per_point - first);
        for (const auto& o : run_trials(cfg, delta, phi, eb, first, n)) {
            r.bit_errors += o.bit_errors;
            r.total_bits += o.bits;
            r.nonconverged += o.converged ? 0 : 1;
        }
        r.packets += n;
        if (wilson_ci95(r.bit_errors, r.total_bits).first > 10.0 * target)
            break;
    }
    r.ber = double(r.bit_errors) / double(r.total_bits);
    std::tie(r.ci_lo, r.ci_hi) = wilson_ci95(r.bit_errors, r.total_bits);
    std::printf("    %-5s %s delta=%.2f phi=%.4f ebn0=%5.2f dB  ber=%.3e  errors=%llu  packets=%llu  nonconv=%llu\n",
                std::string(to_string(cfg.scheme)).c_str(), std::string(to_string(cfg.modulation)).c_str(), delta,
                phi, eb, r.ber, static_cast<unsigned long long>(r.bit_errors),
                static_cast<unsigned long long>(r.packets), static_cast<unsigned long long>(r.nonconverged));
    std::fflush(stdout);
    point_cache[key] = r;
    return r;
}

struct Crossing {
    bool found = false;
    double ebn0 = 0.0;
};

// Eb/N0 where the curve crosses `target`, by walking a 0.5 dB grid from
// `guess` until two neighbours bracket it and interpolating log10(BER)
// linearly between them. A zero-error point counts as half an error.
Crossing crossing(const SweepConfig& cfg, double delta, double phi, double target, double guess, double lo,
                  double hi)
{
    constexpr double step = 0.5;
    auto ber_of = [&](double eb) {
        const auto r = evaluate(cfg, delta, phi, eb, target);
        return std::max(r.ber, 0.5 / double(r.total_bits));
    };
    double x = std::round(guess / step) * step;
    double b = ber_of(x);
    std::vector<double> history{b};
    if (b > target) {
        while (true) {
            const double nx = x + step;
            if (nx > hi)
                return {};
            const double nb = ber_of(nx);
            history.push_back(nb);
            if (nb <= target)
                return {true, x + step * (std::log10(b) - std::log10(target)) / (std::log10(b) - std::log10(nb))};
            // A curve that has not halved over 3 dB has hit a floor.
            if (history.size() > 6 && nb > 0.5 * history[history.size() - 7])
                return {};
            x = nx;
            b = nb;
        }
    }
    while (true) {
        const double nx = x - step;
        if (nx < lo)
            return {};
        const double nb = ber_of(nx);
        if (nb > target)
            return {true, nx + step * (std::log10(nb) - std::log10(target)) / (std::log10(nb) - std::log10(b))};
        x = nx;
        b = nb;
    }
}

std::string at(const Crossing& c)
{
    return c.found ? fmt("%.2f dB", c.ebn0) : std::string("not reached");
}

Crossing uncoded(Scheme s, Modulation m, double delta, double phi, double target, double guess)
{
    return crossing(desk_config(s, m), delta, phi, target, guess, -4.0, 30.0);
}

Crossing coded(Scheme s, Modulation m, double delta, double phi, double target, double guess)
{
    return crossing(desk_config(s, m), delta, phi, target, guess, -4.0, 12.0);
}

// ---- criteria ----

Verdict c1_tree_exactness()
{
    const auto t0 = Clock::now();
    Xoshiro256ss rng(101);
    const double deltas[] = {0.1, 0.5, 0.9};
    const double phis[] = {0.0, pi / 8, pi / 4};
    double worst = 0.0;
    int frames = 0, qpsk6 = 0;
    for (int t = 0; t < 500; ++t) {
        const auto mod = t % 2 ? Modulation::qpsk : Modulation::bpsk;
        // Every 25th QPSK frame takes the longest length; the others stay
        // short because the reference enumerates 16^N sequence pairs.
        std::size_t n = 1 + rng.below(mod == Modulation::qpsk ? 5 : 6);
        if (mod == Modulation::qpsk && t % 50 == 1) {
            n = 6;
            ++qpsk6;
        }
        ChannelParams p;
        p.delta = deltas[rng.below(3)];
        p.phi = phis[rng.below(3)];
        p.es_n0_db = uniform(rng, -2.0, 12.0);
        const auto f = transmit(random_packet(mod, n, rng), random_packet(mod, n, rng), p, rng);
        const Constellation c(mod);
        const auto post = upnc_posteriors(f, p, c);
        const auto ref = oracle::pair_posteriors(testsupport::bps(mod), f.samples, f.variances, p.phi);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t e = 0; e < ref[i].size(); ++e)
                worst = std::max(worst, std::abs(post[i].p[e] - ref[i][e]));
        ++frames;
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && secs < 60.0,
            fmt("%d frames (%d QPSK with N = 6), max |BP - exhaustive| = %.2e (limit 1e-9), %.1f s (limit 60 s)",
                frames, qpsk6, worst, secs)};
}

Verdict c2_bpsk_penalty()
{
    const auto sync = uncoded(Scheme::sync_bench, Modulation::bpsk, 0.0, 0.0, 1e-3, 7.0);
    const auto async = uncoded(Scheme::bp_upnc, Modulation::bpsk, 0.5, pi / 2, 1e-3, 7.0);
    if (!sync.found || !async.found)
        return {false, "BER 1e-3 not bracketed: sync " + at(sync) + ", async " + at(async)};
    const double penalty = async.ebn0 - sync.ebn0;
    return {penalty <= 0.8, fmt("BER 1e-3 at %.2f dB (sync) and %.2f dB (delta 0.5, phi pi/2): penalty %.2f dB "
                                "(limit 0.8 dB)",
                                sync.ebn0, async.ebn0, penalty)};
}

Verdict c3_qpsk_aligned_penalty()
{
    const auto sync = uncoded(Scheme::sync_bench, Modulation::qpsk, 0.0, 0.0, 1e-3, 7.5);
    const auto async = uncoded(Scheme::bp_upnc, Modulation::qpsk, 0.0, pi / 4, 1e-3, 13.5);
    if (!sync.found || !async.found)
        return {false, "BER 1e-3 not bracketed: sync " + at(sync) + ", async " + at(async)};
    const double penalty = async.ebn0 - sync.ebn0;
    return {penalty >= 5.0, fmt("BER 1e-3 at %.2f dB (sync) and %.2f dB (delta 0, phi pi/4): penalty %.2f dB "
                                "(needs >= 5 dB)",
                                sync.ebn0, async.ebn0, penalty)};
}

Verdict c4_qpsk_misaligned()
{
    const auto sync = uncoded(Scheme::sync_bench, Modulation::qpsk, 0.0, 0.0, 1e-3, 7.5);
    if (!sync.found)
        return {false, "sync benchmark did not reach 1e-3"};
    double worst = -1e9, best = 1e9;
    std::string list;
    for (double phi : phi_grid) {
        const auto c = uncoded(Scheme::bp_upnc, Modulation::qpsk, 0.5, phi, 1e-3, 8.0);
        if (!c.found)
            return {false, fmt("phi = %.4f did not reach 1e-3", phi)};
        worst = std::max(worst, c.ebn0);
        best = std::min(best, c.ebn0);
        list += fmt(" %.2f", c.ebn0);
    }
    const double penalty = worst - sync.ebn0, spread = worst - best;
    return {penalty <= 1.5 && spread <= 1.0,
            fmt("sync %.2f dB; delta 0.5 over 5 phases:%s dB; worst penalty %.2f dB (limit 1.5), spread %.2f dB "
                "(limit 1.0)",
                sync.ebn0, list.c_str(), penalty, spread)};
}

Verdict c5_phase_reward()
{
    const auto aligned = coded(Scheme::jt_cnc, Modulation::qpsk, 0.0, 0.0, 1e-4, 1.5);
    const auto rotated = coded(Scheme::jt_cnc, Modulation::qpsk, 0.0, pi / 4, 1e-4, 1.5);
    if (!aligned.found || !rotated.found)
        return {false, "BER 1e-4 not bracketed: phi 0 " + at(aligned) + ", phi pi/4 " + at(rotated)};
    const double reward = aligned.ebn0 - rotated.ebn0;
    return {reward >= 0.1 && reward <= 1.5,
            fmt("Jt-CNC QPSK delta 0: BER 1e-4 at %.2f dB (phi 0) and %.2f dB (phi pi/4): reward %.2f dB "
                "(needs [0.1, 1.5])",
                aligned.ebn0, rotated.ebn0, reward)};
}

Verdict c6_insensitivity()
{
    bool pass = true;
    std::string text;
    for (auto mod : {Modulation::bpsk, Modulation::qpsk}) {
        double best = 1e9, worst = -1e9;
        std::string missing;
        for (double delta : {0.0, 0.5})
            for (double phi : phi_grid) {
                const auto c = coded(Scheme::jt_cnc, mod, delta, phi, 1e-4, 1.5);
                if (!c.found) {
                    missing += fmt(" (delta %.1f, phi %.4f)", delta, phi);
                    continue;
                }
                best = std::min(best, c.ebn0);
                worst = std::max(worst, c.ebn0);
            }
        const double spread = worst - best;
        const bool ok = missing.empty() && spread <= 1.8;
        pass = pass && ok;
        text += fmt("%s%s: spread %.2f dB over the reached points", text.empty() ? "" : "; ",
                    std::string(to_string(mod)).c_str(), spread);
        if (!missing.empty())
            text += ", 1e-4 not reached at" + missing;
    }
    return {pass, text + " (limit 1.8 dB)"};
}

Verdict c7_joint_vs_disjoint()
{
    const auto jt = coded(Scheme::jt_cnc, Modulation::qpsk, 0.0, pi / 4, 1e-4, 1.5);
    const auto xc = coded(Scheme::xor_cd, Modulation::qpsk, 0.0, pi / 4, 1e-4, 4.5);
    if (!jt.found || !xc.found)
        return {false, "BER 1e-4 not bracketed: Jt-CNC " + at(jt) + ", XOR-CD " + at(xc)};
    const double gain = xc.ebn0 - jt.ebn0;
    return {gain >= 2.0, fmt("QPSK delta 0 phi pi/4: BER 1e-4 at %.2f dB (Jt-CNC) and %.2f dB (XOR-CD): gain %.2f "
                             "dB (needs >= 2 dB)",
                             jt.ebn0, xc.ebn0, gain)};
}

Verdict c8_loopy_agreement()
{
    Xoshiro256ss rng(808);
    // Eb is the energy per coded bit here.
    const double es = 4.0 + 10.0 * std::log10(2.0);
    const double deltas[] = {0.0, 0.5};
    const double phis[] = {0.0, pi / 4};
    const Constellation c(Modulation::qpsk);
    std::size_t jt_agree = 0, xc_agree = 0, total = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto cfg = make_ra_config(2, 3, rng());
        ChannelParams p;
        p.delta = deltas[trial % 2];
        p.phi = phis[(trial / 2) % 2];
        p.es_n0_db = es;
        const auto f = transmit(encode(random_packet(Modulation::qpsk, 2, rng), cfg),
                                encode(random_packet(Modulation::qpsk, 2, rng), cfg), p, rng);
        const auto jt = decode_jtcnc(f, p, cfg);
        const auto joint = oracle::joint_map_xor(2, f.samples, f.variances, p.phi, 2, 3, cfg.interleaver);

        const auto tables = xor_cd_stage1(f, p, c);
        const auto xc = xor_cd_stage2(tables, cfg, Modulation::qpsk);
        std::vector<oracle::Table> ot;
        for (const auto& t : tables)
            ot.push_back(testsupport::as_vector(t));
        const auto stage2 = oracle::ra_map(ot, 4, 2, 3, cfg.interleaver);
        for (std::size_t m = 0; m < 2; ++m) {
            jt_agree += int(jt.xor_sources.symbols[m]) == oracle::argmax_label(joint[m]);
            xc_agree += int(xc.xor_sources.symbols[m]) == oracle::argmax_label(stage2[m]);
            ++total;
        }
    }
    const double jr = double(jt_agree) / double(total), xr = double(xc_agree) / double(total);
    return {jr >= 0.98 && xr >= 0.97,
            fmt("1000 trials over delta {0, 0.5} x phi {0, pi/4}: Jt-CNC agrees with joint MAP on %.2f%% (needs 98%%), "
                "XOR-CD stage 2 with its MAP on %.2f%% (needs 97%%)",
                100.0 * jr, 100.0 * xr)};
}

Verdict c9_noiseless()
{
    const auto t0 = Clock::now();
    std::size_t frames = 0;
    std::string failures;
    for (auto scheme : {Scheme::sync_bench, Scheme::bp_upnc, Scheme::jt_cnc, Scheme::xor_cd})
        for (auto mod : {Modulation::bpsk, Modulation::qpsk}) {
            auto cfg = desk_config(scheme, mod);
            cfg.bits_per_packet = 128;
            const std::optional<RaConfig> ra =
                is_coded(scheme) ? std::optional<RaConfig>(cfg.ra_config()) : std::nullopt;
            auto decode = default_decoder_factory(cfg)();
            for (double delta : {0.0, 0.5})
                for (double phi : phi_grid) {
                    if (scheme == Scheme::sync_bench && (delta != 0.0 || phi != 0.0))
                        continue;
                    int bad = 0;
                    for (std::uint64_t t = 0; t < 100; ++t) {
                        const auto trial = make_trial(cfg, ra ? &*ra : nullptr, delta, phi, 30.0, t, true);
                        bool conv = true;
                        const auto d = decode(trial, conv);
                        const auto truth = is_coded(scheme) ? xor_packets(trial.source_a, trial.source_b)
                                                            : xor_packets(trial.code_a, trial.code_b);
                        bad += d.symbols != truth.symbols;
                        ++frames;
                    }
                    if (bad)
                        failures += fmt(" %s/%s(delta %.1f, phi %.4f): %d/100", std::string(to_string(scheme)).c_str(),
                                        std::string(to_string(mod)).c_str(), delta, phi, bad);
                }
        }
    const double secs = seconds_since(t0);
    return {failures.empty() && secs < 10.0,
            fmt("%zu noiseless frames in %.1f s (limit 10 s); ", frames, secs) +
                (failures.empty() ? std::string("no frame with errors") : "frames with errors:" + failures)};
}

Verdict c10_determinism()
{
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / fmt("pnc_acceptance_%d", int(::getpid()));
    fs::create_directories(dir);
    std::vector<SweepConfig> configs;
    {
        auto cfg = desk_config(Scheme::bp_upnc, Modulation::qpsk);
        cfg.delta_list = {0.0, 0.5};
        cfg.phi_list = {0.0, pi / 4};
        cfg.ebn0_db_list = {2.0, 6.0};
        cfg.packets_per_point = 64;
        cfg.bits_per_packet = 512;
        configs.push_back(cfg);
        cfg = desk_config(Scheme::jt_cnc, Modulation::qpsk);
        cfg.delta_list = {0.5};
        cfg.phi_list = {pi / 8};
        cfg.ebn0_db_list = {0.0, 1.5};
        cfg.packets_per_point = 24;
        cfg.bits_per_packet = 512;
        configs.push_back(cfg);
        cfg.scheme = Scheme::xor_cd;
        configs.push_back(cfg);
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream is(p, std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    bool same = true;
    std::size_t rows = 0;
    const char* runs[][2] = {{"1", "4"}, {"4", "4"}, {"2", "3"}};
    for (std::size_t i = 0; i < configs.size(); ++i) {
        std::string first;
        for (std::size_t k = 0; k < 3; ++k) {
            ::setenv("PNC_SIM_THREADS", runs[k][0], 1);
            auto cfg = configs[i];
            cfg.threads = unsigned(std::atoi(runs[k][1]));
            const auto path = dir / fmt("run%zu_%zu.csv", i, k);
            rows += run_sweep(cfg, path).size();
            const auto bytes = slurp(path);
            if (k == 0)
                first = bytes;
            else
                same = same && bytes == first && !bytes.empty();
        }
    }
    ::unsetenv("PNC_SIM_THREADS");
    fs::remove_all(dir);
    return {same, fmt("3 sweep configs x 3 runs (PNC_SIM_THREADS 1, 4, 2), %zu rows: CSV files %s", rows,
                      same ? "byte-identical" : "DIFFER")};
}

const std::function<Verdict()> criteria[] = {
    c1_tree_exactness, c2_bpsk_penalty,      c3_qpsk_aligned_penalty, c4_qpsk_misaligned,
    c5_phase_reward,   c6_insensitivity,     c7_joint_vs_disjoint,    c8_loopy_agreement,
    c9_noiseless,      c10_determinism,
};

}  // namespace

int main(int argc, char** argv)
{
    std::vector<int> which;
    for (int i = 1; i < argc; ++i)
        which.push_back(std::atoi(argv[i]));
    if (which.empty())
        for (int i = 1; i <= 10; ++i)
            which.push_back(i);
    int failed = 0;
    for (int n : which) {
        if (n < 1 || n > 10) {
            std::fprintf(stderr, "no criterion %d\n", n);
            return 2;
        }
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = criteria[n - 1]();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d %s: %s [%.0f s]\n", n, v.pass ? "PASS" : "FAIL", v.summary.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    return failed ? 1 : 0;
}
