#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "pnc/pnc.h"

namespace {

constexpr double pi = std::numbers::pi;

void check(pnc_status s, const char* what)
{
    if (s != PNC_OK)
        throw std::runtime_error(std::string(what) + ": " + pnc_last_error());
}

struct Frame {
    pnc_frame* f = nullptr;
    Frame() = default;
    Frame(const Frame&) = delete;
    Frame& operator=(const Frame&) = delete;
    ~Frame() { pnc_frame_destroy(f); }
};

struct Code {
    pnc_code* c = nullptr;
    Code() = default;
    Code(const Code&) = delete;
    Code& operator=(const Code&) = delete;
    ~Code() { pnc_code_destroy(c); }
};

std::vector<std::uint8_t> random_labels(std::mt19937_64& rng, int k, std::size_t n)
{
    std::vector<std::uint8_t> v(n);
    for (auto& l : v)
        l = std::uint8_t(rng() % std::uint64_t(k));
    return v;
}

// Sample vector and per-sample variances as the channel model defines them.
void observations(const Frame& fr, double delta, double esn0, std::vector<oracle::cd>& y,
                  std::vector<double>& var)
{
    std::size_t ns = 0;
    check(pnc_frame_sample_count(fr.f, &ns), "sample count");
    std::vector<double> raw(2 * ns);
    check(pnc_frame_samples(fr.f, raw.data(), raw.size()), "samples");
    const double s2 = std::pow(10.0, -esn0 / 10.0) / 2.0;
    const bool sync = delta < 1e-6;
    y.resize(ns);
    var.resize(ns);
    for (std::size_t k = 0; k < ns; ++k) {
        y[k] = {raw[2 * k], raw[2 * k + 1]};
        if (sync)
            var[k] = k % 2 == 0 ? std::numeric_limits<double>::infinity() : s2;
        else
            var[k] = k % 2 == 0 ? s2 / delta : s2 / (1.0 - delta);
    }
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Line {
    std::ostream& out;
    int failures = 0;
    void report(bool ok, const std::string& name, const std::string& detail)
    {
        out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
        failures += ok ? 0 : 1;
    }
};

void tree_exactness(Line& line, bool quick)
{
    std::mt19937_64 rng(11);
    const double deltas[] = {0.1, 0.5, 0.9};
    const double phis[] = {0.0, pi / 8, pi / 4};
    const int frames = quick ? 60 : 500;
    double worst = 0.0;
    for (int t = 0; t < frames; ++t) {
        const bool qpsk = t % 2 == 1;
        const int k = qpsk ? 4 : 2;
        const std::size_t n = 1 + rng() % (qpsk ? 5 : 6);
        const double delta = deltas[rng() % 3];
        const double phi = phis[rng() % 3];
        const double esn0 = -2.0 + 14.0 * double(rng() % 1000) / 1000.0;
        const auto a = random_labels(rng, k, n);
        const auto b = random_labels(rng, k, n);
        Frame fr;
        check(pnc_frame_transmit_symbols(qpsk ? PNC_QPSK : PNC_BPSK, a.data(), b.data(), n, delta, phi, esn0,
                                         rng(), 0, &fr.f),
              "transmit");
        std::vector<double> post(n * std::size_t(k * k));
        check(pnc_upnc_posteriors(fr.f, post.data(), post.size()), "posteriors");
        std::vector<oracle::cd> y;
        std::vector<double> var;
        observations(fr, delta, esn0, y, var);
        const auto ref = oracle::pair_posteriors(qpsk ? 2 : 1, y, var, phi);
        for (std::size_t i = 0; i < n; ++i)
            for (int e = 0; e < k * k; ++e)
                worst = std::max(worst, std::abs(post[i * std::size_t(k * k) + std::size_t(e)] - ref[i][std::size_t(e)]));
    }
    line.report(worst < 1e-9, "upnc-tree-exactness",
                std::to_string(frames) + " frames, max abs diff " + fmt(worst));
}

// Loopy decoders on M = 2, q = 3 QPSK codes against exhaustive MAP.
void loopy_agreement(Line& line, bool quick)
{
    std::mt19937_64 rng(23);
    const double deltas[] = {0.0, 0.5};
    const double phis[] = {0.0, pi / 4};
    const int trials = quick ? 100 : 1000;
    const double esn0 = 4.0 + 10.0 * std::log10(2.0);
    int jt_agree = 0, xc_agree = 0, total = 0;
    for (int t = 0; t < trials; ++t) {
        const double delta = deltas[t % 2];
        const double phi = phis[(t / 2) % 2];
        Code code;
        check(pnc_code_create(2, 3, rng(), &code.c), "code");
        std::vector<std::uint32_t> perm(6);
        check(pnc_code_interleaver(code.c, perm.data(), perm.size()), "interleaver");
        const auto sa = random_labels(rng, 4, 2);
        const auto sb = random_labels(rng, 4, 2);
        std::vector<std::uint8_t> xa(6), xb(6);
        check(pnc_code_encode(code.c, PNC_QPSK, sa.data(), 2, xa.data(), 6), "encode");
        check(pnc_code_encode(code.c, PNC_QPSK, sb.data(), 2, xb.data(), 6), "encode");
        Frame fr;
        check(pnc_frame_transmit_symbols(PNC_QPSK, xa.data(), xb.data(), 6, delta, phi, esn0, rng(), 0, &fr.f),
              "transmit");
        std::uint8_t jt[2], xc[2];
        check(pnc_jtcnc_decode(code.c, fr.f, 50, 1e-6, jt, 2, nullptr), "jtcnc");
        check(pnc_xorcd_decode(code.c, fr.f, 50, 1e-6, xc, 2, nullptr), "xorcd");

        std::vector<oracle::cd> y;
        std::vector<double> var;
        observations(fr, delta, esn0, y, var);
        const auto joint = oracle::joint_map_xor(2, y, var, phi, 2, 3, perm);
        // Stage-1 tables from the library; their exactness is the first check.
        std::vector<double> post(6 * 16);
        check(pnc_upnc_posteriors(fr.f, post.data(), post.size()), "posteriors");
        std::vector<oracle::Table> xt;
        for (std::size_t n = 0; n < 6; ++n)
            xt.push_back(oracle::xor_group(oracle::Table(post.begin() + long(16 * n), post.begin() + long(16 * n + 16)), 4));
        const auto stage2 = oracle::ra_map(xt, 4, 2, 3, perm);
        for (int m = 0; m < 2; ++m) {
            jt_agree += int(jt[m]) == oracle::argmax_label(joint[std::size_t(m)]);
            xc_agree += int(xc[m]) == oracle::argmax_label(stage2[std::size_t(m)]);
            ++total;
        }
    }
    const double jr = double(jt_agree) / total, xr = double(xc_agree) / total;
    line.report(jr >= 0.98, "jtcnc-vs-joint-map", std::to_string(trials) + " trials, agreement " + fmt(jr));
    line.report(xr >= 0.97, "xorcd-vs-stage2-map", std::to_string(trials) + " trials, agreement " + fmt(xr));
}

void sync_ber(Line& line, bool quick)
{
    pnc_sweep* s = nullptr;
    check(pnc_sweep_create(PNC_SCHEME_SYNC, PNC_BPSK, &s), "sweep");
    const double zero = 0.0, eb = 7.0;
    pnc_ber_record r{};
    try {
        check(pnc_sweep_set_deltas(s, &zero, 1), "deltas");
        check(pnc_sweep_set_phis(s, &zero, 1), "phis");
        check(pnc_sweep_set_ebn0(s, &eb, 1), "ebn0");
        check(pnc_sweep_set_packets(s, quick ? 200 : 2000), "packets");
        check(pnc_sweep_set_bits(s, 2048), "bits");
        check(pnc_sweep_run(s, nullptr, 0), "run");
        check(pnc_sweep_record(s, 0, &r), "record");
    } catch (...) {
        pnc_sweep_destroy(s);
        throw;
    }
    pnc_sweep_destroy(s);
    const double ref = oracle::sync_bpsk_xor_ber(std::pow(10.0, -eb / 10.0) / 2.0);
    const double ratio = r.ber / ref;
    line.report(ratio >= 1.0 / 3.0 && ratio <= 3.0, "sync-bpsk-ber-vs-integration",
                "measured " + fmt(r.ber) + ", integrated " + fmt(ref));
}

void noiseless(Line& line, bool quick)
{
    std::mt19937_64 rng(5);
    const double deltas[] = {0.0, 0.5};
    const double phis[] = {0.0, pi / 8, pi / 4, 3 * pi / 8, pi / 2};
    const int frames = quick ? 2 : 10;
    int errors = 0, decodes = 0;
    for (pnc_modulation mod : {PNC_BPSK, PNC_QPSK}) {
        const int k = mod == PNC_QPSK ? 4 : 2;
        Code code;
        check(pnc_code_create(64, 3, 9, &code.c), "code");
        for (double delta : deltas)
            for (double phi : phis) {
                // Aligned QPSK at pi/2 maps (a, b) and (jb, -ja) onto the same
                // sample with different XORs; no decoder can resolve it.
                if (mod == PNC_QPSK && delta == 0.0 && phi == pi / 2)
                    continue;
                for (int t = 0; t < frames; ++t) {
                    const auto a = random_labels(rng, k, 64);
                    const auto b = random_labels(rng, k, 64);
                    std::vector<std::uint8_t> truth(64), out(64), xa(192), xb(192);
                    for (std::size_t i = 0; i < 64; ++i)
                        truth[i] = std::uint8_t(a[i] ^ b[i]);
                    auto count = [&] {
                        ++decodes;
                        errors += int(!std::equal(out.begin(), out.end(), truth.begin()));
                    };
                    {
                        Frame fr;
                        check(pnc_frame_transmit_symbols(mod, a.data(), b.data(), 64, delta, phi, 30.0, 0, 1, &fr.f),
                              "transmit");
                        check(pnc_upnc_decide(fr.f, out.data(), 64), "upnc");
                        count();
                        if (delta == 0.0 && phi == 0.0) {
                            check(pnc_sync_decide(fr.f, out.data(), 64), "sync");
                            count();
                        }
                    }
                    check(pnc_code_encode(code.c, mod, a.data(), 64, xa.data(), 192), "encode");
                    check(pnc_code_encode(code.c, mod, b.data(), 64, xb.data(), 192), "encode");
                    Frame fr;
                    check(pnc_frame_transmit_symbols(mod, xa.data(), xb.data(), 192, delta, phi, 30.0, 0, 1, &fr.f),
                          "transmit");
                    check(pnc_jtcnc_decode(code.c, fr.f, 50, 1e-6, out.data(), 64, nullptr), "jtcnc");
                    count();
                    check(pnc_xorcd_decode(code.c, fr.f, 50, 1e-6, out.data(), 64, nullptr), "xorcd");
                    count();
                }
            }
    }
    line.report(errors == 0, "noiseless-round-trips",
                std::to_string(decodes) + " decodes, " + std::to_string(errors) + " with errors");
}

}  // namespace

int run_verify(bool quick, std::ostream& out)
{
    Line line{out};
    tree_exactness(line, quick);
    loopy_agreement(line, quick);
    sync_ber(line, quick);
    noiseless(line, quick);
    return line.failures;
}
