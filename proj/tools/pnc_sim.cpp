// pnc-sim: command-line front end over the C API.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pnc/pnc.h"
#include "verify.hpp"

namespace {

double parse_number(const std::string& s)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end)
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

// Plain numbers or multiples of pi: "0.3", "pi", "pi/4", "3pi/8", "0.5*pi".
double parse_angle(std::string s)
{
    const auto at = s.find("pi");
    if (at == std::string::npos)
        return parse_number(s);
    std::string coef = s.substr(0, at);
    if (!coef.empty() && coef.back() == '*')
        coef.pop_back();
    std::string rest = s.substr(at + 2);
    double v = std::numbers::pi * (coef.empty() ? 1.0 : parse_number(coef));
    if (!rest.empty()) {
        if (rest[0] != '/')
            throw std::invalid_argument("bad angle: '" + s + "'");
        v /= parse_number(rest.substr(1));
    }
    return v;
}

// "start:step:stop" (inclusive, computed without accumulating the step) or a
// single value.
std::vector<double> parse_range(const std::string& s)
{
    const auto c1 = s.find(':');
    if (c1 == std::string::npos)
        return {parse_number(s)};
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw std::invalid_argument("range must be start:step:stop");
    const double start = parse_number(s.substr(0, c1));
    const double step = parse_number(s.substr(c1 + 1, c2 - c1 - 1));
    const double stop = parse_number(s.substr(c2 + 1));
    if (!(step > 0.0) || stop < start)
        throw std::invalid_argument("range needs a positive step and stop >= start");
    const auto count = std::size_t(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> v;
    for (std::size_t i = 0; i < count; ++i)
        v.push_back(start + double(i) * step);
    return v;
}

struct SweepArgs {
    std::string scheme = "upnc";
    std::string mod = "bpsk";
    std::vector<std::string> delta{"0"};
    std::vector<std::string> phi{"0"};
    std::vector<std::string> ebn0{"0:1:10"};
    std::uint64_t packets = 0;
    std::uint64_t bits = 0;
    std::uint64_t seed = 1;
    int q = 3;
    std::uint64_t interleaver_seed = 1;
    int iters = 50;
    double tol = 1e-6;
    unsigned threads = 0;
    bool rate_shift = true;
    std::string out;
    bool resume = false;
};

void ok(pnc_status s)
{
    if (s != PNC_OK)
        throw std::runtime_error(pnc_last_error());
}

int run_sweep(const SweepArgs& a)
{
    const pnc_scheme scheme = a.scheme == "sync"    ? PNC_SCHEME_SYNC
                              : a.scheme == "upnc"  ? PNC_SCHEME_UPNC
                              : a.scheme == "jtcnc" ? PNC_SCHEME_JTCNC
                                                    : PNC_SCHEME_XORCD;
    const pnc_modulation mod = a.mod == "qpsk" ? PNC_QPSK : PNC_BPSK;

    std::vector<double> deltas, phis, ebn0;
    for (const auto& s : a.delta)
        deltas.push_back(parse_number(s));
    for (const auto& s : a.phi)
        phis.push_back(parse_angle(s));
    for (const auto& s : a.ebn0)
        for (double v : parse_range(s))
            ebn0.push_back(v);

    pnc_sweep* sw = nullptr;
    ok(pnc_sweep_create(scheme, mod, &sw));
    std::unique_ptr<pnc_sweep, void (*)(pnc_sweep*)> guard(sw, pnc_sweep_destroy);
    ok(pnc_sweep_set_deltas(sw, deltas.data(), deltas.size()));
    ok(pnc_sweep_set_phis(sw, phis.data(), phis.size()));
    ok(pnc_sweep_set_ebn0(sw, ebn0.data(), ebn0.size()));
    if (a.packets)
        ok(pnc_sweep_set_packets(sw, a.packets));
    if (a.bits)
        ok(pnc_sweep_set_bits(sw, a.bits));
    ok(pnc_sweep_set_seed(sw, a.seed));
    ok(pnc_sweep_set_code(sw, a.q, a.interleaver_seed));
    ok(pnc_sweep_set_limits(sw, a.iters, a.tol));
    ok(pnc_sweep_set_threads(sw, a.threads));
    ok(pnc_sweep_set_rate_shift(sw, a.rate_shift ? 1 : 0));
    ok(pnc_sweep_run(sw, a.out.empty() ? nullptr : a.out.c_str(), a.resume ? 1 : 0));

    size_t n = 0;
    ok(pnc_sweep_record_count(sw, &n));
    std::printf("%8s %8s %8s %12s %12s %8s\n", "delta", "phi", "ebn0_db", "ber", "bit_errors", "nonconv");
    for (size_t i = 0; i < n; ++i) {
        pnc_ber_record r{};
        ok(pnc_sweep_record(sw, i, &r));
        std::printf("%8.4f %8.4f %8.2f %12.4e %12llu %8llu\n", r.delta, r.phi, r.ebn0_db, r.ber,
                    static_cast<unsigned long long>(r.bit_errors), static_cast<unsigned long long>(r.nonconverged));
    }
    return 0;
}

struct Cli {
    CLI::App app{"Asynchronous physical-layer network coding simulator"};
    SweepArgs sa;
    std::string config;
    bool quick = false;
    std::string csv, dir;
    CLI::App* sweep = nullptr;
    CLI::App* verify = nullptr;

    Cli()
    {
        app.require_subcommand(1);
        sweep = app.add_subcommand("sweep", "Monte Carlo BER sweep over delta x phi x Eb/N0");
        sweep->add_option("--config", config, "key=value file mirroring the long flags; flags override it");
        sweep->add_option("--scheme", sa.scheme, "Decoder")
            ->check(CLI::IsMember({"sync", "upnc", "jtcnc", "xorcd"}))
            ->capture_default_str();
        sweep->add_option("--mod", sa.mod, "Modulation")->check(CLI::IsMember({"bpsk", "qpsk"}))->capture_default_str();
        sweep->add_option("--delta", sa.delta, "Symbol offsets, comma separated, in [0, 1)")->delimiter(',');
        sweep->add_option("--phi", sa.phi, "Phase offsets, comma separated; accepts pi/4, 3pi/8, ...")->delimiter(',');
        sweep->add_option("--ebn0", sa.ebn0, "Eb/N0 grid in dB as start:step:stop (or values)")->delimiter(',');
        sweep->add_option("--packets", sa.packets, "Packets per point (default 2000 uncoded, 1000 coded)");
        sweep->add_option("--bits", sa.bits, "Source bits per packet and node");
        sweep->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
        sweep->add_option("--q", sa.q, "Repetition factor of the RA code")->capture_default_str();
        sweep->add_option("--interleaver-seed", sa.interleaver_seed, "Interleaver seed (0 = identity)")
            ->capture_default_str();
        sweep->add_option("--iters", sa.iters, "Iteration cap of the loopy decoders")->capture_default_str();
        sweep->add_option("--tol", sa.tol, "Convergence tolerance on source posteriors")->capture_default_str();
        sweep->add_option("--threads", sa.threads, "Worker threads (0 = hardware; PNC_SIM_THREADS caps)")
            ->capture_default_str();
        sweep->add_option("--rate-shift", sa.rate_shift, "Coded x-axis per source bit (true/false)")
            ->capture_default_str();
        sweep->add_option("--out", sa.out, "CSV output path");
        sweep->add_flag("--resume", sa.resume, "Reuse rows already in --out");

        verify = app.add_subcommand("verify", "Check the library against the reference computations");
        verify->add_flag("--quick", quick, "Smaller sample counts");

        auto* plot = app.add_subcommand("plotdata", "Split a sweep CSV into per-curve series files");
        plot->add_option("csv", csv, "Sweep CSV")->required();
        plot->add_option("dir", dir, "Output directory")->required();
    }
};

// Turns the config file into sweep arguments for every key the command line
// left unset, so that flags win.
std::vector<std::string> config_args(const Cli& first)
{
    std::vector<std::string> out;
    for (const auto& item : CLI::ConfigINI().from_file(first.config)) {
        if (item.name == "++" || item.name == "--")
            continue;  // section markers
        const std::string flag = "--" + item.name;
        const CLI::Option* opt = nullptr;
        try {
            opt = first.sweep->get_option(flag);
        } catch (const CLI::OptionNotFound&) {
            throw std::invalid_argument("unknown key in config file: " + item.name);
        }
        if (opt->count() > 0 || item.name == "config")
            continue;
        std::string value;
        for (const auto& v : item.inputs)
            value += (value.empty() ? "" : ",") + v;
        if (item.name == "resume") {
            if (CLI::detail::to_flag_value(value) > 0)
                out.push_back(flag);
        } else {
            out.push_back(flag + "=" + value);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    auto cli = std::make_unique<Cli>();
    CLI11_PARSE(cli->app, argc, argv);

    try {
        if (*cli->sweep && !cli->config.empty()) {
            std::vector<std::string> args{argv[0], "sweep"};
            for (auto& a : config_args(*cli))
                args.push_back(std::move(a));
            bool past = false;
            for (int i = 1; i < argc; ++i) {
                if (past)
                    args.emplace_back(argv[i]);
                past = past || std::string(argv[i]) == "sweep";
            }
            std::vector<const char*> raw;
            for (const auto& a : args)
                raw.push_back(a.c_str());
            cli = std::make_unique<Cli>();
            CLI11_PARSE(cli->app, int(raw.size()), raw.data());
        }
        if (*cli->sweep)
            return run_sweep(cli->sa);
        if (*cli->verify) {
            const int failed = run_verify(cli->quick, std::cout);
            std::cout << (failed ? "verify: FAILED\n" : "verify: all checks passed\n");
            return failed ? 1 : 0;
        }
        size_t files = 0;
        ok(pnc_plotdata(cli->csv.c_str(), cli->dir.c_str(), &files));
        std::printf("wrote %zu series files to %s\n", files, cli->dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "pnc-sim: " << e.what() << '\n';
        return 1;
    }
}
