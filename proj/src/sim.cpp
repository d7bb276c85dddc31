#include "pnc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "pnc/bp_upnc.hpp"
#include "pnc/jt_cnc.hpp"
#include "pnc/xor_cd.hpp"

namespace pnc {

std::string_view to_string(Scheme s)
{
    switch (s) {
    case Scheme::sync_bench: return "sync";
    case Scheme::bp_upnc: return "upnc";
    case Scheme::jt_cnc: return "jtcnc";
    case Scheme::xor_cd: return "xorcd";
    }
    return "?";
}

Scheme parse_scheme(std::string_view s)
{
    if (s == "sync")
        return Scheme::sync_bench;
    if (s == "upnc")
        return Scheme::bp_upnc;
    if (s == "jtcnc")
        return Scheme::jt_cnc;
    if (s == "xorcd")
        return Scheme::xor_cd;
    throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

std::size_t SweepConfig::symbols_per_packet() const
{
    return bits_per_packet / std::size_t(Constellation(modulation).bits_per_symbol());
}

RaConfig SweepConfig::ra_config() const
{
    return make_ra_config(symbols_per_packet(), q, interleaver_seed);
}

void SweepConfig::validate() const
{
    if (delta_list.empty() || phi_list.empty() || ebn0_db_list.empty())
        throw std::invalid_argument("sweep lists must be non-empty");
    for (double d : delta_list)
        if (!(d >= 0.0 && d < 1.0))
            throw std::invalid_argument("delta values must lie in [0, 1)");
    for (double p : phi_list)
        if (!(p >= 0.0 && p < 2.0 * std::numbers::pi))
            throw std::invalid_argument("phi values must lie in [0, 2pi)");
    for (double e : ebn0_db_list)
        if (!std::isfinite(e))
            throw std::invalid_argument("Eb/N0 values must be finite");
    const auto bps = std::size_t(Constellation(modulation).bits_per_symbol());
    if (bits_per_packet == 0 || bits_per_packet % bps != 0)
        throw std::invalid_argument("bits per packet must be a positive multiple of bits per symbol");
    if (packets_per_point == 0)
        throw std::invalid_argument("packets per point must be positive");
    if (is_coded(scheme) && q < 1)
        throw std::invalid_argument("repeat factor must be at least 1");
    if (limits.max_iters < 1 || !(limits.tol > 0.0))
        throw std::invalid_argument("decoder limits must be positive");
    if (scheme == Scheme::sync_bench)
        for (double d : delta_list)
            if (d >= ChannelParams{}.sync_epsilon)
                throw std::invalid_argument("the synchronous benchmark needs delta = 0");
    if (scheme == Scheme::sync_bench)
        for (double p : phi_list)
            if (p != 0.0)
                throw std::invalid_argument("the synchronous benchmark needs phi = 0");
}

std::pair<double, double> wilson_ci95(std::uint64_t k, std::uint64_t n)
{
    if (n == 0)
        return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double nn = double(n);
    const double p = double(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::clamp(center - half, 0.0, p), std::clamp(center + half, p, 1.0)};
}

double ebn0_to_esn0(double ebn0_db, Modulation mod, Scheme scheme, int q, bool rate_shift)
{
    double es = ebn0_db + 10.0 * std::log10(double(Constellation(mod).bits_per_symbol()));
    if (is_coded(scheme) && rate_shift)
        es -= 10.0 * std::log10(double(q));
    return es;
}

std::uint64_t point_id(Modulation mod, double delta, double phi, double ebn0_db)
{
    std::uint64_t h = mix64(0x504E4353494D0001ull);
    h = hash_combine(h, std::uint64_t(mod));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(delta));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(phi));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(ebn0_db));
    return h;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t point, std::uint64_t trial)
{
    return hash_combine(hash_combine(mix64(master_seed), point), trial);
}

Trial make_trial(const SweepConfig& cfg, const RaConfig* ra, double delta, double phi, double ebn0_db,
                 std::uint64_t trial_index, bool noiseless)
{
    const Constellation c(cfg.modulation);
    Xoshiro256ss rng(trial_seed(cfg.master_seed, point_id(cfg.modulation, delta, phi, ebn0_db), trial_index));

    Trial t;
    t.params.delta = delta;
    t.params.phi = phi;
    t.params.es_n0_db = ebn0_to_esn0(ebn0_db, cfg.modulation, cfg.scheme, cfg.q, cfg.rate_shift);

    std::vector<std::uint8_t> bits(cfg.bits_per_packet);
    for (auto& b : bits)
        b = rng.bit();
    t.source_a = modulate(bits, c);
    for (auto& b : bits)
        b = rng.bit();
    t.source_b = modulate(bits, c);

    if (is_coded(cfg.scheme)) {
        if (ra == nullptr)
            throw std::invalid_argument("make_trial: coded scheme needs an RA configuration");
        t.code_a = encode(t.source_a, *ra);
        t.code_b = encode(t.source_b, *ra);
    } else {
        t.code_a = t.source_a;
        t.code_b = t.source_b;
    }
    t.frame = transmit(t.code_a, t.code_b, t.params, rng, noiseless);
    return t;
}

namespace {

class SchemeDecoder {
public:
    SchemeDecoder(const SweepConfig& cfg, std::shared_ptr<const RaConfig> ra) : cfg_(cfg), ra_(std::move(ra)) {}

    SourcePacket operator()(const Trial& t, bool& converged)
    {
        const Constellation c(cfg_.modulation);
        converged = true;
        switch (cfg_.scheme) {
        case Scheme::sync_bench:
            return {cfg_.modulation, decode_sync_benchmark(t.frame, t.params, c)};
        case Scheme::bp_upnc:
            return {cfg_.modulation, decode_upnc(t.frame, t.params, c).xor_symbols};
        case Scheme::jt_cnc: {
            if (!graph_ || graph_->synchronous() != t.frame.synchronous)
                graph_.emplace(*ra_, t.frame.sample_count(), t.frame.synchronous, c);
            graph_->load_evidence(t.frame, t.params);
            auto d = graph_->iterate(cfg_.limits);
            converged = d.converged;
            return std::move(d.xor_sources);
        }
        case Scheme::xor_cd: {
            auto r = decode_xorcd(t.frame, t.params, *ra_, cfg_.limits);
            converged = r.converged;
            return std::move(r.xor_sources);
        }
        }
        throw std::logic_error("unhandled scheme");
    }

private:
    SweepConfig cfg_;
    std::shared_ptr<const RaConfig> ra_;
    std::optional<JointGraph> graph_;
};

TrialOutcome score(const Trial& t, const SourcePacket& decided, bool converged, bool coded)
{
    const SourcePacket& a = coded ? t.source_a : t.code_a;
    const SourcePacket& b = coded ? t.source_b : t.code_b;
    if (decided.size() != a.size())
        throw std::runtime_error("decoder returned a packet of the wrong length");
    const int bps = Constellation(a.modulation).bits_per_symbol();
    TrialOutcome o;
    o.converged = converged;
    o.bits = std::uint64_t(a.size()) * std::uint64_t(bps);
    for (std::size_t i = 0; i < a.size(); ++i)
        o.bit_errors += std::uint64_t(std::popcount(unsigned(pnc_xor(a.symbols[i], b.symbols[i]) ^ decided.symbols[i])));
    return o;
}

}  // namespace

DecoderFactory default_decoder_factory(const SweepConfig& cfg)
{
    std::shared_ptr<const RaConfig> ra;
    if (is_coded(cfg.scheme))
        ra = std::make_shared<const RaConfig>(cfg.ra_config());
    return [cfg, ra]() -> TrialDecoder {
        auto dec = std::make_shared<SchemeDecoder>(cfg, ra);
        return [dec](const Trial& t, bool& converged) { return (*dec)(t, converged); };
    };
}

unsigned resolve_threads(unsigned requested)
{
    unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PNC_SIM_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && v > 0)
            n = std::min(n, unsigned(v));
    }
    return n;
}

std::vector<TrialOutcome> run_trials(const SweepConfig& cfg, double delta, double phi, double ebn0_db,
                                     std::uint64_t first, std::uint64_t count, const DecoderFactory& factory)
{
    cfg.validate();
    const bool coded = is_coded(cfg.scheme);
    const std::optional<RaConfig> ra = coded ? std::optional<RaConfig>(cfg.ra_config()) : std::nullopt;
    const DecoderFactory make = factory ? factory : default_decoder_factory(cfg);

    std::vector<TrialOutcome> out(count);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        try {
            TrialDecoder decode = make();
            for (std::uint64_t i = next++; i < count && !failed; i = next++) {
                const Trial t = make_trial(cfg, ra ? &*ra : nullptr, delta, phi, ebn0_db, first + i);
                bool converged = true;
                const SourcePacket decided = decode(t, converged);
                out[i] = score(t, decided, converged, coded);
            }
        } catch (...) {
            if (!failed.exchange(true))
                failure = std::current_exception();
        }
    };

    const unsigned nthreads = unsigned(std::min<std::uint64_t>(resolve_threads(cfg.threads), std::max<std::uint64_t>(count, 1)));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < nthreads; ++i)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

BerRecord run_point(const SweepConfig& cfg, double delta, double phi, double ebn0_db, const DecoderFactory& factory)
{
    const auto outcomes = run_trials(cfg, delta, phi, ebn0_db, 0, cfg.packets_per_point, factory);
    BerRecord r;
    r.scheme = cfg.scheme;
    r.modulation = cfg.modulation;
    r.delta = delta;
    r.phi = phi;
    r.ebn0_db = ebn0_db;
    r.packets = outcomes.size();
    for (const auto& o : outcomes) {
        r.bit_errors += o.bit_errors;
        r.total_bits += o.bits;
        r.nonconverged += o.converged ? 0 : 1;
    }
    r.ber = r.total_bits ? double(r.bit_errors) / double(r.total_bits) : 0.0;
    std::tie(r.ci_lo, r.ci_hi) = wilson_ci95(r.bit_errors, r.total_bits);
    return r;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv_row(const BerRecord& r)
{
    std::string s;
    s += to_string(r.scheme);
    s += ',';
    s += to_string(r.modulation);
    for (double v : {r.delta, r.phi, r.ebn0_db}) {
        s += ',';
        s += format_double(v);
    }
    for (std::uint64_t v : {r.packets, r.bit_errors, r.total_bits}) {
        s += ',';
        s += std::to_string(v);
    }
    for (double v : {r.ber, r.ci_lo, r.ci_hi}) {
        s += ',';
        s += format_double(v);
    }
    s += ',';
    s += std::to_string(r.nonconverged);
    return s;
}

void write_csv(std::ostream& os, const std::vector<BerRecord>& records)
{
    os << csv_header << '\n';
    for (const auto& r : records)
        os << to_csv_row(r) << '\n';
}

std::vector<BerRecord> read_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != csv_header)
        throw std::runtime_error("CSV header does not match the expected schema");
    std::vector<BerRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');)
            f.push_back(cell);
        if (f.size() != 12)
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected 12 fields");
        try {
            BerRecord r;
            r.scheme = parse_scheme(f[0]);
            r.modulation = parse_modulation(f[1]);
            r.delta = std::stod(f[2]);
            r.phi = std::stod(f[3]);
            r.ebn0_db = std::stod(f[4]);
            r.packets = std::stoull(f[5]);
            r.bit_errors = std::stoull(f[6]);
            r.total_bits = std::stoull(f[7]);
            r.ber = std::stod(f[8]);
            r.ci_lo = std::stod(f[9]);
            r.ci_hi = std::stod(f[10]);
            r.nonconverged = std::stoull(f[11]);
            out.push_back(r);
        } catch (const std::logic_error& e) {
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<BerRecord> read_csv_file(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + path.string() + " for reading");
    return read_csv(is);
}

void write_csv_file(const std::filesystem::path& path, const std::vector<BerRecord>& records)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(os, records);
    os.flush();
    if (!os)
        throw std::runtime_error("write to " + path.string() + " failed");
}

std::vector<BerRecord> run_sweep(const SweepConfig& cfg, const std::optional<std::filesystem::path>& csv, bool resume,
                                 const std::function<void(const BerRecord&)>& on_record)
{
    cfg.validate();

    using Key = std::tuple<std::uint8_t, std::uint8_t, std::string, std::string, std::string>;
    auto key_of = [](Scheme s, Modulation m, double d, double p, double e) {
        return Key{std::uint8_t(s), std::uint8_t(m), format_double(d), format_double(p), format_double(e)};
    };
    std::map<Key, BerRecord> previous;
    if (resume && csv && std::filesystem::exists(*csv))
        for (const auto& r : read_csv_file(*csv))
            previous[key_of(r.scheme, r.modulation, r.delta, r.phi, r.ebn0_db)] = r;

    std::vector<BerRecord> records;
    const auto factory = default_decoder_factory(cfg);
    for (double d : cfg.delta_list)
        for (double p : cfg.phi_list)
            for (double e : cfg.ebn0_db_list) {
                const auto it = previous.find(key_of(cfg.scheme, cfg.modulation, d, p, e));
                if (it != previous.end() && it->second.packets == cfg.packets_per_point)
                    records.push_back(it->second);
                else
                    records.push_back(run_point(cfg, d, p, e, factory));
                if (on_record)
                    on_record(records.back());
                if (csv)
                    write_csv_file(*csv, records);
            }
    return records;
}

std::vector<std::filesystem::path> write_plot_data(const std::vector<BerRecord>& records,
                                                   const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

    using Curve = std::tuple<std::uint8_t, std::uint8_t, double, double>;
    std::map<Curve, std::vector<BerRecord>> curves;
    for (const auto& r : records)
        curves[{std::uint8_t(r.scheme), std::uint8_t(r.modulation), r.delta, r.phi}].push_back(r);

    std::vector<std::filesystem::path> written;
    for (auto& [key, rows] : curves) {
        std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.ebn0_db < y.ebn0_db; });
        const auto& r0 = rows.front();
        char name[160];
        std::snprintf(name, sizeof name, "%s_%s_delta%.4f_phi%.4f.dat", std::string(to_string(r0.scheme)).c_str(),
                      std::string(to_string(r0.modulation)).c_str(), r0.delta, r0.phi);
        const auto path = out_dir / name;
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open " + path.string() + " for writing");
        os << "# ebn0_db ber ci_lo ci_hi bit_errors total_bits\n";
        for (const auto& r : rows)
            os << format_double(r.ebn0_db) << ' ' << format_double(r.ber) << ' ' << format_double(r.ci_lo) << ' '
               << format_double(r.ci_hi) << ' ' << r.bit_errors << ' ' << r.total_bits << '\n';
        if (!os)
            throw std::runtime_error("write to " + path.string() + " failed");
        written.push_back(path);
    }
    return written;
}

}  // namespace pnc
