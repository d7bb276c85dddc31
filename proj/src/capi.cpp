#include "pnc/pnc.h"

#include <filesystem>
#include <new>
#include <stdexcept>
#include <string>

#include "pnc/bp_upnc.hpp"
#include "pnc/jt_cnc.hpp"
#include "pnc/sim.hpp"
#include "pnc/xor_cd.hpp"

struct pnc_sweep {
    pnc::SweepConfig cfg;
    std::vector<pnc::BerRecord> records;
};

struct pnc_frame {
    pnc::ChannelParams params;
    pnc::ReceivedFrame frame;
};

struct pnc_code {
    pnc::RaConfig cfg;
};

namespace {

thread_local std::string last_error;

pnc_status fail(pnc_status s, const std::string& msg)
{
    last_error = msg;
    return s;
}

template <class F>
pnc_status guarded(F&& f)
{
    try {
        last_error.clear();
        return f();
    } catch (const std::invalid_argument& e) {
        return fail(PNC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(PNC_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PNC_ERR_INTERNAL, "out of memory");
    } catch (const std::runtime_error& e) {
        return fail(PNC_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(PNC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PNC_ERR_INTERNAL, "unknown error");
    }
}

#define PNC_REQUIRE(cond, msg)                                 \
    do {                                                       \
        if (!(cond))                                           \
            return fail(PNC_ERR_INVALID_ARGUMENT, msg);        \
    } while (0)

pnc::Modulation to_mod(pnc_modulation m)
{
    if (m == PNC_BPSK)
        return pnc::Modulation::bpsk;
    if (m == PNC_QPSK)
        return pnc::Modulation::qpsk;
    throw std::invalid_argument("unknown modulation");
}

pnc::Scheme to_scheme(pnc_scheme s)
{
    switch (s) {
    case PNC_SCHEME_SYNC: return pnc::Scheme::sync_bench;
    case PNC_SCHEME_UPNC: return pnc::Scheme::bp_upnc;
    case PNC_SCHEME_JTCNC: return pnc::Scheme::jt_cnc;
    case PNC_SCHEME_XORCD: return pnc::Scheme::xor_cd;
    }
    throw std::invalid_argument("unknown scheme");
}

std::vector<double> copy_list(const double* v, size_t n)
{
    if (n == 0 || v == nullptr)
        throw std::invalid_argument("list must be non-empty");
    return {v, v + n};
}

pnc::SourcePacket labels_packet(pnc::Modulation mod, const uint8_t* labels, size_t n)
{
    if (labels == nullptr || n == 0)
        throw std::invalid_argument("empty symbol sequence");
    const pnc::Constellation c(mod);
    pnc::SourcePacket p{mod, std::vector<pnc::Label>(labels, labels + n)};
    for (auto l : p.symbols)
        if (l >= c.size())
            throw std::invalid_argument("label out of range for the modulation");
    return p;
}

pnc_status make_frame(const pnc::SourcePacket& a, const pnc::SourcePacket& b, double delta, double phi,
                      double esn0_db, uint64_t seed, int noiseless, pnc_frame** out)
{
    auto f = std::make_unique<pnc_frame>();
    f->params.delta = delta;
    f->params.phi = phi;
    f->params.es_n0_db = esn0_db;
    pnc::Xoshiro256ss rng(seed);
    f->frame = pnc::transmit(a, b, f->params, rng, noiseless != 0);
    *out = f.release();
    return PNC_OK;
}

pnc_status copy_labels(const std::vector<pnc::Label>& v, uint8_t* out, size_t capacity)
{
    if (out == nullptr || capacity < v.size())
        return fail(PNC_ERR_INVALID_ARGUMENT, "output buffer too small");
    std::copy(v.begin(), v.end(), out);
    return PNC_OK;
}

}  // namespace

extern "C" {

const char* pnc_version(void)
{
    return "1.0.0";
}

const char* pnc_last_error(void)
{
    return last_error.c_str();
}

const char* pnc_status_string(pnc_status s)
{
    switch (s) {
    case PNC_OK: return "ok";
    case PNC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PNC_ERR_IO: return "i/o error";
    case PNC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

pnc_status pnc_sweep_create(pnc_scheme scheme, pnc_modulation mod, pnc_sweep** out)
{
    PNC_REQUIRE(out, "out is null");
    return guarded([&] {
        auto s = std::make_unique<pnc_sweep>();
        s->cfg.scheme = to_scheme(scheme);
        s->cfg.modulation = to_mod(mod);
        if (pnc::is_coded(s->cfg.scheme)) {
            s->cfg.packets_per_point = 1000;
            s->cfg.bits_per_packet = s->cfg.modulation == pnc::Modulation::qpsk ? 4096 : 2048;
        }
        *out = s.release();
        return PNC_OK;
    });
}

void pnc_sweep_destroy(pnc_sweep* s)
{
    delete s;
}

pnc_status pnc_sweep_set_deltas(pnc_sweep* s, const double* v, size_t n)
{
    PNC_REQUIRE(s, "sweep is null");
    return guarded([&] {
        s->cfg.delta_list = copy_list(v, n);
        return PNC_OK;
    });
}

pnc_status pnc_sweep_set_phis(pnc_sweep* s, const double* v, size_t n)
{
    PNC_REQUIRE(s, "sweep is null");
    return guarded([&] {
        s->cfg.phi_list = copy_list(v, n);
        return PNC_OK;
    });
}

pnc_status pnc_sweep_set_ebn0(pnc_sweep* s, const double* v, size_t n)
{
    PNC_REQUIRE(s, "sweep is null");
    return guarded([&] {
        s->cfg.ebn0_db_list = copy_list(v, n);
        return PNC_OK;
    });
}

pnc_status pnc_sweep_set_packets(pnc_sweep* s, uint64_t packets_per_point)
{
    PNC_REQUIRE(s, "sweep is null");
    PNC_REQUIRE(packets_per_point > 0, "packets per point must be positive");
    s->cfg.packets_per_point = packets_per_point;
    return PNC_OK;
}

pnc_status pnc_sweep_set_bits(pnc_sweep* s, uint64_t bits_per_packet)
{
    PNC_REQUIRE(s, "sweep is null");
    PNC_REQUIRE(bits_per_packet > 0, "bits per packet must be positive");
    s->cfg.bits_per_packet = bits_per_packet;
    return PNC_OK;
}

pnc_status pnc_sweep_set_seed(pnc_sweep* s, uint64_t master_seed)
{
    PNC_REQUIRE(s, "sweep is null");
    s->cfg.master_seed = master_seed;
    return PNC_OK;
}

pnc_status pnc_sweep_set_code(pnc_sweep* s, int q, uint64_t interleaver_seed)
{
    PNC_REQUIRE(s, "sweep is null");
    PNC_REQUIRE(q >= 1, "repeat factor must be at least 1");
    s->cfg.q = q;
    s->cfg.interleaver_seed = interleaver_seed;
    return PNC_OK;
}

pnc_status pnc_sweep_set_limits(pnc_sweep* s, int max_iters, double tol)
{
    PNC_REQUIRE(s, "sweep is null");
    PNC_REQUIRE(max_iters >= 1 && tol > 0.0, "limits must be positive");
    s->cfg.limits = {max_iters, tol};
    return PNC_OK;
}

pnc_status pnc_sweep_set_threads(pnc_sweep* s, unsigned threads)
{
    PNC_REQUIRE(s, "sweep is null");
    s->cfg.threads = threads;
    return PNC_OK;
}

pnc_status pnc_sweep_set_rate_shift(pnc_sweep* s, int enabled)
{
    PNC_REQUIRE(s, "sweep is null");
    s->cfg.rate_shift = enabled != 0;
    return PNC_OK;
}

pnc_status pnc_sweep_run(pnc_sweep* s, const char* csv_path, int resume)
{
    PNC_REQUIRE(s, "sweep is null");
    return guarded([&] {
        std::optional<std::filesystem::path> path;
        if (csv_path != nullptr && *csv_path != '\0')
            path = csv_path;
        s->records = pnc::run_sweep(s->cfg, path, resume != 0);
        return PNC_OK;
    });
}

pnc_status pnc_sweep_record_count(const pnc_sweep* s, size_t* out)
{
    PNC_REQUIRE(s && out, "null argument");
    *out = s->records.size();
    return PNC_OK;
}

pnc_status pnc_sweep_record(const pnc_sweep* s, size_t i, pnc_ber_record* out)
{
    PNC_REQUIRE(s && out, "null argument");
    PNC_REQUIRE(i < s->records.size(), "record index out of range");
    const auto& r = s->records[i];
    out->scheme = pnc_scheme(int(r.scheme));
    out->modulation = pnc_modulation(int(r.modulation));
    out->delta = r.delta;
    out->phi = r.phi;
    out->ebn0_db = r.ebn0_db;
    out->packets = r.packets;
    out->bit_errors = r.bit_errors;
    out->total_bits = r.total_bits;
    out->ber = r.ber;
    out->ci_lo = r.ci_lo;
    out->ci_hi = r.ci_hi;
    out->nonconverged = r.nonconverged;
    return PNC_OK;
}

pnc_status pnc_frame_transmit(pnc_modulation mod, const uint8_t* bits_a, const uint8_t* bits_b, size_t nbits,
                              double delta, double phi, double esn0_db, uint64_t seed, int noiseless,
                              pnc_frame** out)
{
    PNC_REQUIRE(bits_a && bits_b && out, "null argument");
    return guarded([&] {
        const pnc::Constellation c(to_mod(mod));
        for (size_t i = 0; i < nbits; ++i)
            if (bits_a[i] > 1 || bits_b[i] > 1)
                throw std::invalid_argument("bits must be 0 or 1");
        const auto a = pnc::modulate({bits_a, nbits}, c);
        const auto b = pnc::modulate({bits_b, nbits}, c);
        return make_frame(a, b, delta, phi, esn0_db, seed, noiseless, out);
    });
}

pnc_status pnc_frame_transmit_symbols(pnc_modulation mod, const uint8_t* labels_a, const uint8_t* labels_b,
                                      size_t n, double delta, double phi, double esn0_db, uint64_t seed,
                                      int noiseless, pnc_frame** out)
{
    PNC_REQUIRE(out, "out is null");
    return guarded([&] {
        const auto m = to_mod(mod);
        return make_frame(labels_packet(m, labels_a, n), labels_packet(m, labels_b, n), delta, phi, esn0_db,
                          seed, noiseless, out);
    });
}

void pnc_frame_destroy(pnc_frame* f)
{
    delete f;
}

pnc_status pnc_frame_symbol_count(const pnc_frame* f, size_t* out)
{
    PNC_REQUIRE(f && out, "null argument");
    *out = f->frame.n_coded;
    return PNC_OK;
}

pnc_status pnc_frame_sample_count(const pnc_frame* f, size_t* out)
{
    PNC_REQUIRE(f && out, "null argument");
    *out = f->frame.sample_count();
    return PNC_OK;
}

pnc_status pnc_frame_samples(const pnc_frame* f, double* out, size_t capacity)
{
    PNC_REQUIRE(f && out, "null argument");
    PNC_REQUIRE(capacity >= 2 * f->frame.sample_count(), "output buffer too small");
    for (size_t k = 0; k < f->frame.sample_count(); ++k) {
        out[2 * k] = f->frame.samples[k].real();
        out[2 * k + 1] = f->frame.samples[k].imag();
    }
    return PNC_OK;
}

pnc_status pnc_upnc_posteriors(const pnc_frame* f, double* out, size_t capacity)
{
    PNC_REQUIRE(f && out, "null argument");
    return guarded([&] {
        const pnc::Constellation c(f->frame.modulation);
        const auto post = pnc::upnc_posteriors(f->frame, f->params, c);
        const size_t kk = size_t(c.size()) * size_t(c.size());
        if (capacity < post.size() * kk)
            return fail(PNC_ERR_INVALID_ARGUMENT, "output buffer too small");
        for (size_t n = 0; n < post.size(); ++n)
            for (size_t i = 0; i < kk; ++i)
                out[n * kk + i] = post[n].p[i];
        return PNC_OK;
    });
}

pnc_status pnc_upnc_decide(const pnc_frame* f, uint8_t* out, size_t capacity)
{
    PNC_REQUIRE(f && out, "null argument");
    return guarded([&] {
        const pnc::Constellation c(f->frame.modulation);
        return copy_labels(pnc::decode_upnc(f->frame, f->params, c).xor_symbols, out, capacity);
    });
}

pnc_status pnc_sync_decide(const pnc_frame* f, uint8_t* out, size_t capacity)
{
    PNC_REQUIRE(f && out, "null argument");
    return guarded([&] {
        const pnc::Constellation c(f->frame.modulation);
        return copy_labels(pnc::decode_sync_benchmark(f->frame, f->params, c), out, capacity);
    });
}

pnc_status pnc_code_create(size_t m, int q, uint64_t interleaver_seed, pnc_code** out)
{
    PNC_REQUIRE(out, "out is null");
    PNC_REQUIRE(m > 0 && q >= 1, "code dimensions must be positive");
    return guarded([&] {
        auto c = std::make_unique<pnc_code>();
        c->cfg = pnc::make_ra_config(m, q, interleaver_seed);
        *out = c.release();
        return PNC_OK;
    });
}

void pnc_code_destroy(pnc_code* c)
{
    delete c;
}

pnc_status pnc_code_length(const pnc_code* c, size_t* out)
{
    PNC_REQUIRE(c && out, "null argument");
    *out = c->cfg.n();
    return PNC_OK;
}

pnc_status pnc_code_interleaver(const pnc_code* c, uint32_t* out, size_t capacity)
{
    PNC_REQUIRE(c && out, "null argument");
    PNC_REQUIRE(capacity >= c->cfg.interleaver.size(), "output buffer too small");
    std::copy(c->cfg.interleaver.begin(), c->cfg.interleaver.end(), out);
    return PNC_OK;
}

pnc_status pnc_code_encode(const pnc_code* c, pnc_modulation mod, const uint8_t* source, size_t m, uint8_t* out,
                           size_t capacity)
{
    PNC_REQUIRE(c && out, "null argument");
    return guarded([&] {
        const auto cw = pnc::encode(labels_packet(to_mod(mod), source, m), c->cfg);
        return copy_labels(cw.symbols, out, capacity);
    });
}

pnc_status pnc_jtcnc_decode(const pnc_code* c, const pnc_frame* f, int max_iters, double tol, uint8_t* out,
                            size_t capacity, int* iterations)
{
    PNC_REQUIRE(c && f && out, "null argument");
    PNC_REQUIRE(max_iters >= 1 && tol > 0.0, "limits must be positive");
    return guarded([&] {
        const auto d = pnc::decode_jtcnc(f->frame, f->params, c->cfg, {max_iters, tol});
        if (iterations)
            *iterations = d.iterations_used;
        return copy_labels(d.xor_sources.symbols, out, capacity);
    });
}

pnc_status pnc_xorcd_decode(const pnc_code* c, const pnc_frame* f, int max_iters, double tol, uint8_t* out,
                            size_t capacity, int* iterations)
{
    PNC_REQUIRE(c && f && out, "null argument");
    PNC_REQUIRE(max_iters >= 1 && tol > 0.0, "limits must be positive");
    return guarded([&] {
        const auto d = pnc::decode_xorcd(f->frame, f->params, c->cfg, {max_iters, tol});
        if (iterations)
            *iterations = d.iterations_used;
        return copy_labels(d.xor_sources.symbols, out, capacity);
    });
}

pnc_status pnc_plotdata(const char* csv_path, const char* out_dir, size_t* files_written)
{
    PNC_REQUIRE(csv_path && out_dir, "null argument");
    return guarded([&] {
        const auto files = pnc::write_plot_data(pnc::read_csv_file(csv_path), out_dir);
        if (files_written)
            *files_written = files.size();
        return PNC_OK;
    });
}

}  // extern "C"
