#include "pnc/ra_code.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "pnc/detail/ra_layer.hpp"
#include "pnc/rng.hpp"

namespace pnc {

std::vector<std::uint32_t> make_interleaver(std::size_t m, int q, std::uint64_t seed)
{
    if (m == 0 || q < 1)
        throw std::invalid_argument("make_interleaver: m and q must be positive");
    std::vector<std::uint32_t> perm(m * std::size_t(q));
    std::iota(perm.begin(), perm.end(), 0u);
    if (seed == 0)
        return perm;
    Xoshiro256ss rng(seed);
    for (std::size_t i = perm.size() - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.below(i + 1)]);
    return perm;
}

RaConfig make_ra_config(std::size_t m, int q, std::uint64_t seed)
{
    RaConfig cfg;
    cfg.q = q;
    cfg.m = m;
    cfg.seed = seed;
    cfg.interleaver = make_interleaver(m, q, seed);
    return cfg;
}

Codeword encode(const SourcePacket& s, const RaConfig& cfg)
{
    if (s.size() != cfg.m)
        throw std::invalid_argument("encode: source length " + std::to_string(s.size()) +
                                    " does not match M = " + std::to_string(cfg.m));
    Codeword x{s.modulation, std::vector<Label>(cfg.n())};
    Label acc = identity_label;
    for (std::size_t n = 0; n < cfg.n(); ++n) {
        acc = pnc_xor(acc, s.symbols[cfg.interleaver[n] / std::size_t(cfg.q)]);
        x.symbols[n] = acc;
    }
    return x;
}

namespace {

template <std::size_t G>
RaDecodeResult decode_xor_impl(std::span<const SymbolTable> tables, const RaConfig& cfg,
                               const Constellation& c, const DecoderLimits& limits)
{
    detail::RaCheckLayer<G> layer(cfg);
    std::vector<detail::Dist<G>> channel(cfg.n());
    for (std::size_t n = 0; n < cfg.n(); ++n) {
        for (std::size_t g = 0; g < G; ++g)
            channel[n][g] = tables[n].p[g];
        detail::normalize_floor(channel[n]);
    }

    RaDecodeResult res;
    for (int it = 1; it <= limits.max_iters; ++it) {
        for (std::size_t n = 0; n < cfg.n(); ++n) {
            auto& cur = layer.to_cur(n);
            auto& next = layer.to_next(n);
            for (std::size_t g = 0; g < G; ++g) {
                cur[g] = channel[n][g] * layer.from_next(n)[g];
                next[g] = channel[n][g] * layer.from_cur(n)[g];
            }
            detail::normalize_floor(cur);
            detail::normalize_floor(next);
        }
        const double change = layer.upward();
        res.iterations_used = it;
        if (change < limits.tol) {
            res.converged = true;
            break;
        }
        layer.downward();
    }

    res.source = SourcePacket{c.kind(), std::vector<Label>(cfg.m)};
    res.posteriors.resize(cfg.m);
    for (std::size_t m = 0; m < cfg.m; ++m) {
        SymbolTable t;
        t.k = std::uint8_t(G);
        for (std::size_t g = 0; g < G; ++g)
            t.p[g] = layer.source_posterior(m)[g];
        res.posteriors[m] = t;
        res.source.symbols[m] = argmax(t, c);
    }
    return res;
}

}  // namespace

RaDecodeResult decode_xor(std::span<const SymbolTable> channel_tables, const RaConfig& cfg,
                          Modulation mod, const DecoderLimits& limits)
{
    if (channel_tables.size() != cfg.n())
        throw std::invalid_argument("decode_xor: expected " + std::to_string(cfg.n()) + " tables");
    if (limits.max_iters < 1)
        throw std::invalid_argument("decode_xor: max_iters must be at least 1");
    const Constellation c(mod);
    for (const auto& t : channel_tables)
        if (t.k != c.size())
            throw std::invalid_argument("decode_xor: table size does not match modulation");
    return mod == Modulation::bpsk ? decode_xor_impl<2>(channel_tables, cfg, c, limits)
                                   : decode_xor_impl<4>(channel_tables, cfg, c, limits);
}

}  // namespace pnc
