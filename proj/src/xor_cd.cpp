#include "pnc/xor_cd.hpp"

#include "pnc/bp_upnc.hpp"
#include "pnc/evidence.hpp"

namespace pnc {

std::vector<SymbolTable> xor_cd_stage1(const ReceivedFrame& frame, const ChannelParams& p,
                                       const Constellation& c)
{
    const auto post = upnc_posteriors(frame, p, c);
    std::vector<SymbolTable> out;
    out.reserve(post.size());
    for (const auto& t : post)
        out.push_back(xor_posterior(t));
    return out;
}

XorCdResult xor_cd_stage2(std::span<const SymbolTable> tables, const RaConfig& cfg, Modulation mod,
                          const DecoderLimits& limits)
{
    auto dec = decode_xor(tables, cfg, mod, limits);
    XorCdResult r;
    r.xor_sources = std::move(dec.source);
    r.stage1_tables.assign(tables.begin(), tables.end());
    r.posteriors = std::move(dec.posteriors);
    r.iterations_used = dec.iterations_used;
    r.converged = dec.converged;
    return r;
}

XorCdResult decode_xorcd(const ReceivedFrame& frame, const ChannelParams& p, const RaConfig& cfg,
                         const DecoderLimits& limits)
{
    const Constellation c(frame.modulation);
    const auto tables = xor_cd_stage1(frame, p, c);
    return xor_cd_stage2(tables, cfg, frame.modulation, limits);
}

}  // namespace pnc
