#pragma once

#include <span>
#include <vector>

#include "pnc/channel.hpp"
#include "pnc/ra_code.hpp"
#include "pnc/table.hpp"

namespace pnc {

struct XorCdResult {
    SourcePacket xor_sources;
    std::vector<SymbolTable> stage1_tables;
    std::vector<SymbolTable> posteriors;
    int iterations_used = 0;
    bool converged = false;
};

// Per-code-symbol XOR posteriors from BP-UPNC. Joint pair information is
// dropped here; only P(x_A[n] ^ x_B[n] | Y_R) leaves this stage.
std::vector<SymbolTable> xor_cd_stage1(const ReceivedFrame& frame, const ChannelParams& p,
                                       const Constellation& c);

// Point-to-point RA decode of the XOR codeword from stage-1 tables.
XorCdResult xor_cd_stage2(std::span<const SymbolTable> tables, const RaConfig& cfg, Modulation mod,
                          const DecoderLimits& limits = {});

XorCdResult decode_xorcd(const ReceivedFrame& frame, const ChannelParams& p, const RaConfig& cfg,
                         const DecoderLimits& limits = {});

}  // namespace pnc
