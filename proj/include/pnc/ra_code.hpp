#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pnc/constellation.hpp"
#include "pnc/table.hpp"

namespace pnc {

// Regular repeat-accumulate code. The repeated sequence r holds each source
// symbol q times in a row (r[j] = s[j / q]); the interleaved sequence is
// s~[n] = r[interleaver[n]]; code symbols accumulate x[n] = x[n-1] ^ s~[n]
// starting from the identity symbol. All indices are 0-based.
struct RaConfig {
    int q = 3;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> interleaver;

    std::size_t n() const noexcept { return std::size_t(q) * m; }
};

// Seed 0 yields the identity. Otherwise a Fisher-Yates shuffle driven by
// Xoshiro256ss(seed): for i = n-1 down to 1, swap(perm[i], perm[below(i+1)]).
std::vector<std::uint32_t> make_interleaver(std::size_t m, int q, std::uint64_t seed);

RaConfig make_ra_config(std::size_t m, int q = 3, std::uint64_t seed = 0);

// Channel symbols of one node. Shares the packet type with source packets.
using Codeword = SourcePacket;

// Throws std::invalid_argument when the packet length differs from cfg.m.
Codeword encode(const SourcePacket& s, const RaConfig& cfg);

struct DecoderLimits {
    int max_iters = 50;
    double tol = 1e-6;
};

struct RaDecodeResult {
    SourcePacket source;
    std::vector<SymbolTable> posteriors;
    int iterations_used = 0;
    bool converged = false;
};

// Point-to-point RA sum-product decoder over per-code-symbol tables (flooding
// schedule). Stops once no source posterior entry moves by tol or more.
RaDecodeResult decode_xor(std::span<const SymbolTable> channel_tables, const RaConfig& cfg,
                          Modulation mod, const DecoderLimits& limits = {});

}  // namespace pnc
