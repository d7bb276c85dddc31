#pragma once

#include <cstddef>
#include <vector>

#include "pnc/constellation.hpp"
#include "pnc/rng.hpp"

namespace pnc {

// Uplink asynchrony and noise. Symbol power is normalized to one, so the noise
// level enters only through N0 = 10^(-es_n0_db / 10).
struct ChannelParams {
    double delta = 0.0;           // symbol offset in symbol durations, [0, 1)
    double phi = 0.0;             // carrier-phase offset in radians, [0, 2pi)
    double es_n0_db = 10.0;       // per-symbol SNR
    double sync_epsilon = 1e-6;   // delta below this is the synchronous regime

    bool synchronous() const noexcept { return delta < sync_epsilon; }
    double n0() const noexcept;
    // Per-component noise variance of a full-symbol matched filter, N0 / 2.
    double sigma2() const noexcept;
    cplx rotation() const noexcept;

    // Throws std::invalid_argument when delta or phi is out of range.
    void validate() const;
};

// Relay observations y_R[k], k = 1..2N+1, stored 0-based. Sample k (1-based)
// carries x_A[ceil(k/2)] and x_B[floor(k/2)]; in synchronous mode the odd
// (1-based) samples are absent and carry infinite variance.
struct ReceivedFrame {
    std::vector<cplx> samples;
    std::vector<double> variances;  // per-component noise variance
    std::size_t n_coded = 0;
    bool synchronous = false;
    Modulation modulation = Modulation::bpsk;

    std::size_t sample_count() const noexcept { return samples.size(); }
    bool present(std::size_t k0) const noexcept { return !synchronous || (k0 % 2 == 1); }

    // Symbol indices (0-based) touched by sample k0; -1 when the symbol is absent.
    static long a_index(std::size_t k0, std::size_t n) noexcept
    {
        const auto i = long(k0 / 2);
        return i < long(n) ? i : -1;
    }
    static long b_index(std::size_t k0) noexcept { return long(k0 + 1) / 2 - 1; }
};

// Superimposes the two packets per the oversampled rectangular-pulse model.
// Pass noiseless = true to skip the noise draws entirely.
ReceivedFrame transmit(const SourcePacket& xa, const SourcePacket& xb, const ChannelParams& p,
                       Xoshiro256ss& rng, bool noiseless = false);

}  // namespace pnc
