#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "oracle.hpp"
#include "pnc/channel.hpp"
#include "pnc/constellation.hpp"
#include "pnc/rng.hpp"
#include "pnc/table.hpp"

namespace testsupport {

inline pnc::SourcePacket random_packet(pnc::Modulation mod, std::size_t n, pnc::Xoshiro256ss& rng)
{
    const pnc::Constellation c(mod);
    pnc::SourcePacket p{mod, {}};
    for (std::size_t i = 0; i < n; ++i)
        p.symbols.push_back(pnc::Label(rng.below(std::uint64_t(c.size()))));
    return p;
}

inline double uniform(pnc::Xoshiro256ss& rng, double lo, double hi)
{
    return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53;
}

inline std::vector<int> as_ints(const pnc::SourcePacket& p)
{
    return {p.symbols.begin(), p.symbols.end()};
}

inline std::vector<double> as_vector(const pnc::JointTable& t)
{
    return {t.values().begin(), t.values().end()};
}

inline std::vector<double> as_vector(const pnc::SymbolTable& t)
{
    return {t.values().begin(), t.values().end()};
}

inline int bps(pnc::Modulation m)
{
    return m == pnc::Modulation::bpsk ? 1 : 2;
}

}  // namespace testsupport
