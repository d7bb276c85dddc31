#pragma once

#include <cstddef>
#include <vector>

#include "pnc/channel.hpp"
#include "pnc/constellation.hpp"
#include "pnc/table.hpp"

namespace pnc {

// Exponents below this are clamped so that products of a handful of
// normalized tables never reach the subnormal range.
inline constexpr double min_log_likelihood = -300.0;

// Normalized joint likelihood of the symbol pair touched by sample k0
// (0-based), computed from that sample alone. Edge samples give tables uniform
// over the missing symbol; absent samples give an ABSENT uniform table.
JointTable evidence(const ReceivedFrame& frame, std::size_t k0, const ChannelParams& p,
                    const Constellation& c);

std::vector<JointTable> evidence_all(const ReceivedFrame& frame, const ChannelParams& p,
                                     const Constellation& c);

// Distribution of a XOR b under t. Throws std::invalid_argument for edge and
// absent tables.
SymbolTable xor_posterior(const JointTable& t);

}  // namespace pnc
