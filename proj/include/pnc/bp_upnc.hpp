#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pnc/channel.hpp"
#include "pnc/constellation.hpp"
#include "pnc/table.hpp"

namespace pnc {

// Messages on the 2N+1 node chain. For node k (0-based):
//   q_right[k]  arrives from the compatibility node on its left  (right-bound)
//   r_right[k]  leaves toward the compatibility node on its right
//   q_left[k]   arrives from the compatibility node on its right (left-bound)
//   r_left[k]   leaves toward the compatibility node on its left
// Boundary messages with no neighbouring node are uniform.
struct ChainMessages {
    std::vector<JointTable> q_right;
    std::vector<JointTable> r_right;
    std::vector<JointTable> q_left;
    std::vector<JointTable> r_left;
};

struct XorDecision {
    std::vector<Label> xor_symbols;
    std::vector<SymbolTable> posteriors;
};

// One right-bound and one left-bound sweep; exact on the chain. Node k and
// k + 1 share x_A when k is even (0-based) and x_B when k is odd.
// Throws std::invalid_argument if any evidence table is ABSENT.
ChainMessages forward_backward(std::span<const JointTable> evidence);

// P(x_A[n], x_B[n] | Y_R) for 0-based symbol n, read off chain node 2n + 1.
JointTable joint_posterior(std::span<const JointTable> evidence, const ChainMessages& msgs,
                           std::size_t n);

// Belief at any chain node (p * q_right * q_left), used for consistency checks.
JointTable node_belief(std::span<const JointTable> evidence, const ChainMessages& msgs,
                       std::size_t k0);

XorDecision decide_xor(std::span<const JointTable> posteriors, const Constellation& c);

// Synchronous BPSK rule on the real part of y: XOR = +1 (label 0) iff the
// same-sign hypotheses carry at least as much mass as the opposite-sign ones.
Label decide_sync(cplx y, const ChannelParams& p);
// Same rule for one real lane with per-source amplitude 1 and variance sigma2.
Label decide_sync_lane(double y, double sigma2);

// Full BP-UPNC: joint posteriors of all N symbol pairs. Synchronous frames
// take the posteriors straight from the even-sample evidence.
std::vector<JointTable> upnc_posteriors(const ReceivedFrame& frame, const ChannelParams& p,
                                        const Constellation& c);
XorDecision decode_upnc(const ReceivedFrame& frame, const ChannelParams& p, const Constellation& c);

// Symbol-by-symbol synchronous benchmark; QPSK runs as two BPSK lanes.
// Requires a synchronous frame and phi = 0.
std::vector<Label> decode_sync_benchmark(const ReceivedFrame& frame, const ChannelParams& p,
                                         const Constellation& c);

}  // namespace pnc
