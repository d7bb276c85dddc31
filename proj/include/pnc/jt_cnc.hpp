#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "pnc/channel.hpp"
#include "pnc/constellation.hpp"
#include "pnc/ra_code.hpp"
#include "pnc/table.hpp"

namespace pnc {

struct JointDecision {
    SourcePacket xor_sources;
    std::vector<SymbolTable> posteriors;      // P(s_A[m] ^ s_B[m] | Y_R)
    std::vector<JointTable> pair_posteriors;  // P(s_A[m], s_B[m] | Y_R)
    int iterations_used = 0;
    bool converged = false;
};

// Cascade of the oversampled chain (pair nodes, compatibility nodes, evidence)
// with the RA check/source graph over symbol pairs. In synchronous mode the
// odd chain nodes and all compatibility nodes are dropped and each code pair
// node sees its own even-sample evidence only.
//
// Schedule of one iteration: (1) right-bound chain sweep, (2) left-bound chain
// sweep, (3) code -> check -> source, (4) source -> check -> code. Within the
// sweeps nodes are visited strictly left to right (right to left in (2)).
class JointGraph {
public:
    JointGraph(const RaConfig& cfg, std::size_t sample_count, bool synchronous, const Constellation& c);
    ~JointGraph();
    JointGraph(JointGraph&&) noexcept;
    JointGraph& operator=(JointGraph&&) noexcept;

    std::size_t code_count() const noexcept;
    std::size_t check_count() const noexcept;
    std::size_t source_count() const noexcept;
    std::size_t evidence_count() const noexcept;
    std::size_t compatibility_count() const noexcept;
    bool synchronous() const noexcept;
    const Constellation& constellation() const noexcept;

    // Checks adjacent to code node n (n and n + 1 when it exists).
    std::vector<std::size_t> checks_of_code(std::size_t n) const;
    std::vector<std::size_t> checks_of_source(std::size_t m) const;

    // Evidence, one table per chain node (2N+1 async, N sync). Messages reset
    // to uniform.
    void load_evidence(std::span<const JointTable> tables);
    void load_evidence(const ReceivedFrame& frame, const ChannelParams& p);

    JointDecision iterate(const DecoderLimits& limits = {});

private:
    struct Engine;
    template <int K>
    struct EngineImpl;

    RaConfig cfg_;
    Constellation c_;
    std::size_t samples_;
    bool sync_;
    std::unique_ptr<Engine> engine_;
};

// frame_shape is the number of relay samples (2N + 1) plus the synchronous flag.
// Throws std::invalid_argument when the shape and cfg disagree.
JointGraph build_graph(const RaConfig& cfg, std::size_t sample_count, bool synchronous,
                       const Constellation& c);

JointDecision decode_jtcnc(const ReceivedFrame& frame, const ChannelParams& p, const RaConfig& cfg,
                           const DecoderLimits& limits = {});

// Relay re-encoding of the decided XOR source packet.
Codeword relay_output(const JointDecision& d, const RaConfig& cfg);

}  // namespace pnc
