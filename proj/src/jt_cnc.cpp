#include "pnc/jt_cnc.hpp"

#include <stdexcept>
#include <string>

#include "pnc/detail/ra_layer.hpp"
#include "pnc/evidence.hpp"

namespace pnc {

struct JointGraph::Engine {
    virtual ~Engine() = default;
    virtual void load(std::span<const JointTable> tables) = 0;
    virtual JointDecision run(const DecoderLimits& limits, const Constellation& c) = 0;
    virtual std::vector<std::size_t> checks_of_source(std::size_t m) const = 0;
};

template <int K>
struct JointGraph::EngineImpl final : JointGraph::Engine {
    static constexpr std::size_t G = std::size_t(K) * K;
    using Dist = detail::Dist<G>;

    EngineImpl(const RaConfig& cfg, std::size_t chain_len, bool sync)
        : n(cfg.n()), m(cfg.m), sync(sync), layer(cfg), evidence(chain_len, detail::uniform_dist<G>()),
          from_left(chain_len, detail::uniform_dist<G>()), from_right(chain_len, detail::uniform_dist<G>())
    {
    }

    std::size_t n;
    std::size_t m;
    bool sync;
    detail::RaCheckLayer<G> layer;
    std::vector<Dist> evidence;
    std::vector<Dist> from_left;   // right-bound message arriving at chain node k
    std::vector<Dist> from_right;  // left-bound message arriving at chain node k

    // Chain node of code pair n.
    std::size_t code_node(std::size_t i) const noexcept { return sync ? i : 2 * i + 1; }

    void load(std::span<const JointTable> tables) override
    {
        for (std::size_t k = 0; k < evidence.size(); ++k) {
            for (std::size_t g = 0; g < G; ++g)
                evidence[k][g] = tables[k].p[g];
            kernel::normalize(evidence[k]);
        }
        layer.reset();
        std::fill(from_left.begin(), from_left.end(), detail::uniform_dist<G>());
        std::fill(from_right.begin(), from_right.end(), detail::uniform_dist<G>());
    }

    std::vector<std::size_t> checks_of_source(std::size_t src) const override
    {
        const auto cs = layer.checks_of_source(src);
        return {cs.begin(), cs.end()};
    }

    // Outgoing chain message of node k (toward one side): evidence times the
    // incoming message from the other side times both check messages when k
    // is a code node.
    void outgoing(std::size_t k, const Dist& incoming, Dist& out) const noexcept
    {
        const Dist& p = evidence[k];
        if (k % 2 == 1) {
            const std::size_t i = k / 2;
            const Dist& u = layer.from_cur(i);
            const Dist& v = layer.from_next(i);
            for (std::size_t g = 0; g < G; ++g)
                out[g] = p[g] * incoming[g] * u[g] * v[g];
        } else {
            for (std::size_t g = 0; g < G; ++g)
                out[g] = p[g] * incoming[g];
        }
        detail::normalize_floor(out);
    }

    static void through_psi(const Dist& r, std::size_t left_node, Dist& q) noexcept
    {
        if (left_node % 2 == 0)
            kernel::pass_shared_a<K>(r.data(), q.data());
        else
            kernel::pass_shared_b<K>(r.data(), q.data());
    }

    void chain_sweeps() noexcept
    {
        const std::size_t len = evidence.size();
        Dist out;
        for (std::size_t k = 0; k + 1 < len; ++k) {
            outgoing(k, from_left[k], out);
            through_psi(out, k, from_left[k + 1]);
        }
        for (std::size_t k = len - 1; k > 0; --k) {
            outgoing(k, from_right[k], out);
            through_psi(out, k - 1, from_right[k - 1]);
        }
    }

    void code_to_check() noexcept
    {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = code_node(i);
            Dist base = evidence[k];
            if (!sync)
                for (std::size_t g = 0; g < G; ++g)
                    base[g] *= from_left[k][g] * from_right[k][g];
            Dist& cur = layer.to_cur(i);
            Dist& next = layer.to_next(i);
            const Dist& u = layer.from_cur(i);
            const Dist& v = layer.from_next(i);
            for (std::size_t g = 0; g < G; ++g) {
                cur[g] = base[g] * v[g];
                next[g] = base[g] * u[g];
            }
            detail::normalize_floor(cur);
            detail::normalize_floor(next);
        }
    }

    JointDecision run(const DecoderLimits& limits, const Constellation& c) override
    {
        JointDecision d;
        for (int it = 1; it <= limits.max_iters; ++it) {
            if (!sync)
                chain_sweeps();
            code_to_check();
            const double change = layer.upward();
            layer.downward();
            d.iterations_used = it;
            if (change < limits.tol) {
                d.converged = true;
                break;
            }
        }

        d.xor_sources = SourcePacket{c.kind(), std::vector<Label>(m)};
        d.posteriors.resize(m);
        d.pair_posteriors.resize(m);
        for (std::size_t src = 0; src < m; ++src) {
            const Dist& post = layer.source_posterior(src);
            JointTable jt = JointTable::uniform(K);
            for (std::size_t g = 0; g < G; ++g)
                jt.p[g] = post[g];
            SymbolTable x;
            x.k = std::uint8_t(K);
            for (int a = 0; a < K; ++a)
                for (int b = 0; b < K; ++b)
                    x.p[std::size_t(a ^ b)] += post[std::size_t(a * K + b)];
            kernel::normalize(x.values());
            d.pair_posteriors[src] = jt;
            d.posteriors[src] = x;
            d.xor_sources.symbols[src] = argmax(x, c);
        }
        return d;
    }
};

JointGraph::JointGraph(const RaConfig& cfg, std::size_t sample_count, bool synchronous,
                       const Constellation& c)
    : cfg_(cfg), c_(c), samples_(sample_count), sync_(synchronous)
{
    if (cfg.m == 0 || cfg.q < 1 || cfg.interleaver.size() != cfg.n())
        throw std::invalid_argument("build_graph: inconsistent RA configuration");
    if (sample_count != 2 * cfg.n() + 1)
        throw std::invalid_argument("build_graph: frame has " + std::to_string(sample_count) +
                                    " samples, code needs " + std::to_string(2 * cfg.n() + 1));
    const std::size_t chain = synchronous ? cfg.n() : sample_count;
    if (c.kind() == Modulation::bpsk)
        engine_ = std::make_unique<EngineImpl<2>>(cfg, chain, synchronous);
    else
        engine_ = std::make_unique<EngineImpl<4>>(cfg, chain, synchronous);
}

JointGraph::~JointGraph() = default;
JointGraph::JointGraph(JointGraph&&) noexcept = default;
JointGraph& JointGraph::operator=(JointGraph&&) noexcept = default;

std::size_t JointGraph::code_count() const noexcept { return cfg_.n(); }
std::size_t JointGraph::check_count() const noexcept { return cfg_.n(); }
std::size_t JointGraph::source_count() const noexcept { return cfg_.m; }
std::size_t JointGraph::evidence_count() const noexcept { return sync_ ? cfg_.n() : samples_; }
std::size_t JointGraph::compatibility_count() const noexcept { return sync_ ? 0 : samples_ - 1; }
bool JointGraph::synchronous() const noexcept { return sync_; }
const Constellation& JointGraph::constellation() const noexcept { return c_; }

std::vector<std::size_t> JointGraph::checks_of_code(std::size_t n) const
{
    if (n >= cfg_.n())
        throw std::out_of_range("checks_of_code: index out of range");
    std::vector<std::size_t> out{n};
    if (n + 1 < cfg_.n())
        out.push_back(n + 1);
    return out;
}

std::vector<std::size_t> JointGraph::checks_of_source(std::size_t m) const
{
    if (m >= cfg_.m)
        throw std::out_of_range("checks_of_source: index out of range");
    return engine_->checks_of_source(m);
}

void JointGraph::load_evidence(std::span<const JointTable> tables)
{
    if (tables.size() != evidence_count())
        throw std::invalid_argument("load_evidence: expected " + std::to_string(evidence_count()) + " tables");
    for (const auto& t : tables) {
        if (t.k != c_.size())
            throw std::invalid_argument("load_evidence: table size does not match constellation");
        if (t.kind == EdgeKind::absent)
            throw std::invalid_argument("load_evidence: absent table on a live evidence node");
    }
    engine_->load(tables);
}

void JointGraph::load_evidence(const ReceivedFrame& frame, const ChannelParams& p)
{
    if (frame.sample_count() != samples_ || frame.synchronous != sync_)
        throw std::invalid_argument("load_evidence: frame shape does not match graph");
    std::vector<JointTable> tables;
    tables.reserve(evidence_count());
    for (std::size_t k0 = 0; k0 < frame.sample_count(); ++k0)
        if (frame.present(k0))
            tables.push_back(evidence(frame, k0, p, c_));
    load_evidence(tables);
}

JointDecision JointGraph::iterate(const DecoderLimits& limits)
{
    if (limits.max_iters < 1)
        throw std::invalid_argument("iterate: max_iters must be at least 1");
    return engine_->run(limits, c_);
}

JointGraph build_graph(const RaConfig& cfg, std::size_t sample_count, bool synchronous, const Constellation& c)
{
    return JointGraph(cfg, sample_count, synchronous, c);
}

JointDecision decode_jtcnc(const ReceivedFrame& frame, const ChannelParams& p, const RaConfig& cfg,
                           const DecoderLimits& limits)
{
    JointGraph g(cfg, frame.sample_count(), frame.synchronous, Constellation(frame.modulation));
    g.load_evidence(frame, p);
    return g.iterate(limits);
}

Codeword relay_output(const JointDecision& d, const RaConfig& cfg)
{
    return encode(d.xor_sources, cfg);
}

}  // namespace pnc
