#include "pnc/bp_upnc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pnc/evidence.hpp"

namespace pnc {

namespace {

JointTable through_psi(const JointTable& r, std::size_t left_node)
{
    return (left_node % 2 == 0) ? pass_shared_a(r) : pass_shared_b(r);
}

double log_cosh(double x)
{
    const double ax = std::fabs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

}  // namespace

ChainMessages forward_backward(std::span<const JointTable> evidence)
{
    const std::size_t count = evidence.size();
    if (count < 3 || count % 2 == 0)
        throw std::invalid_argument("forward_backward: chain needs 2N+1 evidence tables");
    for (const auto& t : evidence)
        if (t.kind == EdgeKind::absent)
            throw std::invalid_argument("forward_backward: absent evidence in asynchronous mode");

    const int k = evidence.front().k;
    ChainMessages m;
    m.q_right.assign(count, JointTable::uniform(k));
    m.r_right.assign(count, JointTable::uniform(k));
    m.q_left.assign(count, JointTable::uniform(k));
    m.r_left.assign(count, JointTable::uniform(k));

    m.r_right[0] = multiply(evidence[0], m.q_right[0]);
    for (std::size_t i = 0; i + 1 < count; ++i) {
        m.q_right[i + 1] = through_psi(m.r_right[i], i);
        m.r_right[i + 1] = multiply(evidence[i + 1], m.q_right[i + 1]);
    }

    m.r_left[count - 1] = multiply(evidence[count - 1], m.q_left[count - 1]);
    for (std::size_t i = count - 1; i > 0; --i) {
        m.q_left[i - 1] = through_psi(m.r_left[i], i - 1);
        m.r_left[i - 1] = multiply(evidence[i - 1], m.q_left[i - 1]);
    }
    return m;
}

JointTable node_belief(std::span<const JointTable> evidence, const ChainMessages& msgs, std::size_t k0)
{
    if (k0 >= evidence.size())
        throw std::out_of_range("node_belief: node index out of range");
    return multiply(multiply(evidence[k0], msgs.q_right[k0]), msgs.q_left[k0]);
}

JointTable joint_posterior(std::span<const JointTable> evidence, const ChainMessages& msgs, std::size_t n)
{
    if (2 * n + 1 >= evidence.size())
        throw std::out_of_range("joint_posterior: symbol index out of range");
    return node_belief(evidence, msgs, 2 * n + 1);
}

XorDecision decide_xor(std::span<const JointTable> posteriors, const Constellation& c)
{
    XorDecision d;
    d.xor_symbols.reserve(posteriors.size());
    d.posteriors.reserve(posteriors.size());
    for (const auto& t : posteriors) {
        d.posteriors.push_back(xor_posterior(t));
        d.xor_symbols.push_back(argmax(d.posteriors.back(), c));
    }
    return d;
}

Label decide_sync_lane(double y, double sigma2)
{
    // exp{-(y-2)^2/2s} + exp{-(y+2)^2/2s} >= 2 exp{-y^2/2s}
    //   <=>  log cosh(2y/s) >= 2/s
    return log_cosh(2.0 * y / sigma2) >= 2.0 / sigma2 ? Label{0} : Label{1};
}

Label decide_sync(cplx y, const ChannelParams& p)
{
    return decide_sync_lane(y.real(), p.sigma2());
}

std::vector<JointTable> upnc_posteriors(const ReceivedFrame& frame, const ChannelParams& p,
                                        const Constellation& c)
{
    std::vector<JointTable> post;
    post.reserve(frame.n_coded);
    if (frame.synchronous) {
        for (std::size_t n = 0; n < frame.n_coded; ++n)
            post.push_back(evidence(frame, 2 * n + 1, p, c));
        return post;
    }
    const auto ev = evidence_all(frame, p, c);
    const auto msgs = forward_backward(ev);
    for (std::size_t n = 0; n < frame.n_coded; ++n)
        post.push_back(joint_posterior(ev, msgs, n));
    return post;
}

XorDecision decode_upnc(const ReceivedFrame& frame, const ChannelParams& p, const Constellation& c)
{
    return decide_xor(upnc_posteriors(frame, p, c), c);
}

std::vector<Label> decode_sync_benchmark(const ReceivedFrame& frame, const ChannelParams& p,
                                         const Constellation& c)
{
    if (!frame.synchronous)
        throw std::invalid_argument("synchronous benchmark needs a synchronous frame");
    if (p.phi != 0.0)
        throw std::invalid_argument("synchronous benchmark needs phi = 0");
    std::vector<Label> out(frame.n_coded);
    const double s2 = p.sigma2();
    for (std::size_t n = 0; n < frame.n_coded; ++n) {
        const cplx y = frame.samples[2 * n + 1];
        if (c.kind() == Modulation::bpsk) {
            out[n] = decide_sync(y, p);
        } else {
            // Each lane carries (+-1 +- 1)/sqrt2; rescale to unit amplitude.
            const double g = std::numbers::sqrt2;
            const Label re = decide_sync_lane(y.real() * g, 2.0 * s2);
            const Label im = decide_sync_lane(y.imag() * g, 2.0 * s2);
            out[n] = Label(re | (im << 1));
        }
    }
    return out;
}

}  // namespace pnc
