#include "pnc/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pnc {

JointTable evidence(const ReceivedFrame& frame, std::size_t k0, const ChannelParams& p,
                    const Constellation& c)
{
    const std::size_t total = frame.sample_count();
    if (k0 >= total)
        throw std::out_of_range("evidence: sample index out of range");
    const int k = c.size();
    if (!frame.present(k0))
        return JointTable::uniform(k, EdgeKind::absent);

    const bool first = !frame.synchronous && k0 == 0;
    const bool last = !frame.synchronous && k0 + 1 == total;
    const cplx y = frame.samples[k0];
    const double scale = 1.0 / (2.0 * frame.variances[k0]);
    const cplx rot = p.rotation();

    JointTable t;
    t.k = std::uint8_t(k);
    t.kind = first ? EdgeKind::first : (last ? EdgeKind::last : EdgeKind::inner);

    // Squared distances first so the largest likelihood maps to exp(0).
    std::array<double, 16> d2{};
    double dmin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            cplx mean{};
            if (!last)
                mean += c.point(Label(a));
            if (!first)
                mean += c.point(Label(b)) * rot;
            const double d = std::norm(y - mean);
            d2[std::size_t(a * k + b)] = d;
            dmin = std::min(dmin, d);
        }
    for (int i = 0; i < k * k; ++i)
        t.p[std::size_t(i)] = std::exp(std::max(-(d2[std::size_t(i)] - dmin) * scale, min_log_likelihood));
    kernel::normalize(t.values());
    return t;
}

std::vector<JointTable> evidence_all(const ReceivedFrame& frame, const ChannelParams& p,
                                     const Constellation& c)
{
    std::vector<JointTable> out;
    out.reserve(frame.sample_count());
    for (std::size_t k0 = 0; k0 < frame.sample_count(); ++k0)
        out.push_back(evidence(frame, k0, p, c));
    return out;
}

SymbolTable xor_posterior(const JointTable& t)
{
    if (t.kind != EdgeKind::inner)
        throw std::invalid_argument("xor_posterior: edge or absent table");
    SymbolTable out;
    out.k = t.k;
    for (int a = 0; a < t.k; ++a)
        for (int b = 0; b < t.k; ++b)
            out.p[std::size_t(a ^ b)] += t(Label(a), Label(b));
    kernel::normalize(out.values());
    return out;
}

}  // namespace pnc
