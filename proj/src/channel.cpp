#include "pnc/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pnc {

double ChannelParams::n0() const noexcept
{
    return std::pow(10.0, -es_n0_db / 10.0);
}

double ChannelParams::sigma2() const noexcept
{
    return n0() / 2.0;
}

cplx ChannelParams::rotation() const noexcept
{
    return std::polar(1.0, phi);
}

void ChannelParams::validate() const
{
    if (!(delta >= 0.0 && delta < 1.0))
        throw std::invalid_argument("symbol offset must lie in [0, 1)");
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
        throw std::invalid_argument("phase offset must lie in [0, 2pi)");
    if (!(sync_epsilon > 0.0))
        throw std::invalid_argument("sync_epsilon must be positive");
    if (!std::isfinite(es_n0_db))
        throw std::invalid_argument("es_n0_db must be finite");
}

ReceivedFrame transmit(const SourcePacket& xa, const SourcePacket& xb, const ChannelParams& p,
                       Xoshiro256ss& rng, bool noiseless)
{
    if (xa.size() != xb.size())
        throw std::invalid_argument("transmit: packets differ in length");
    if (xa.modulation != xb.modulation)
        throw std::invalid_argument("transmit: packets differ in modulation");
    if (xa.size() == 0)
        throw std::invalid_argument("transmit: empty packet");
    p.validate();

    const Constellation c(xa.modulation);
    const std::size_t n = xa.size();
    const cplx rot = p.rotation();
    const double s2 = p.sigma2();

    ReceivedFrame f;
    f.n_coded = n;
    f.synchronous = p.synchronous();
    f.modulation = xa.modulation;
    f.samples.assign(2 * n + 1, cplx{});
    f.variances.assign(2 * n + 1, std::numeric_limits<double>::infinity());

    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t k0 = 0; k0 < 2 * n + 1; ++k0) {
        if (!f.present(k0))
            continue;
        const bool odd_sample = (k0 % 2 == 0);  // 1-based odd
        const double var = f.synchronous ? s2 : (odd_sample ? s2 / p.delta : s2 / (1.0 - p.delta));
        cplx y{};
        if (const long ia = ReceivedFrame::a_index(k0, n); ia >= 0)
            y += c.point(xa.symbols[std::size_t(ia)]);
        if (const long ib = ReceivedFrame::b_index(k0); ib >= 0)
            y += c.point(xb.symbols[std::size_t(ib)]) * rot;
        if (!noiseless) {
            const double sd = std::sqrt(var);
            const double re = gauss(rng) * sd;
            const double im = gauss(rng) * sd;
            y += cplx{re, im};
        }
        f.samples[k0] = y;
        f.variances[k0] = var;
    }
    return f;
}

}  // namespace pnc
