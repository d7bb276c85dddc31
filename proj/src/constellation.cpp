#include "pnc/constellation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pnc {

std::string_view to_string(Modulation m)
{
    return m == Modulation::bpsk ? "bpsk" : "qpsk";
}

Modulation parse_modulation(std::string_view s)
{
    if (s == "bpsk" || s == "BPSK")
        return Modulation::bpsk;
    if (s == "qpsk" || s == "QPSK")
        return Modulation::qpsk;
    throw std::invalid_argument("unknown modulation '" + std::string(s) + "'");
}

Constellation::Constellation(Modulation kind) : kind_(kind)
{
    if (kind == Modulation::bpsk) {
        points_ = {cplx{1, 0}, cplx{-1, 0}};
        order_ = {0, 1};
    } else {
        const double h = 1.0 / std::sqrt(2.0);
        points_ = {cplx{h, h}, cplx{-h, h}, cplx{-h, -h}, cplx{h, -h}};
        order_ = {0b00, 0b01, 0b11, 0b10};
    }
    for (int i = 0; i < size(); ++i)
        by_label_[order_[i]] = points_[i];
}

int Constellation::index_of_label(Label l) const noexcept
{
    for (int i = 0; i < size(); ++i)
        if (order_[i] == l)
            return i;
    return -1;
}

cplx pnc_xor(const Constellation& c, cplx a, cplx b)
{
    return c.point(pnc_xor(nearest_label(c, a), nearest_label(c, b)));
}

Label nearest_label(const Constellation& c, cplx y)
{
    Label best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Label l : c.order()) {
        const double d = std::norm(y - c.point(l));
        if (d < best_d) {
            best_d = d;
            best = l;
        }
    }
    return best;
}

SourcePacket modulate(std::span<const std::uint8_t> bits, const Constellation& c)
{
    const auto bps = std::size_t(c.bits_per_symbol());
    if (bits.size() % bps != 0)
        throw std::invalid_argument("bit count " + std::to_string(bits.size()) +
                                    " is not a multiple of bits per symbol");
    SourcePacket p;
    p.modulation = c.kind();
    p.symbols.resize(bits.size() / bps);
    for (std::size_t i = 0; i < p.symbols.size(); ++i) {
        Label l = 0;
        for (std::size_t b = 0; b < bps; ++b)
            l |= Label((bits[i * bps + b] & 1u) << b);
        p.symbols[i] = l;
    }
    return p;
}

std::vector<std::uint8_t> demodulate_bits(const SourcePacket& p)
{
    const int bps = p.modulation == Modulation::bpsk ? 1 : 2;
    std::vector<std::uint8_t> bits;
    bits.reserve(p.symbols.size() * bps);
    for (Label l : p.symbols)
        for (int b = 0; b < bps; ++b)
            bits.push_back(std::uint8_t((l >> b) & 1u));
    return bits;
}

std::vector<cplx> to_points(const SourcePacket& p)
{
    const Constellation c(p.modulation);
    std::vector<cplx> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        out[i] = c.point(p.symbols[i]);
    return out;
}

SourcePacket xor_packets(const SourcePacket& a, const SourcePacket& b)
{
    if (a.size() != b.size() || a.modulation != b.modulation)
        throw std::invalid_argument("xor_packets: packets differ in length or modulation");
    SourcePacket out{a.modulation, std::vector<Label>(a.size())};
    for (std::size_t i = 0; i < a.size(); ++i)
        out.symbols[i] = pnc_xor(a.symbols[i], b.symbols[i]);
    return out;
}

}  // namespace pnc
