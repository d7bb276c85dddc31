#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pnc {

using cplx = std::complex<double>;

enum class Modulation : std::uint8_t { bpsk = 0, qpsk = 1 };

std::string_view to_string(Modulation m);
Modulation parse_modulation(std::string_view s);

// A transmitted symbol is carried by its Gray label: bit i of the label is the
// sign bit of component i (bit 0 -> real, bit 1 -> imaginary), 0 meaning the
// positive component. With this labeling the PNC-XOR of two points is the
// bitwise XOR of their labels and the all-positive point has label 0.
using Label = std::uint8_t;

inline constexpr Label identity_label = 0;

class Constellation {
public:
    explicit Constellation(Modulation kind);

    Modulation kind() const noexcept { return kind_; }
    int bits_per_symbol() const noexcept { return kind_ == Modulation::bpsk ? 1 : 2; }
    int size() const noexcept { return 1 << bits_per_symbol(); }

    // Fixed alphabet order: BPSK (+1, -1); QPSK (1+j, -1+j, -1-j, 1-j)/sqrt2.
    std::span<const cplx> alphabet() const noexcept { return {points_.data(), std::size_t(size())}; }
    // Labels listed in alphabet order; used for deterministic tie breaking.
    std::span<const Label> order() const noexcept { return {order_.data(), std::size_t(size())}; }

    cplx point(Label l) const noexcept { return by_label_[l]; }
    Label label_of_index(int alphabet_index) const noexcept { return order_[alphabet_index]; }
    int index_of_label(Label l) const noexcept;

private:
    Modulation kind_;
    std::array<cplx, 4> points_{};
    std::array<Label, 4> order_{};
    std::array<cplx, 4> by_label_{};
};

// Componentwise sign product of two points of the same constellation.
inline constexpr Label pnc_xor(Label a, Label b) noexcept { return Label(a ^ b); }
cplx pnc_xor(const Constellation& c, cplx a, cplx b);

// Nearest alphabet point; used to map complex points back to labels in tests and
// at the C boundary.
Label nearest_label(const Constellation& c, cplx y);

struct SourcePacket {
    Modulation modulation = Modulation::bpsk;
    std::vector<Label> symbols;

    std::size_t size() const noexcept { return symbols.size(); }
};

// Gray mapping: bit 0 -> positive component. QPSK takes bits in pairs, the first
// bit setting the real sign. Throws std::invalid_argument on an odd QPSK count.
SourcePacket modulate(std::span<const std::uint8_t> bits, const Constellation& c);
std::vector<std::uint8_t> demodulate_bits(const SourcePacket& p);

std::vector<cplx> to_points(const SourcePacket& p);

SourcePacket xor_packets(const SourcePacket& a, const SourcePacket& b);

}  // namespace pnc
