#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>

#include "pnc/constellation.hpp"

namespace pnc {

enum class EdgeKind : std::uint8_t {
    inner,
    first,   // x_B absent: uniform over b
    last,    // x_A absent: uniform over a
    absent,  // no observation (synchronous odd sample)
};

// Nonnegative table over transmitter symbol pairs (a, b), indexed by labels as
// a * k + b. Because k is a power of two, the pair label a * k + b XORs
// componentwise, so pair tables form a group algebra of order k^2.
struct JointTable {
    std::array<double, 16> p{};
    std::uint8_t k = 2;
    EdgeKind kind = EdgeKind::inner;

    int entries() const noexcept { return int(k) * int(k); }
    double& operator()(Label a, Label b) noexcept { return p[std::size_t(a) * k + b]; }
    double operator()(Label a, Label b) const noexcept { return p[std::size_t(a) * k + b]; }
    std::span<double> values() noexcept { return {p.data(), std::size_t(entries())}; }
    std::span<const double> values() const noexcept { return {p.data(), std::size_t(entries())}; }

    static JointTable uniform(int k, EdgeKind kind = EdgeKind::inner) noexcept;
};

// Distribution over one alphabet (the XOR symbol or a single transmitter).
struct SymbolTable {
    std::array<double, 4> p{};
    std::uint8_t k = 2;

    std::span<double> values() noexcept { return {p.data(), k}; }
    std::span<const double> values() const noexcept { return {p.data(), k}; }

    static SymbolTable uniform(int k) noexcept;
};

// Argmax over labels visited in alphabet order; the first maximum wins.
Label argmax(const SymbolTable& t, const Constellation& c);

namespace kernel {

// Scales v to sum one. A table with no finite positive mass becomes uniform.
inline double normalize(std::span<double> v) noexcept
{
    double s = 0.0;
    for (double x : v)
        s += x;
    if (!(s > 0.0) || !std::isfinite(s)) {
        const double u = 1.0 / double(v.size());
        for (double& x : v)
            x = u;
        return 0.0;
    }
    const double inv = 1.0 / s;
    for (double& x : v)
        x *= inv;
    return s;
}

template <std::size_t G, std::size_t H>
inline void walsh_hadamard_stage(double* v) noexcept
{
    for (std::size_t i = 0; i < G; i += 2 * H)
        for (std::size_t j = i; j < i + H; ++j) {
            const double x = v[j];
            const double y = v[j + H];
            v[j] = x + y;
            v[j + H] = x - y;
        }
}

// In-place unnormalized Walsh-Hadamard transform over (Z_2)^log2(G). Stage
// widths are compile-time so the butterflies unroll.
template <std::size_t G>
inline void walsh_hadamard(double* v) noexcept
{
    static_assert(std::has_single_bit(G));
    [v]<std::size_t... S>(std::index_sequence<S...>) {
        (walsh_hadamard_stage<G, std::size_t(1) << S>(v), ...);
    }(std::make_index_sequence<std::size_t(std::countr_zero(G))>{});
}

// out(s) = sum over x ^ y = s of u(x) v(y), through the Hadamard domain.
// Inputs are given already transformed; out is normalized and floored at
// `floor` to absorb round-off around zero.
template <std::size_t G>
inline void xor_convolve_hadamard(const double* hu, const double* hv, double* out,
                                  double floor) noexcept
{
    for (std::size_t i = 0; i < G; ++i)
        out[i] = hu[i] * hv[i];
    walsh_hadamard<G>(out);
    double s = 0.0;
    for (std::size_t i = 0; i < G; ++i) {
        if (out[i] < floor)
            out[i] = floor;
        s += out[i];
    }
    const double inv = 1.0 / s;
    for (std::size_t i = 0; i < G; ++i)
        out[i] *= inv;
}

// Direct xor convolution, normalized. G^2 multiply-adds.
void xor_convolve(std::span<const double> u, std::span<const double> v, std::span<double> out) noexcept;

// Compatibility node passes: keep the shared coordinate, forget the other.
// q(a, b') = sum_b r(a, b) / k, normalized (shared x_A).
template <int K>
inline void pass_shared_a(const double* r, double* q) noexcept
{
    double m[K];
    double s = 0.0;
    for (int a = 0; a < K; ++a) {
        double acc = 0.0;
        for (int b = 0; b < K; ++b)
            acc += r[a * K + b];
        m[a] = acc;
        s += acc;
    }
    const double inv = (s > 0.0 && std::isfinite(s)) ? 1.0 / (s * K) : 0.0;
    for (int a = 0; a < K; ++a) {
        const double val = inv > 0.0 ? m[a] * inv : 1.0 / (K * K);
        for (int b = 0; b < K; ++b)
            q[a * K + b] = val;
    }
}

// q(a', b) = sum_a r(a, b) / k, normalized (shared x_B).
template <int K>
inline void pass_shared_b(const double* r, double* q) noexcept
{
    double m[K] = {};
    double s = 0.0;
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b)
            m[b] += r[a * K + b];
    for (int b = 0; b < K; ++b)
        s += m[b];
    const double inv = (s > 0.0 && std::isfinite(s)) ? 1.0 / (s * K) : 0.0;
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b)
            q[a * K + b] = inv > 0.0 ? m[b] * inv : 1.0 / (K * K);
}

}  // namespace kernel

// Runtime-sized wrappers over the kernels for the public table types.
JointTable pass_shared_a(const JointTable& r);
JointTable pass_shared_b(const JointTable& r);
JointTable multiply(const JointTable& x, const JointTable& y);
JointTable xor_convolve(const JointTable& u, const JointTable& v);

}  // namespace pnc
