#include "pnc/table.hpp"

#include <stdexcept>

namespace pnc {

JointTable JointTable::uniform(int k, EdgeKind kind) noexcept
{
    JointTable t;
    t.k = std::uint8_t(k);
    t.kind = kind;
    const double u = 1.0 / double(k * k);
    for (double& x : t.values())
        x = u;
    return t;
}

SymbolTable SymbolTable::uniform(int k) noexcept
{
    SymbolTable t;
    t.k = std::uint8_t(k);
    for (double& x : t.values())
        x = 1.0 / double(k);
    return t;
}

Label argmax(const SymbolTable& t, const Constellation& c)
{
    Label best = c.order()[0];
    double best_v = t.p[best];
    for (Label l : c.order())
        if (t.p[l] > best_v) {
            best_v = t.p[l];
            best = l;
        }
    return best;
}

namespace kernel {

void xor_convolve(std::span<const double> u, std::span<const double> v, std::span<double> out) noexcept
{
    const std::size_t g = out.size();
    for (double& x : out)
        x = 0.0;
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j)
            out[i ^ j] += u[i] * v[j];
    normalize(out);
}

}  // namespace kernel

JointTable pass_shared_a(const JointTable& r)
{
    JointTable q = r;
    q.kind = EdgeKind::inner;
    if (r.k == 2)
        kernel::pass_shared_a<2>(r.p.data(), q.p.data());
    else
        kernel::pass_shared_a<4>(r.p.data(), q.p.data());
    return q;
}

JointTable pass_shared_b(const JointTable& r)
{
    JointTable q = r;
    q.kind = EdgeKind::inner;
    if (r.k == 2)
        kernel::pass_shared_b<2>(r.p.data(), q.p.data());
    else
        kernel::pass_shared_b<4>(r.p.data(), q.p.data());
    return q;
}

JointTable multiply(const JointTable& x, const JointTable& y)
{
    if (x.k != y.k)
        throw std::invalid_argument("multiply: table sizes differ");
    JointTable out = x;
    out.kind = EdgeKind::inner;
    for (int i = 0; i < x.entries(); ++i)
        out.p[i] = x.p[i] * y.p[i];
    kernel::normalize(out.values());
    return out;
}

JointTable xor_convolve(const JointTable& u, const JointTable& v)
{
    if (u.k != v.k)
        throw std::invalid_argument("xor_convolve: table sizes differ");
    JointTable out = JointTable::uniform(u.k);
    kernel::xor_convolve(u.values(), v.values(), out.values());
    return out;
}

}  // namespace pnc
