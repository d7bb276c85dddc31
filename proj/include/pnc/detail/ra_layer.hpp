#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pnc/ra_code.hpp"
#include "pnc/table.hpp"

namespace pnc::detail {

// Floor applied to normalized messages of the loopy decoders.
inline constexpr double message_floor = 1e-30;

template <std::size_t G>
using Dist = std::array<double, G>;

template <std::size_t G>
inline Dist<G> uniform_dist() noexcept
{
    Dist<G> d;
    d.fill(1.0 / double(G));
    return d;
}

template <std::size_t G>
inline void normalize_floor(Dist<G>& d) noexcept
{
    double s = 0.0;
    for (double x : d)
        s += x;
    if (!(s > 0.0) || !std::isfinite(s)) {
        d = uniform_dist<G>();
        return;
    }
    const double inv = 1.0 / s;
    for (double& x : d)
        x = std::max(x * inv, message_floor);
}

// Check and source half of an RA Tanner graph over a group of order G.
// Check n enforces x[n-1] ^ x[n] ^ s~[n] = 0, with x[-1] pinned to the
// identity, so every check has exactly three inputs. Code node n therefore
// touches check n ("cur") and, unless it is the last one, check n + 1
// ("next"). Source m touches the q checks whose interleaved slot maps back
// to m.
template <std::size_t G>
class RaCheckLayer {
public:
    explicit RaCheckLayer(const RaConfig& cfg)
        : n_(cfg.n()), m_(cfg.m), q_(cfg.q),
          checks_of_source_(cfg.m * std::size_t(cfg.q)),
          to_cur_(n_, uniform_dist<G>()), to_next_(n_, uniform_dist<G>()),
          from_cur_(n_, uniform_dist<G>()), from_next_(n_, uniform_dist<G>()),
          h_cur_(n_), h_next_(n_), w_up_(n_, uniform_dist<G>()), w_dn_(n_, uniform_dist<G>()),
          posterior_(m_, uniform_dist<G>())
    {
        std::vector<std::size_t> fill(m_, 0);
        for (std::size_t n = 0; n < n_; ++n) {
            const std::size_t src = cfg.interleaver[n] / std::size_t(q_);
            checks_of_source_[src * std::size_t(q_) + fill[src]++] = n;
        }
    }

    std::size_t code_count() const noexcept { return n_; }
    std::size_t source_count() const noexcept { return m_; }
    int repeat() const noexcept { return q_; }

    // Check indices wired to source m, in increasing order.
    std::span<const std::size_t> checks_of_source(std::size_t m) const noexcept
    {
        return {checks_of_source_.data() + m * std::size_t(q_), std::size_t(q_)};
    }

    // Code -> check messages, written by the code-node side before upward().
    Dist<G>& to_cur(std::size_t n) noexcept { return to_cur_[n]; }
    Dist<G>& to_next(std::size_t n) noexcept { return to_next_[n]; }
    // Check -> code messages produced by downward().
    const Dist<G>& from_cur(std::size_t n) const noexcept { return from_cur_[n]; }
    const Dist<G>& from_next(std::size_t n) const noexcept { return from_next_[n]; }

    const Dist<G>& check_to_source(std::size_t n) const noexcept { return w_up_[n]; }
    const Dist<G>& source_to_check(std::size_t n) const noexcept { return w_dn_[n]; }
    const Dist<G>& source_posterior(std::size_t m) const noexcept { return posterior_[m]; }

    void reset() noexcept
    {
        const auto u = uniform_dist<G>();
        std::fill(to_cur_.begin(), to_cur_.end(), u);
        std::fill(to_next_.begin(), to_next_.end(), u);
        std::fill(from_cur_.begin(), from_cur_.end(), u);
        std::fill(from_next_.begin(), from_next_.end(), u);
        std::fill(w_up_.begin(), w_up_.end(), u);
        std::fill(w_dn_.begin(), w_dn_.end(), u);
        std::fill(posterior_.begin(), posterior_.end(), u);
    }

    // Checks -> interleaved source slots, then source posteriors. Returns the
    // largest absolute change of any source posterior entry.
    double upward() noexcept
    {
        for (std::size_t n = 0; n < n_; ++n) {
            h_cur_[n] = to_cur_[n];
            kernel::walsh_hadamard<G>(h_cur_[n].data());
            h_next_[n] = to_next_[n];
            kernel::walsh_hadamard<G>(h_next_[n].data());
        }
        for (std::size_t n = 0; n < n_; ++n)
            kernel::xor_convolve_hadamard<G>(prev_hadamard(n).data(), h_cur_[n].data(), w_up_[n].data(),
                                             message_floor);

        double change = 0.0;
        for (std::size_t m = 0; m < m_; ++m) {
            Dist<G> post;
            post.fill(1.0);
            for (std::size_t c : checks_of_source(m))
                for (std::size_t i = 0; i < G; ++i)
                    post[i] *= w_up_[c][i];
            normalize_floor(post);
            for (std::size_t i = 0; i < G; ++i)
                change = std::max(change, std::fabs(post[i] - posterior_[m][i]));
            posterior_[m] = post;
        }
        return change;
    }

    // Sources -> checks (extrinsic products), then checks -> code nodes.
    void downward() noexcept
    {
        for (std::size_t m = 0; m < m_; ++m) {
            const auto cs = checks_of_source(m);
            for (std::size_t j = 0; j < cs.size(); ++j) {
                Dist<G> out;
                out.fill(1.0);
                for (std::size_t i = 0; i < cs.size(); ++i) {
                    if (i == j)
                        continue;
                    for (std::size_t g = 0; g < G; ++g)
                        out[g] *= w_up_[cs[i]][g];
                }
                normalize_floor(out);
                w_dn_[cs[j]] = out;
            }
        }
        for (std::size_t n = 0; n < n_; ++n) {
            Dist<G> hw = w_dn_[n];
            kernel::walsh_hadamard<G>(hw.data());
            // check n -> code n uses x[n-1]; check n -> code n-1 uses x[n].
            kernel::xor_convolve_hadamard<G>(prev_hadamard(n).data(), hw.data(), from_cur_[n].data(),
                                             message_floor);
            if (n > 0)
                kernel::xor_convolve_hadamard<G>(h_cur_[n].data(), hw.data(), from_next_[n - 1].data(),
                                                 message_floor);
        }
        from_next_[n_ - 1] = uniform_dist<G>();
    }

private:
    // Hadamard transform of the x[n-1] -> check n message; for n = 0 the
    // pinned identity symbol transforms to all ones.
    const Dist<G>& prev_hadamard(std::size_t n) const noexcept
    {
        static const Dist<G> ones = [] {
            Dist<G> d;
            d.fill(1.0);
            return d;
        }();
        return n == 0 ? ones : h_next_[n - 1];
    }

    std::size_t n_;
    std::size_t m_;
    int q_;
    std::vector<std::size_t> checks_of_source_;
    std::vector<Dist<G>> to_cur_, to_next_, from_cur_, from_next_;
    std::vector<Dist<G>> h_cur_, h_next_;
    std::vector<Dist<G>> w_up_, w_dn_;
    std::vector<Dist<G>> posterior_;
};

}  // namespace pnc::detail
