#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>

#include "triofm/problems.hpp"

namespace triofm::test {

/// Brute-force second-quantization oracle: applies the momentum-space
/// Hamiltonian term by term to every basis determinant, tracking fermionic
/// signs by explicit sequential operator application (up block before dn
/// block, ascending orbital order inside each block).
struct SignedState {
    std::uint32_t up = 0, dn = 0;
    int sign = 1;
    bool dead = false;
};

int count_below(std::uint32_t bits, int orbital) {
    const std::uint32_t mask = orbital == 0 ? 0u : ((1u << orbital) - 1u);
    return std::popcount(bits & mask);
}

SignedState annihilate_up(SignedState s, int o) {
    if (s.dead || !(s.up & (1u << o))) return {0, 0, 1, true};
    s.sign *= (count_below(s.up, o) % 2 == 0) ? 1 : -1;
    s.up &= ~(1u << o);
    return s;
}

SignedState create_up(SignedState s, int o) {
    if (s.dead || (s.up & (1u << o))) return {0, 0, 1, true};
    s.sign *= (count_below(s.up, o) % 2 == 0) ? 1 : -1;
    s.up |= 1u << o;
    return s;
}

SignedState annihilate_dn(SignedState s, int o) {
    if (s.dead || !(s.dn & (1u << o))) return {0, 0, 1, true};
    const int parity = std::popcount(s.up) + count_below(s.dn, o);
    s.sign *= (parity % 2 == 0) ? 1 : -1;
    s.dn &= ~(1u << o);
    return s;
}

SignedState create_dn(SignedState s, int o) {
    if (s.dead || (s.dn & (1u << o))) return {0, 0, 1, true};
    const int parity = std::popcount(s.up) + count_below(s.dn, o);
    s.sign *= (parity % 2 == 0) ? 1 : -1;
    s.dn |= 1u << o;
    return s;
}

Matrix brute_force_hubbard(const HubbardSpec& spec) {
    const FciBasis basis = enumerate_fci_basis(spec);
    const int n_orb = spec.n_orb();
    const long dim = basis.dimension();
    Matrix h(static_cast<int>(dim), static_cast<int>(dim));

    auto orbital_momentum = [&](int o) {
        return std::pair<int, int>{o % spec.lx, o / spec.lx};
    };
    auto momentum_orbital = [&](int m1, int m2) {
        return ((m1 % spec.lx + spec.lx) % spec.lx) +
               spec.lx * ((m2 % spec.ly + spec.ly) % spec.ly);
    };
    const double pi = 3.141592653589793238462643383279503;

    for (long col = 0; col < dim; ++col) {
        const std::uint32_t up =
            basis.up_dets[static_cast<std::size_t>(col / static_cast<long>(basis.dn_dets.size()))];
        const std::uint32_t dn =
            basis.dn_dets[static_cast<std::size_t>(col % static_cast<long>(basis.dn_dets.size()))];
        const SignedState start{up, dn, 1, false};

        // Hopping: dispersion * number operator per momentum and spin.
        for (int o = 0; o < n_orb; ++o) {
            const auto [m1, m2] = orbital_momentum(o);
            const double eps = -2.0 * spec.t * (std::cos(2.0 * pi * m1 / spec.lx) +
                                                std::cos(2.0 * pi * m2 / spec.ly));
            if (up & (1u << o)) h(static_cast<int>(col), static_cast<int>(col)) += eps;
            if (dn & (1u << o)) h(static_cast<int>(col), static_cast<int>(col)) += eps;
        }

        // Interaction: (U/N) sum over (k, p, q) of
        // a^+_{p-q, up} a^+_{k+q, dn} a_{k, dn} a_{p, up}, all q included.
        for (int p_orb = 0; p_orb < n_orb; ++p_orb)
            for (int k_orb = 0; k_orb < n_orb; ++k_orb)
                for (int q_orb = 0; q_orb < n_orb; ++q_orb) {
                    const auto [pm1, pm2] = orbital_momentum(p_orb);
                    const auto [km1, km2] = orbital_momentum(k_orb);
                    const auto [qm1, qm2] = orbital_momentum(q_orb);
                    SignedState s = annihilate_up(start, p_orb);
                    s = annihilate_dn(s, k_orb);
                    s = create_dn(s, momentum_orbital(km1 + qm1, km2 + qm2));
                    s = create_up(s, momentum_orbital(pm1 - qm1, pm2 - qm2));
                    if (s.dead) continue;
                    const long row = basis.index_of(s.up, s.dn);
                    h(static_cast<int>(row), static_cast<int>(col)) += s.sign * spec.u / n_orb;
                }
    }
    return h;
}

}  // namespace triofm::test
