#include "triofm/block_vector.hpp"

#include "triofm/rng.hpp"

namespace triofm {

BlockVector random_unit_columns(int n, int p, std::uint64_t seed) {
    BlockVector x(n, p);
    Rng rng(seed);
    for (int j = 0; j < p; ++j) {
        double* c = x.values.col(j);
        for (int i = 0; i < n; ++i) c[i] = rng.next_gaussian();
        const double nrm = norm2(c, n);
        for (int i = 0; i < n; ++i) c[i] /= nrm;
    }
    return x;
}

}  // namespace triofm
