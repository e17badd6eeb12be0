#include "triofm/reference.hpp"

#include <cmath>

namespace triofm {

ReferenceEigen ReferenceEigen::create(std::vector<double> eigenvalues, Matrix vectors,
                                      double group_tol) {
    ReferenceEigen ref;
    ref.eigenvalues = std::move(eigenvalues);
    ref.vectors = std::move(vectors);
    const int p = ref.count();
    for (int i = 0; i < p;) {
        std::vector<int> group{i};
        int j = i + 1;
        while (j < p && std::fabs(ref.eigenvalues[static_cast<std::size_t>(j)] -
                                  ref.eigenvalues[static_cast<std::size_t>(j - 1)]) <= group_tol) {
            group.push_back(j);
            ++j;
        }
        ref.degeneracy_groups.push_back(std::move(group));
        i = j;
    }
    return ref;
}

}  // namespace triofm
