#include "lbm/lattice.hpp"

#include <algorithm>
#include <vector>

namespace lbm {

LatticeD3Q27::LatticeD3Q27() {
    std::vector<std::array<int, 3>> moving;
    moving.reserve(26);
    for (int cz = -1; cz <= 1; ++cz)
        for (int cy = -1; cy <= 1; ++cy)
            for (int cx = -1; cx <= 1; ++cx) {
                if (cx == 0 && cy == 0 && cz == 0) continue;
                moving.push_back({cx, cy, cz});
            }
    // The loop above already emits (c_z, c_y, c_x)-lexicographic order.
    c[0] = {0, 0, 0};
    for (int i = 0; i < 26; ++i) c[i + 1] = moving[i];

    // Weights by velocity magnitude class: 8/27, 2/27, 1/54, 1/216.
    for (int i = 0; i < Q; ++i) {
        int m = c[i][0] * c[i][0] + c[i][1] * c[i][1] + c[i][2] * c[i][2];
        switch (m) {
            case 0: w[i] = 8.0 / 27.0; break;
            case 1: w[i] = 2.0 / 27.0; break;
            case 2: w[i] = 1.0 / 54.0; break;
            default: w[i] = 1.0 / 216.0; break;
        }
    }

    for (int i = 0; i < Q; ++i) {
        opposite[i] = -1;
        for (int j = 0; j < Q; ++j) {
            if (c[j][0] == -c[i][0] && c[j][1] == -c[i][1] && c[j][2] == -c[i][2]) {
                opposite[i] = j;
                break;
            }
        }
    }
}

const LatticeD3Q27& LatticeD3Q27::instance() {
    static const LatticeD3Q27 lat;
    return lat;
}

}  // namespace lbm
