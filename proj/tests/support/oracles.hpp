#pragma once

#include "holoq/quaternion.hpp"

namespace testsupport {

// Independent Hamilton product: expand over the 16 basis pairs with an
// explicit Cayley table instead of the closed component formulas the
// implementation uses.
inline holoq::Quaternion hamilton_oracle(const holoq::Quaternion& p, const holoq::Quaternion& q) {
    // basis[r][c] / sign[r][c]: e_r * e_c = sign * e_basis for e in {1,i,j,k}
    static constexpr int basis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static constexpr double sign[4][4] = {
        {1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    const double pc[4] = {p.x, p.y, p.z, p.u};
    const double qc[4] = {q.x, q.y, q.z, q.u};
    double out[4] = {0.0, 0.0, 0.0, 0.0};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[basis[r][c]] += sign[r][c] * pc[r] * qc[c];
    return {out[0], out[1], out[2], out[3]};
}

}  // namespace testsupport
