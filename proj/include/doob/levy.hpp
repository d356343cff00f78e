#pragma once

#include "doob/cylinder.hpp"
#include "doob/gridpath.hpp"

namespace doob::bm {

// Quantized Levy midpoint construction: row m of the bit array codes one unit
// of path time. Each row carries 2^L Gaussian coefficients of q bits each
// (q in [2,8]); coefficient c's bits sit at columns c*q .. c*q+q-1, most
// significant first, and decode to z = norm_cdf_inv((B + 1/2) / 2^q).
//
// Coefficient order within a row: c = 0 is the unit-time endpoint
// displacement; c >= 1 is the dyadic midpoint in heap order (level
// j = floor(log2 c) + 1, scaled by 2^-(j+1)/2). Rows are concatenated in
// order. Missing bits read as 0.
//
// The inverse recovers each coefficient from the dyadic values, maps it
// through the normal CDF and emits the leading q bits; because quantized
// coefficients sit at dyadic midpoints, 2^-(q+1) >= 2^-9 away from the cell
// boundary, the round trip is exact for every represented bit.
GridPath bits_to_path(const bits::BitAssignment& bits, unsigned depth,
                      unsigned bits_per_coeff);

bits::BitAssignment path_to_bits(const GridPath& path, unsigned depth,
                                 unsigned bits_per_coeff);

}  // namespace doob::bm
