#pragma once

#include "irissr/iris/encode.hpp"

namespace irissr::iris {

// Fractional Hamming distance over jointly valid bits, minimized over
// circular column shifts in [-max_shift, +max_shift]. Returns the sentinel
// 1.0 when the joint mask is empty at every shift.
double hamming_distance(const IrisCode& a, const IrisCode& b, int max_shift = 8);

} // namespace irissr::iris
