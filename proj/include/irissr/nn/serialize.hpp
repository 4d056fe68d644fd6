#pragma once

#include <iosfwd>

#include "irissr/nn/network.hpp"

namespace irissr::nn {

// Network blob layout (all integers little-endian):
//   u32  layer_count
//   per layer: u8 kind, 5 x i32 kind-specific fields, f32 extra field
//   then every parameter array in declaration order (layer order; within a
//   layer the order reported by params(), running buffers included) as
//   u64 length + f32 values.
void write_network(std::ostream& out, Network& net);
Network read_network(std::istream& in);

} // namespace irissr::nn
