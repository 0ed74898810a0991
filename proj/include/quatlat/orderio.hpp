#pragma once

// Plain-text order files:
//
//   quatlat-order v1
//   n 56
//   a -1
//   b -c^16 - c^2
//   denom 2
//   row 2 0 0 ...      (one per basis vector, HNF, ambient coordinates)
//   end

#include <iosfwd>
#include <string>

#include "quatlat/orders.hpp"

namespace quatlat {

void write_order(std::ostream& out, const QuatOrder& O);
std::string order_to_string(const QuatOrder& O);

// SchemaError on malformed input or when the lattice is not an order.
QuatOrder read_order(std::istream& in);
QuatOrder order_from_string(const std::string& text);

}  // namespace quatlat
