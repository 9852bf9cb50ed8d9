#pragma once

#include <iosfwd>
#include <string>

#include "inls/field.hpp"

namespace inls {

// Binary field container, format INLSFLD1:
//   bytes 0..7   magic "INLSFLD1"
//   uint32       dim
//   uint32       M (points per axis)
//   float64      L (half length)
//   uint32       space tag (0 physical, 1 frequency)
//   float64 x 2  per value, re then im, row-major over the axes
// All integers and floats are little-endian. Throws DomainError on a bad
// magic, malformed header or truncated payload.
void write_field(std::ostream& out, const Field& f);
Field read_field(std::istream& in);

void write_field_file(const std::string& path, const Field& f);
Field read_field_file(const std::string& path);

}  // namespace inls
