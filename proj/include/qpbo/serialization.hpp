/**
 * serialization.hpp: bit-exact field persistence.
 *
 * Format (little-endian, fixed layout):
 *   char[8]  magic "QPFIELD1"
 *   uint32   N (dimension)
 *   uint32   K (box radius)
 *   uint8    is_real flag
 *   uint8[3] padding (zero)
 *   double   alpha[N]
 *   double   coeff[(2K+1)^N][2]   (re, im) in box enumeration order
 *
 * Round-tripping reproduces the coefficient bytes exactly.
 */

#ifndef QPBO_SERIALIZATION_HPP
#define QPBO_SERIALIZATION_HPP

#include <iosfwd>
#include <string>

#include "qpbo/field.hpp"

namespace qpbo {

void save_field(std::ostream& os, const QpField& u);
void save_field(const std::string& path, const QpField& u);

QpField load_field(std::istream& is);
QpField load_field(const std::string& path);

} // namespace qpbo

#endif // QPBO_SERIALIZATION_HPP
