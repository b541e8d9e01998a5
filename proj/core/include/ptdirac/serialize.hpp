#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "ptdirac/weighted_polynomial.hpp"

namespace ptdirac {

// Shortest text that parses back to the same double.
std::string format_double(double x);
double parse_double(std::string_view s);

// Canonical text form:
//   d <envelope>
//   <m> <n> <re> <im>      one line per stored term, ascending (m, n)
void write_polynomial(std::ostream& os, const Polynomial& p);
Polynomial read_polynomial(std::istream& is);

// spinor
// energy <re> <im>        (only when present)
// upper
// <polynomial>
// lower
// <polynomial>
// end
void write_spinor(std::ostream& os, const Spinor& s);
Spinor read_spinor(std::istream& is);

std::string to_text(const Polynomial& p);
std::string to_text(const Spinor& s);

}  // namespace ptdirac
