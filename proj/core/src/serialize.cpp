#include "ptdirac/serialize.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ptdirac {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("failed to format double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: " + std::string(s));
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

bool next_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

std::string expect_line(std::istream& is, std::string_view what) {
  std::string line;
  if (!next_line(is, line)) throw std::invalid_argument("unexpected end of input, wanted " + std::string(what));
  return line;
}

int parse_int(const std::string& s) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: " + s);
  return out;
}

}  // namespace

void write_polynomial(std::ostream& os, const Polynomial& p) {
  os << "d " << format_double(p.envelope().real()) << '\n';
  for (const auto& [m, c] : p.terms()) {
    os << m.z_pow << ' ' << m.zbar_pow << ' ' << format_double(c.real()) << ' '
       << format_double(c.imag()) << '\n';
  }
}

Polynomial read_polynomial(std::istream& is) {
  const auto header = split(expect_line(is, "'d <value>' header"));
  if (header.size() != 2 || header[0] != "d") throw std::invalid_argument("bad polynomial header");
  Polynomial p(parse_double(header[1]));
  // Term lines run until a line that does not start with a digit.
  while (true) {
    const auto pos = is.tellg();
    std::string line;
    if (!next_line(is, line)) break;
    const auto tok = split(line);
    if (tok.empty() || !(tok[0][0] >= '0' && tok[0][0] <= '9')) {
      is.clear();
      is.seekg(pos);
      break;
    }
    if (tok.size() != 4) throw std::invalid_argument("bad term line: " + line);
    const Monomial m{parse_int(tok[0]), parse_int(tok[1])};
    if (!ScalarTraits<Complex>::is_zero(p.coefficient(m))) {
      throw std::invalid_argument("duplicate monomial in polynomial text");
    }
    p.add_term(m, {parse_double(tok[2]), parse_double(tok[3])});
  }
  return p;
}

void write_spinor(std::ostream& os, const Spinor& s) {
  os << "spinor\n";
  if (s.energy) {
    os << "energy " << format_double(s.energy->real()) << ' ' << format_double(s.energy->imag())
       << '\n';
  }
  os << "upper\n";
  write_polynomial(os, s.upper);
  os << "lower\n";
  write_polynomial(os, s.lower);
  os << "end\n";
}

Spinor read_spinor(std::istream& is) {
  if (split(expect_line(is, "spinor")) != std::vector<std::string>{"spinor"}) {
    throw std::invalid_argument("bad spinor header");
  }
  std::optional<Complex> energy;
  auto tok = split(expect_line(is, "upper"));
  if (!tok.empty() && tok[0] == "energy") {
    if (tok.size() != 3) throw std::invalid_argument("bad energy line");
    energy = Complex(parse_double(tok[1]), parse_double(tok[2]));
    tok = split(expect_line(is, "upper"));
  }
  if (tok != std::vector<std::string>{"upper"}) throw std::invalid_argument("expected 'upper'");
  auto upper = read_polynomial(is);
  if (split(expect_line(is, "lower")) != std::vector<std::string>{"lower"}) {
    throw std::invalid_argument("expected 'lower'");
  }
  auto lower = read_polynomial(is);
  if (split(expect_line(is, "end")) != std::vector<std::string>{"end"}) {
    throw std::invalid_argument("expected 'end'");
  }
  return Spinor(std::move(upper), std::move(lower), energy);
}

std::string to_text(const Polynomial& p) {
  std::ostringstream os;
  write_polynomial(os, p);
  return os.str();
}

std::string to_text(const Spinor& s) {
  std::ostringstream os;
  write_spinor(os, s);
  return os.str();
}

}  // namespace ptdirac
