#include <enlab/errors.hpp>
#include <enlab/rational.hpp>

#include <cctype>
#include <stdexcept>

namespace enlab {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::string strip_plus(std::string_view s) {
  return std::string(!s.empty() && s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  const auto den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-')
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  mpz_class p(strip_plus(num), 10);
  mpz_class q(strip_plus(den), 10);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonRefiningFiltration: return "NonRefiningFiltration";
    case ErrorKind::ProbabilityNotOne: return "ProbabilityNotOne";
    case ErrorKind::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorKind::InvalidSpace: return "InvalidSpace";
    case ErrorKind::NotAdapted: return "NotAdapted";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotMartingale: return "NotMartingale";
    case ErrorKind::NotHonest: return "NotHonest";
    case ErrorKind::NotClassH: return "NotClassH";
    case ErrorKind::ZtildeOneAfterTau: return "ZtildeOneAfterTau";
    case ErrorKind::GenerationExhausted: return "GenerationExhausted";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::InvalidWitness: return "InvalidWitness";
    case ErrorKind::InvalidDrift: return "InvalidDrift";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace enlab
