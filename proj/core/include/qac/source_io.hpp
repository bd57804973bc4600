#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "qac/errors.hpp"
#include "qac/numeric.hpp"
#include "qac/penalty_spec.hpp"

namespace qac {

// Weight lists are plain text: whitespace-separated values, one or more per
// line, '#' starting a comment, blank lines ignored. Values are decimals,
// integers, or fractions p/q; exact mode keeps fractions exact. Parse errors
// carry the 1-based line number.
template <class T>
std::vector<T> load_weights(std::istream& in) {
  std::vector<T> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream toks(line);
    std::string tok;
    while (toks >> tok) {
      T v;
      try {
        v = detail::parse_value_token<T>(tok, "weight");
      } catch (const InvalidParameterError& e) {
        throw InputError(e.what(), lineno);
      }
      if (!(v > T(0))) throw InputError("weight must be positive: '" + tok + "'", lineno);
      out.push_back(std::move(v));
    }
  }
  if (out.empty()) throw InputError("no weights in the input", lineno > 0 ? lineno : 1);
  return out;
}

template <class T>
std::vector<T> load_weights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_weights<T>(in);
}

// Scales weights to unit sum; exact arithmetic stays exact.
template <class T>
void normalize_weights(std::vector<T>& w) {
  T sum{};
  for (const T& v : w) sum += v;
  if (!(sum > T(0))) throw InvalidParameterError("weights must sum to a positive value");
  for (T& v : w) v = v / sum;
}

}  // namespace qac
