#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace groupeq {

using BigInt = boost::multiprecision::cpp_int;

/// Thrown on contract violations and malformed inputs; the message names
/// the violated precondition and, where available, a concrete witness.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline int sign_of(const BigInt& x) { return x.sign(); }

inline BigInt abs_of(const BigInt& x) { return boost::multiprecision::abs(x); }

/// Largest word we are willing to expand letter-by-letter (power roots,
/// relator scans, grouped powers). Inputs beyond this raise Error.
inline constexpr long long kMaxExpandedLetters = 1'000'000;

inline long long checked_small(const BigInt& x, const char* what) {
  if (x > kMaxExpandedLetters || x < -kMaxExpandedLetters) {
    throw Error(std::string(what) + ": magnitude " + x.str() +
                " exceeds the expansion cap " +
                std::to_string(kMaxExpandedLetters));
  }
  return x.convert_to<long long>();
}

}  // namespace groupeq
