#include "fogsim/simcore.hpp"

#include <bit>
#include <limits>

namespace fogsim {

namespace {
constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;
}

double RngStream::next_unit() {
  return static_cast<double>(engine_() >> 11) * kTwoPowMinus53;
}

double RngStream::next_open_unit() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * kTwoPowMinus53;
}

double RngStream::next_uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi),
          "RngStream::next_uniform: bounds must be finite");
  require(lo < hi, "RngStream::next_uniform: requires lo < hi");
  const double x = lo + (hi - lo) * next_unit();
  // lo + width*u can round up to hi for very narrow intervals.
  return x < hi ? x : std::nextafter(hi, lo);
}

double RngStream::next_exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate),
          "RngStream::next_exponential: rate must be positive");
  return -std::log(next_open_unit()) / rate;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return mix64(mix64(parent) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t value_key(double value) {
  if (value == 0.0) value = 0.0;
  return std::bit_cast<std::uint64_t>(value);
}

}  // namespace fogsim
