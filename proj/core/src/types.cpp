#include "cotlearn/types.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace cotlearn {

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Error("format_real: conversion failed");
  return std::string(buf.data(), ptr);
}

std::string ExtReal::to_string() const { return format_real(value_); }

ExtReal neg_log(double p) {
  if (p <= 0.0) return ExtReal::infinity();
  // -log(1) is -0.0 in IEEE; normalise so it prints as "0".
  const double v = -std::log(p);
  return ExtReal(v == 0.0 ? 0.0 : v);
}

}  // namespace cotlearn
