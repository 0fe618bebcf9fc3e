// Prints the brute-force values frozen into the unit tests. Uses only oracle.hpp.
#include <cstdio>
#include <set>

#include "oracle.hpp"

using oracle::Out;

int main() {
  // 2-state parity vs. the same automaton with delta(0,0) redirected to 1, Unif({0,1}^2).
  {
    const std::vector<std::vector<unsigned>> star = {{0, 1}, {1, 0}};
    const std::vector<std::vector<unsigned>> h = {{1, 1}, {1, 0}};
    const auto xs = oracle::all_strings(2, 2);
    const auto p = oracle::pair([&](auto& x) { return oracle::run_dfa(star, 0, {1}, x); },
                                [&](auto& x) { return oracle::run_dfa(h, 0, {1}, x); }, xs, oracle::uniform_probs(4));
    double cot = 0;
    for (auto& x : xs) cot += (oracle::run_dfa(star, 0, {1}, x) == oracle::run_dfa(h, 0, {1}, x)) ? 0 : 0.25;
    std::printf("parity pair: e2e=%.17g cot=%.17g agree=%.17g\n", p.d_ete, cot, p.agreement);
  }
  // 4-state target vs. delta(0,1) = 2, Unif({0,1}^3).
  {
    const std::vector<std::vector<unsigned>> star = {{1, 3}, {0, 3}, {3, 1}, {3, 2}};
    auto h = star;
    h[0][1] = 2;
    const auto xs = oracle::all_strings(2, 3);
    const auto p = oracle::pair([&](auto& x) { return oracle::run_dfa(star, 0, {3}, x); },
                                [&](auto& x) { return oracle::run_dfa(h, 0, {3}, x); }, xs, oracle::uniform_probs(8));
    std::printf("figure4 pair: d=%.17g agree=%.17g rel=%.17g\n", p.d_ete, p.agreement, p.rel_info);
  }
  // 2-state / 1-symbol class, ids in base 2 with entry (0,0) most significant; example x=(0,0), y=1, z=(1,1).
  {
    for (unsigned id = 0; id < 4; ++id) {
      const std::vector<std::vector<unsigned>> d = {{(id >> 1) & 1U}, {id & 1U}};
      const Out o = oracle::run_dfa(d, 0, {1}, {0, 0});
      std::printf("2x1 id=%u y=%u z=(%u,%u) e2e_ok=%d cot_ok=%d\n", id, o.y, o.z[0], o.z[1], o.y == 1,
                  o.y == 1 && o.z == std::vector<unsigned>{1, 1});
    }
  }
  // LinThresh d=2, T=3, w=(+1,-1), x=(1,0).
  {
    const Out o = oracle::run_linthresh({1, -1}, 3, {1, 0});
    std::printf("linthresh trace: z=(%u,%u,%u) y=%u\n", o.z[0], o.z[1], o.z[2], o.y);
  }
  // Shuffle ideal u = 01 on 001 and 10.
  {
    const std::vector<std::vector<unsigned>> d = {{1, 0}, {1, 2}, {2, 2}};
    const Out a = oracle::run_dfa(d, 0, {2}, {0, 0, 1});
    const Out b = oracle::run_dfa(d, 0, {2}, {1, 0});
    std::printf("shuffle 001: z=(%u,%u,%u) y=%u; 10: y=%u\n", a.z[0], a.z[1], a.z[2], a.y, b.y);
  }
  return 0;
}
