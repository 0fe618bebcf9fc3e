// Deliberately naive reference implementations, used only to cross-check the
// library. Nothing here shares code with core/.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

struct Out {
  unsigned y = 0;
  std::vector<unsigned> z;
  bool operator==(const Out&) const = default;
};

// All strings over {0..a-1} of length n, first symbol varying slowest.
inline std::vector<std::vector<unsigned>> all_strings(unsigned a, unsigned n) {
  std::vector<std::vector<unsigned>> out{{}};
  for (unsigned t = 0; t < n; ++t) {
    std::vector<std::vector<unsigned>> next;
    for (const auto& p : out) {
      for (unsigned s = 0; s < a; ++s) {
        auto q = p;
        q.push_back(s);
        next.push_back(q);
      }
    }
    out = next;
  }
  return out;
}

// delta given as delta[state][symbol].
inline Out run_dfa(const std::vector<std::vector<unsigned>>& delta, unsigned init, const std::set<unsigned>& accept,
                   const std::vector<unsigned>& x, long detail = -1) {
  Out o;
  unsigned s = init;
  std::vector<unsigned> traj;
  for (unsigned c : x) {
    s = delta[s][c];
    traj.push_back(s);
  }
  const std::size_t keep = detail < 0 ? traj.size() : std::min<std::size_t>(traj.size(), std::size_t(detail));
  o.z.assign(traj.begin(), traj.begin() + static_cast<long>(keep));
  o.y = accept.count(s) ? 1 : 0;
  return o;
}

inline Out run_linthresh(const std::vector<int>& w, unsigned steps, const std::vector<unsigned>& x) {
  std::vector<int> s(x.begin(), x.end());
  Out o;
  for (unsigned t = 0; t < steps; ++t) {
    int sum = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const long pos = static_cast<long>(s.size()) - 1 - static_cast<long>(i);
      sum += w[i] * (pos >= 0 ? s[static_cast<std::size_t>(pos)] : 0);
    }
    const int z = sum >= 0 ? 1 : 0;
    s.push_back(z);
    o.z.push_back(static_cast<unsigned>(z));
  }
  o.y = o.z.back();
  return o;
}

struct Pair {
  double d_ete = 0.0;
  double agreement = 0.0;
  double rel_info = 0.0;
};

// Plain loop over the support in order.
template <typename F, typename G>
Pair pair(F&& hstar, G&& h, const std::vector<std::vector<unsigned>>& xs, const std::vector<double>& ps) {
  Pair r;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Out a = hstar(xs[i]);
    const Out b = h(xs[i]);
    if (a.y != b.y) {
      r.d_ete += ps[i];
    } else if (a.z == b.z) {
      r.agreement += ps[i];
    }
  }
  r.rel_info = r.agreement == 0.0 ? std::numeric_limits<double>::infinity() : -std::log(r.agreement);
  return r;
}

inline std::vector<double> uniform_probs(std::size_t n) { return std::vector<double>(n, 1.0 / double(n)); }

}  // namespace oracle
