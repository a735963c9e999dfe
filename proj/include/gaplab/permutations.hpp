#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

namespace gaplab {

// Permutation of {0, ..., t-1} in image form: p[c] is the image of c.
using Permutation = std::vector<int>;

inline Permutation identity_permutation(int t) {
  Permutation p(t);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// (p o q)(c) = p(q(c))
inline Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("compose: size mismatch");
  }
  Permutation r(p.size());
  for (size_t c = 0; c < p.size(); ++c) r[c] = p[q[c]];
  return r;
}

inline Permutation inverse(const Permutation& p) {
  Permutation r(p.size());
  for (size_t c = 0; c < p.size(); ++c) r[p[c]] = static_cast<int>(c);
  return r;
}

inline int cycle_count(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  int cycles = 0;
  for (size_t c = 0; c < p.size(); ++c) {
    if (seen[c]) continue;
    ++cycles;
    size_t j = c;
    while (!seen[j]) {
      seen[j] = true;
      j = static_cast<size_t>(p[j]);
    }
  }
  return cycles;
}

inline std::vector<Permutation> all_permutations(int t) {
  if (t < 0 || t > 8) {
    throw std::invalid_argument("all_permutations: order " + std::to_string(t) +
                                " out of supported range");
  }
  std::vector<Permutation> out;
  Permutation p = identity_permutation(t);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace gaplab
