#ifndef ZLPCM_PARTITION_HPP
#define ZLPCM_PARTITION_HPP

#include <algorithm>
#include <vector>

namespace zlpcm {

// Cluster labels are 1-based, in canonical first-use order: z[0] == 1 and
// every new label is exactly one larger than the current maximum.

using Partition = std::vector<int>;

inline bool is_canonical(const Partition& z) {
  int seen = 0;
  for (int zi : z) {
    if (zi < 1 || zi > seen + 1) return false;
    if (zi == seen + 1) ++seen;
  }
  return true;
}

// Relabel so labels appear in first-use order. Idempotent.
inline Partition canonicalize(const Partition& z) {
  Partition out(z.size());
  std::vector<int> map;
  for (std::size_t i = 0; i < z.size(); ++i) {
    int label = z[i];
    int mapped = 0;
    for (std::size_t m = 0; m < map.size(); ++m)
      if (map[m] == label) {
        mapped = static_cast<int>(m) + 1;
        break;
      }
    if (mapped == 0) {
      map.push_back(label);
      mapped = static_cast<int>(map.size());
    }
    out[i] = mapped;
  }
  return out;
}

inline int num_groups(const Partition& z) {
  int k = 0;
  for (int zi : z)
    if (zi > k) k = zi;
  return k;
}

inline std::vector<int> group_sizes(const Partition& z) {
  std::vector<int> n(num_groups(z), 0);
  for (int zi : z) ++n[zi - 1];
  return n;
}

// All canonical partitions of n items (restricted growth strings), for the
// enumeration oracles. Bell(n) of them; keep n small.
inline std::vector<Partition> all_partitions(int n) {
  std::vector<Partition> out;
  Partition z(n, 1);
  while (true) {
    out.push_back(z);
    // rightmost position that can still grow within the growth constraint
    int i = n - 1;
    for (; i > 0; --i) {
      int prefix_max = 0;
      for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, z[j]);
      if (z[i] <= prefix_max) break;
    }
    if (i == 0) break;
    ++z[i];
    for (int j = i + 1; j < n; ++j) z[j] = 1;
  }
  return out;
}

}  // namespace zlpcm

#endif
