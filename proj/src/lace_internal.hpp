#ifndef LACELAB_SRC_LACE_INTERNAL_HPP
#define LACELAB_SRC_LACE_INTERNAL_HPP

#include <unordered_map>

#include "lacelab/lace.hpp"

namespace lacelab::detail {

using lacelab::edge_bit;
using lacelab::edge_mask;

bool connected_mask(EdgeMask mask, int len);
// Extracted lace of a graph on [0, len]; false when the graph is not connected.
bool lace_of_mask(EdgeMask mask, int len, EdgeMask& out, std::vector<Edge>* elements);
EdgeMask compatible_mask(EdgeMask lace, int len);
EdgeMask full_mask(int len);

class CompatCache {
 public:
  EdgeMask get(EdgeMask lace, int len);

 private:
  struct Key {
    EdgeMask mask;
    int len;
    bool operator==(const Key&) const = default;
  };
  struct Hash {
    std::size_t operator()(const Key& k) const {
      const auto lo = static_cast<std::uint64_t>(k.mask);
      const auto hi = static_cast<std::uint64_t>(k.mask >> 64);
      return std::hash<std::uint64_t>()(lo * 0x9e3779b97f4a7c15ULL ^ hi ^ static_cast<std::uint64_t>(k.len) << 56);
    }
  };
  std::unordered_map<Key, EdgeMask, Hash> map_;
};

// Calls emit(mask, N) for every lace on [0, len] whose edges all pass allowed(s, t).
// Laces are the edge sequences with s_1 = 0, t_N = len, s_i < s_{i+1} < t_i,
// t_i < t_{i+1} and t_i <= s_{i+2}.
template <typename Allowed, typename Emit>
void for_each_lace(int len, Allowed&& allowed, Emit&& emit) {
  struct Rec {
    int len;
    Allowed& allowed;
    Emit& emit;
    void step(int n, int s_i, int t_i, int t_before, EdgeMask m) {
      for (int s = std::max(s_i + 1, t_before); s < t_i; ++s) {
        for (int t = t_i + 1; t <= len; ++t) {
          if (!allowed(s, t)) continue;
          const EdgeMask next = m | edge_mask(s, t);
          if (t == len) {
            emit(next, n + 1);
          } else {
            step(n + 1, s, t, t_i, next);
          }
        }
      }
    }
  };
  Rec rec{len, allowed, emit};
  for (int t = 1; t <= len; ++t) {
    if (!allowed(0, t)) continue;
    if (t == len) {
      emit(edge_mask(0, t), 1);
    } else {
      rec.step(1, 0, t, 0, edge_mask(0, t));
    }
  }
}

}  // namespace lacelab::detail

#endif  // LACELAB_SRC_LACE_INTERNAL_HPP
