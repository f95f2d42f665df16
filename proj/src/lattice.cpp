#include "lacelab/lattice.hpp"

namespace lacelab {

std::int64_t orbit_size(const LatticePoint& canonical) {
  const int d = canonical.dim();
  std::int64_t n = 1;
  for (int i = 1; i <= d; ++i) n *= i;
  int run = 1;
  for (int i = 0; i < d; ++i) {
    if (canonical[i] != 0) n *= 2;
    if (i > 0 && canonical[i] == canonical[i - 1]) {
      ++run;
      n /= run;
    } else {
      run = 1;
    }
  }
  return n;
}

std::vector<LatticePoint> canonical_points(int dim, int radius) {
  std::vector<LatticePoint> out;
  LatticePoint p(dim);
  while (true) {
    out.push_back(p);
    int axis = dim - 1;
    while (axis >= 0 && p[axis] == radius) --axis;
    if (axis < 0) break;
    const int v = p[axis] + 1;
    for (int i = axis; i < dim; ++i) p[i] = v;
  }
  return out;
}

}  // namespace lacelab
