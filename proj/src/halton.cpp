#include "ghjb/halton.hpp"

#include <stdexcept>

namespace ghjb {

namespace {
constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
}

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  std::uint64_t i = index;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
  }
  return r;
}

Eigen::VectorXd halton_in_box(std::uint64_t index, const Box& box) {
  const int dim = static_cast<int>(box.size());
  if (dim > static_cast<int>(std::size(kPrimes))) {
    throw std::invalid_argument("halton_in_box: dimension too large");
  }
  Eigen::VectorXd x(dim);
  for (int d = 0; d < dim; ++d) {
    const double t = index == 0 ? 0.5 : halton(index, kPrimes[d]);
    x[d] = box[static_cast<std::size_t>(d)].lo +
           t * (box[static_cast<std::size_t>(d)].hi - box[static_cast<std::size_t>(d)].lo);
  }
  return x;
}

}  // namespace ghjb
