#include "sphs/grid.hpp"

#include <functional>

namespace sphs {

bool Box::contains(const Vec& x) const {
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

long Grid::size() const {
  long s = 1;
  for (int k : shape) s *= k;
  return s;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= h(a);
  return v;
}

long Grid::stride(int axis) const {
  long s = 1;
  for (int a = 0; a < axis; ++a) s *= shape[a];
  return s;
}

std::vector<int> Grid::unflatten(long flat) const {
  std::vector<int> multi(dim());
  for (int a = 0; a < dim(); ++a) {
    multi[a] = int(flat % shape[a]);
    flat /= shape[a];
  }
  return multi;
}

long Grid::flatten(const std::vector<int>& multi) const {
  long flat = 0;
  for (int a = dim() - 1; a >= 0; --a) flat = flat * shape[a] + multi[a];
  return flat;
}

Vec Grid::center(long flat) const {
  const auto multi = unflatten(flat);
  Vec x(dim());
  for (int a = 0; a < dim(); ++a)
    x[a] = box.lo[a] + (multi[a] + 0.5) * h(a);
  return x;
}

long Grid::locate(const Vec& x) const {
  std::vector<int> multi(dim());
  for (int a = 0; a < dim(); ++a) {
    if (x[a] < box.lo[a] || x[a] > box.hi[a]) return -1;
    int i = int((x[a] - box.lo[a]) / h(a));
    // the top edge belongs to the last cell
    if (i >= shape[a]) i = shape[a] - 1;
    multi[a] = i;
  }
  return flatten(multi);
}

Grid make_grid(const Box& box, const std::vector<int>& shape) {
  if (box.lo.size() != box.hi.size())
    throw ModelError("make_grid: box bounds disagree in dimension");
  if (int(shape.size()) != box.dim())
    throw ModelError("make_grid: shape dimension does not match box");
  for (int a = 0; a < box.dim(); ++a) {
    if (shape[a] < 1) throw ModelError("make_grid: empty axis");
    if (!(box.hi[a] > box.lo[a]))
      throw ModelError("make_grid: box has nonpositive extent on an axis");
  }
  return Grid{box, shape};
}

void DensityField::normalize() {
  const double m = mass();
  if (m <= 0.0 || !std::isfinite(m))
    throw ModelError("DensityField: cannot normalize, mass is not positive");
  values /= m;
}

DensityField make_density(const Grid& grid) {
  return DensityField{grid, Vec::Zero(grid.size())};
}

DensityField sample_on_grid(const Grid& grid,
                            const std::function<double(const Vec&)>& f) {
  DensityField out = make_density(grid);
  for (long i = 0; i < grid.size(); ++i) out.values[i] = f(grid.center(i));
  return out;
}

}  // namespace sphs
