#pragma once

#include <vector>

#include "sphs/common.hpp"

namespace sphs {

// Axis-aligned box, the declared simulation/analysis domain.
struct Box {
  Vec lo, hi;
  int dim() const { return int(lo.size()); }
  bool contains(const Vec& x) const;
};

// Uniform tensor grid of cell centers over a box. Axis k has shape[k]
// cells of width h(k); cell centers sit at lo + (i+½)h. The same layout
// backs finite-difference stencils (centers as nodes), finite-volume
// operators (faces between cells) and occupation histograms.
//
// Flat indexing: axis 0 is fastest, flat = i0 + shape0*(i1 + shape1*i2).
struct Grid {
  Box box;
  std::vector<int> shape;

  int dim() const { return int(shape.size()); }
  long size() const;
  double h(int axis) const {
    return (box.hi[axis] - box.lo[axis]) / shape[axis];
  }
  double cell_volume() const;
  long stride(int axis) const;
  Vec center(long flat) const;
  std::vector<int> unflatten(long flat) const;
  long flatten(const std::vector<int>& multi) const;
  // flat index of the cell containing x, or -1 if outside the box
  long locate(const Vec& x) const;
};

Grid make_grid(const Box& box, const std::vector<int>& shape);

// Grid function, typically a probability density. values[flat] is the
// value at the cell center; mass integrates with the uniform cell volume.
struct DensityField {
  Grid grid;
  Vec values;

  double mass() const { return values.sum() * grid.cell_volume(); }
  void normalize();
};

DensityField make_density(const Grid& grid);

// Evaluates f at every cell center.
DensityField sample_on_grid(const Grid& grid,
                            const std::function<double(const Vec&)>& f);

}  // namespace sphs
