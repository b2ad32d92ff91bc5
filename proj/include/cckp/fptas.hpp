#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cckp/model.hpp"

namespace cckp {

// Full use of the first `prefix` components of an item, treated as one
// all-or-nothing unit by the dynamic program.
struct Element {
  std::size_t item = 0;
  std::size_t prefix = 0;  // 1..n_j
  double weight = 0.0;
  double value = 0.0;
  std::int64_t level = 0;  // value on the grid, rounded down
};

// Discretized value axis: level v stands for value v * step.
struct ValueGrid {
  double step = 1.0;
  std::size_t levels = 1;
};

// d(i, l, v): minimal weight reaching level v with l elements out of the
// first i, at most one element per item. Unattainable states hold W + 1.
class DpTable {
 public:
  DpTable(std::size_t elements, std::size_t cardinality, std::size_t levels,
          double sentinel);

  double at(std::size_t i, std::size_t l, std::size_t v) const {
    return cells_[(i * (cardinality_ + 1) + l) * levels_ + v];
  }
  double& at(std::size_t i, std::size_t l, std::size_t v) {
    return cells_[(i * (cardinality_ + 1) + l) * levels_ + v];
  }

  std::size_t elements() const { return elements_; }
  std::size_t cardinality() const { return cardinality_; }
  std::size_t levels() const { return levels_; }
  double sentinel() const { return sentinel_; }

 private:
  std::size_t elements_;
  std::size_t cardinality_;
  std::size_t levels_;
  double sentinel_;
  std::vector<double> cells_;
};

struct DpOptions {
  // Upper bound on levels * m * C for any designated item.
  double state_budget = 5e8;
};

// Elements of every item except `excluded`, items in id-ascending order,
// with levels floor(value / step).
std::vector<Element> build_elements(const Instance& inst, std::size_t excluded,
                                    double step);

// Grid for the designated item: levels cover the largest total reachable
// with at most C items other than `designated`.
ValueGrid make_grid(const Instance& inst, std::size_t designated, double step);

DpTable build_dp_table(const Instance& inst, const std::vector<Element>& elements,
                       const ValueGrid& grid);

// (1 - epsilon)-approximation, epsilon in (0, 1). Grid step is
// epsilon * max_j R_j(w_j) / C.
Solution fptas_solve(const Instance& inst, double epsilon, DpOptions options = {});

// Exact optimum for instances whose utilities become integers when
// multiplied by `scale` (scale <= 1e4, total scaled utility <= 1e6).
Solution dp_exact_small(const Instance& inst, double scale = 1.0, DpOptions options = {});

}  // namespace cckp
