#include "ohsolve/grid.hpp"

#include <cmath>
#include <string>

#include "ohsolve/errors.hpp"

namespace ohsolve {

Grid1D::Grid1D(double half_width, std::size_t cell_count)
    : half_width_(half_width), cell_count_(cell_count) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ConfigError("grid: half width L must be positive and finite");
  }
  if (cell_count < 4) throw ConfigError("grid: cell count N must be at least 4");
  dx_ = 2.0 * half_width / static_cast<double>(cell_count);
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> xs(cell_count_);
  for (std::size_t i = 0; i < cell_count_; ++i) xs[i] = x(i);
  return xs;
}

Field::Field(const Grid1D& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const Grid1D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridMismatchError("field: " + std::to_string(values_.size()) +
                            " values for a grid of " + std::to_string(grid_.size()) + " cells");
  }
}

std::size_t Field::first_non_finite() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) return i;
  }
  return values_.size();
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other, "field +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other, "field -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (!(a.grid() == b.grid())) {
    throw GridMismatchError(std::string(where) + ": fields live on different grids");
  }
}

double integral(const Field& v) {
  double s = 0.0;
  for (double x : v.values()) s += x;
  return s * v.dx();
}

double l1_norm(const Field& v) {
  double s = 0.0;
  for (double x : v.values()) s += std::abs(x);
  return s * v.dx();
}

double l2_norm_squared(const Field& v) {
  double s = 0.0;
  for (double x : v.values()) s += x * x;
  return s * v.dx();
}

double l2_norm(const Field& v) { return std::sqrt(l2_norm_squared(v)); }

double linf_norm(const Field& v) {
  double m = 0.0;
  for (double x : v.values()) m = std::max(m, std::abs(x));
  return m;
}

double inner_product(const Field& a, const Field& b) {
  require_same_grid(a, b, "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.dx();
}

double l1_distance(const Field& a, const Field& b) {
  require_same_grid(a, b, "l1_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * a.dx();
}

double l2_distance(const Field& a, const Field& b) {
  require_same_grid(a, b, "l2_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s * a.dx());
}

Field restrict_to_coarse(const Field& fine) {
  if (fine.size() % 2 != 0) throw ConfigError("restrict_to_coarse: odd cell count");
  Grid1D coarse(fine.grid().half_width(), fine.size() / 2);
  Field out(coarse);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    out[i] = 0.5 * (fine[2 * i] + fine[2 * i + 1]);
  }
  return out;
}

}  // namespace ohsolve
