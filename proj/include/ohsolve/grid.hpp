#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ohsolve {

/// Uniform cell-centered mesh on [-L, L].
///
/// Cell centers are computed as (i + 1/2 - N/2) * dx, which is exactly
/// antisymmetric under i -> N-1-i in floating point.
class Grid1D {
 public:
  Grid1D(double half_width, std::size_t cell_count);

  double half_width() const { return half_width_; }
  double length() const { return 2.0 * half_width_; }
  std::size_t size() const { return cell_count_; }
  double dx() const { return dx_; }

  double x(std::size_t i) const {
    return (static_cast<double>(i) + 0.5 - 0.5 * static_cast<double>(cell_count_)) * dx_;
  }
  /// Position of the right face of cell i.
  double right_face(std::size_t i) const {
    return (static_cast<double>(i) + 1.0 - 0.5 * static_cast<double>(cell_count_)) * dx_;
  }
  std::vector<double> centers() const;

  /// Same half width and cell count.
  bool operator==(const Grid1D& other) const = default;

 private:
  double half_width_;
  std::size_t cell_count_;
  double dx_;
};

/// Cell values bound to a grid.
class Field {
 public:
  explicit Field(const Grid1D& grid, double fill = 0.0);
  Field(const Grid1D& grid, std::vector<double> values);

  template <class Fn>
  static Field from_function(const Grid1D& grid, Fn&& fn) {
    Field out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) out.values_[i] = fn(grid.x(i));
    return out;
  }

  const Grid1D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double dx() const { return grid_.dx(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& data() const { return values_; }

  /// Index of the first non-finite entry, or size() if all entries are finite.
  std::size_t first_non_finite() const;
  bool all_finite() const { return first_non_finite() == size(); }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  Grid1D grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Throws GridMismatchError unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b, const char* where);

// Midpoint quadratures.
double integral(const Field& v);
double l1_norm(const Field& v);
double l2_norm(const Field& v);
double l2_norm_squared(const Field& v);
double linf_norm(const Field& v);
double inner_product(const Field& a, const Field& b);
double l1_distance(const Field& a, const Field& b);
double l2_distance(const Field& a, const Field& b);

/// Averages pairs of cells onto a grid with half as many cells.
Field restrict_to_coarse(const Field& fine);

}  // namespace ohsolve
