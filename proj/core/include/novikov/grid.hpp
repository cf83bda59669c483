#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace novikov {

/// Raised when a field or tendency stops being finite (maps to a numerical
/// failure at the CLI level, distinct from an invalid-argument misuse).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised on filesystem problems while writing run artifacts.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform sampling of the periodic interval [0, L). Nodes are x_k = k*L/n.
/// Wavenumbers follow the standard FFT ordering k_j = 2*pi*j/L with
/// j = 0..n/2, -(n/2-1)..-1; the Nyquist slot carries the positive sign.
class PeriodicGrid {
 public:
  PeriodicGrid(int n_points, double length);

  int size() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return spacing_; }
  double node(int k) const { return spacing_ * k; }

  /// Full FFT-ordered wavenumber array (n entries, antisymmetric under
  /// j -> -j except for the shared Nyquist slot).
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }
  double wavenumber(int j) const { return wavenumbers_[j]; }

  /// Largest retained mode index of the 2/3 dealiasing rule.
  int dealias_cutoff() const { return n_ / 3; }

  /// Wrap a coordinate into [0, L).
  double wrap(double x) const {
    double y = std::fmod(x, length_);
    return y < 0.0 ? y + length_ : y;
  }

 private:
  int n_;
  double length_;
  double spacing_;
  std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const PeriodicGrid>;

GridPtr make_grid(int n_points, double length);

/// One real scalar field sampled on a PeriodicGrid.
class RealField {
 public:
  RealField() = default;
  explicit RealField(GridPtr grid, double fill = 0.0);
  RealField(GridPtr grid, std::vector<double> samples);

  bool empty() const { return !grid_; }
  int size() const { return static_cast<int>(samples_.size()); }
  const PeriodicGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  double operator[](int k) const { return samples_[k]; }
  double& operator[](int k) { return samples_[k]; }
  const std::vector<double>& samples() const { return samples_; }
  std::vector<double>& samples() { return samples_; }

  bool is_finite() const;

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double a);

 private:
  GridPtr grid_;
  std::vector<double> samples_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double a, RealField f);

/// y += a*x (grids must match).
void axpy(double a, const RealField& x, RealField& y);

/// Sample f(x) at every grid node.
template <typename F>
RealField sample(const GridPtr& grid, F&& f) {
  RealField out(grid);
  for (int k = 0; k < grid->size(); ++k) out[k] = f(grid->node(k));
  return out;
}

/// Throws NumericalError("<what>: non-finite field") unless every sample is finite.
void require_finite(const RealField& f, const std::string& what);

/// Throws std::invalid_argument unless both fields live on the same grid.
void require_same_grid(const RealField& a, const RealField& b, const std::string& what);

}  // namespace novikov
