#include "novikov/grid.hpp"

#include <cmath>
#include <numbers>

namespace novikov {

PeriodicGrid::PeriodicGrid(int n_points, double length)
    : n_(n_points), length_(length), spacing_(length / n_points) {
  if (n_points < 8) throw std::invalid_argument("PeriodicGrid: n_points must be >= 8");
  if (n_points % 2 != 0) throw std::invalid_argument("PeriodicGrid: n_points must be even");
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("PeriodicGrid: length must be positive and finite");

  const double k0 = 2.0 * std::numbers::pi / length_;
  wavenumbers_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    const int mode = (j <= n_ / 2) ? j : j - n_;
    wavenumbers_[j] = k0 * mode;
  }
}

GridPtr make_grid(int n_points, double length) {
  return std::make_shared<const PeriodicGrid>(n_points, length);
}

RealField::RealField(GridPtr grid, double fill)
    : grid_(std::move(grid)), samples_(grid_ ? grid_->size() : 0, fill) {}

RealField::RealField(GridPtr grid, std::vector<double> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  if (!grid_ || static_cast<int>(samples_.size()) != grid_->size())
    throw std::invalid_argument("RealField: sample count does not match grid");
}

bool RealField::is_finite() const {
  for (double v : samples_)
    if (!std::isfinite(v)) return false;
  return true;
}

RealField& RealField::operator+=(const RealField& other) {
  require_same_grid(*this, other, "RealField::operator+=");
  for (int k = 0; k < size(); ++k) samples_[k] += other.samples_[k];
  return *this;
}

RealField& RealField::operator-=(const RealField& other) {
  require_same_grid(*this, other, "RealField::operator-=");
  for (int k = 0; k < size(); ++k) samples_[k] -= other.samples_[k];
  return *this;
}

RealField& RealField::operator*=(double a) {
  for (double& v : samples_) v *= a;
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double a, RealField f) { return f *= a; }

void axpy(double a, const RealField& x, RealField& y) {
  require_same_grid(x, y, "axpy");
  for (int k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

void require_finite(const RealField& f, const std::string& what) {
  if (!f.is_finite()) throw NumericalError(what + ": non-finite field");
}

void require_same_grid(const RealField& a, const RealField& b, const std::string& what) {
  if (a.grid_ptr().get() != b.grid_ptr().get()) {
    if (!a.grid_ptr() || !b.grid_ptr() || a.grid().size() != b.grid().size() ||
        a.grid().length() != b.grid().length())
      throw std::invalid_argument(what + ": grid mismatch");
  }
}

}  // namespace novikov
