#include "hesslab/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace hesslab {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw invalid_input("Spectrum: need at least 2 eigenvalues");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw invalid_input("Spectrum: non-finite entry");
    }
  }
}

Spectrum Spectrum::sorted_descending() const {
  std::vector<double> v = values_;
  std::sort(v.begin(), v.end(), std::greater<double>());
  return Spectrum(std::move(v));
}

Spectrum Spectrum::replaced(std::size_t i, double x) const {
  if (i >= values_.size()) throw invalid_input("Spectrum::replaced: index out of range");
  std::vector<double> v = values_;
  v[i] = x;
  return Spectrum(std::move(v));
}

Spectrum Spectrum::scaled(double t) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= t;
  return Spectrum(std::move(v));
}

Spectrum Spectrum::shifted(double s) const {
  std::vector<double> v = values_;
  for (double& x : v) x += s;
  return Spectrum(std::move(v));
}

SymMatrix::SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
  if (n < 2) throw invalid_input("SymMatrix: need n >= 2");
}

SymMatrix::SymMatrix(std::size_t n, const std::vector<double>& row_major) : SymMatrix(n) {
  if (row_major.size() != n * n) {
    throw invalid_input("SymMatrix: wrong number of entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.5 * (row_major[i * n + j] + row_major[j * n + i]);
      if (!std::isfinite(v)) throw invalid_input("SymMatrix: non-finite entry");
      a_[i * n + j] = v;
    }
  }
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  a_[i * n_ + j] = v;
  a_[j * n_ + i] = v;
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace hesslab
