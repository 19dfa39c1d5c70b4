#pragma once

#include <cstddef>
#include <vector>

#include "hesslab/errors.hpp"

namespace hesslab {

// Ordered vector of Hessian eigenvalues. Entries are finite by construction;
// n >= 2. Ordering is whatever the caller supplied unless sorted_descending()
// was used.
class Spectrum {
public:
  explicit Spectrum(std::vector<double> values);

  std::size_t n() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Copy with entries sorted lambda_1 >= ... >= lambda_n.
  Spectrum sorted_descending() const;

  // Copy with entry i (0-based) replaced by x.
  Spectrum replaced(std::size_t i, double x) const;

  // Copy scaled by t.
  Spectrum scaled(double t) const;

  // Copy with s added to every entry.
  Spectrum shifted(double s) const;

private:
  std::vector<double> values_;
};

// Dense symmetric n x n matrix. Construction symmetrizes A <- (A + A^T)/2,
// so A_ij == A_ji holds exactly afterwards.
class SymMatrix {
public:
  explicit SymMatrix(std::size_t n);
  SymMatrix(std::size_t n, const std::vector<double>& row_major);

  std::size_t n() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v);  // sets (i,j) and (j,i)

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(const std::vector<double>& d);

  double frobenius_norm() const;
  double max_abs() const;

private:
  std::size_t n_;
  std::vector<double> a_;
};

}  // namespace hesslab
