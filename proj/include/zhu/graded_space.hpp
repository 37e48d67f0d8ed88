/**
 * @file graded_space.hpp
 *
 * Exact linear algebra over a Field: sparse vectors on an ordered coordinate
 * list, subspaces kept in reduced row echelon form, quotient bases, small dense
 * matrices, and a stabilization detector for increasing dimension sequences.
 *
 * Coordinates are plain indices. Callers order them by (degree ascending,
 * label lexicographic) so that the earliest nonzero coordinate of a row, its
 * pivot, is reproducible.
 */
#ifndef ZHU_GRADED_SPACE_HPP
#define ZHU_GRADED_SPACE_HPP

#include "zhu/field.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace zhu {

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sorted by coordinate, no stored zeros.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

void axpy(SparseVec& y, const Scalar& a, const SparseVec& x);
SparseVec scaled(const SparseVec& x, const Scalar& a);
SparseVec from_dense(const std::vector<Scalar>& d);
std::vector<Scalar> to_dense(const SparseVec& v, std::size_t n, const Field& f);

/// An ordered coordinate list: each coordinate has a degree and a label.
/// Coordinates are sorted by (degree, label); labels are unique.
class GradedSpace {
 public:
  struct Coord {
    int degree;
    std::string label;
  };

  GradedSpace() = default;
  explicit GradedSpace(std::vector<Coord> coords);

  std::size_t size() const { return coords_.size(); }
  const Coord& coord(std::size_t i) const { return coords_[i]; }
  const std::vector<Coord>& coords() const { return coords_; }
  std::optional<std::size_t> index_of(const std::string& label) const;
  /// Dimension of the given degree.
  std::size_t dim(int degree) const;

 private:
  std::vector<Coord> coords_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Span of a family of vectors in reduced row echelon form.
/// Rows switch to a dense representation once more than half filled.
class Subspace {
 public:
  Subspace() = default;
  Subspace(Field f, std::size_t ambient_dim) : field_(f), n_(ambient_dim) {}

  const Field& field() const { return field_; }
  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return rows_.size(); }

  /// Adds v to the span; returns whether the dimension grew.
  bool insert(const SparseVec& v);
  bool member(const SparseVec& v) const { return reduce(v).empty(); }
  /// Normal form of v modulo the span: supported off the pivot set.
  SparseVec reduce(const SparseVec& v) const;

  std::vector<std::size_t> pivots() const;
  bool is_pivot(std::size_t c) const { return rows_.count(c) != 0; }
  /// The reduced rows, ordered by pivot.
  std::vector<SparseVec> basis() const;

 private:
  struct Row {
    bool dense = false;
    SparseVec sparse;
    std::vector<Scalar> full;

    Scalar at(std::size_t c, const Field& f) const;
    SparseVec to_sparse() const;
  };
  void check(const SparseVec& v) const;
  void normalize(Row& r) const;

  Field field_;
  std::size_t n_ = 0;
  std::map<std::size_t, Row> rows_;
};

/// Representatives of ambient/S: the non-pivot coordinates of S.
class QuotientBasis {
 public:
  QuotientBasis() = default;
  explicit QuotientBasis(const Subspace& s);

  std::size_t size() const { return reps_.size(); }
  const std::vector<std::size_t>& representatives() const { return reps_; }
  /// Rewrites v modulo S as coordinates on the representative list.
  SparseVec project(const SparseVec& v) const;
  /// The ambient vector of representative i.
  SparseVec lift(std::size_t i) const;
  const Subspace& subspace() const { return sub_; }

 private:
  Subspace sub_;
  std::vector<std::size_t> reps_;
  std::unordered_map<std::size_t, std::size_t> slot_;
};

/// Small dense matrix with exact entries.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Field f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), a_(rows * cols, f.zero()) {}
  static Matrix identity(Field f, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return field_; }
  Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool is_zero() const;
  SparseVec column(std::size_t j) const;
  SparseVec row(std::size_t i) const;
  void set_column(std::size_t j, const SparseVec& v);

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& s, const Matrix& a);
  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string to_string() const;

 private:
  Field field_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> a_;
};

std::size_t rank(const Matrix& m);
/// Basis of {x : m x = 0}.
std::vector<SparseVec> kernel(const Matrix& m);
/// Row span of m.
Subspace row_space(const Matrix& m);

/// First index i such that dims[i..i+patience-1] are all equal.
/// Throws LinalgError if dims is not nondecreasing or patience is zero.
std::optional<std::size_t> stabilization_detect(const std::vector<std::size_t>& dims,
                                                std::size_t patience);

}  // namespace zhu

#endif  // ZHU_GRADED_SPACE_HPP
