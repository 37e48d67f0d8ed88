#include "zhu/graded_space.hpp"

#include <algorithm>
#include <sstream>

namespace zhu {

void axpy(SparseVec& y, const Scalar& a, const SparseVec& x) {
  if (a.is_zero() || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  auto i = y.begin();
  auto j = x.begin();
  while (i != y.end() || j != x.end()) {
    if (j == x.end() || (i != y.end() && i->first < j->first)) {
      out.push_back(std::move(*i++));
    } else if (i == y.end() || j->first < i->first) {
      out.emplace_back(j->first, a * j->second);
      ++j;
    } else {
      Scalar s = i->second + a * j->second;
      if (!s.is_zero()) out.emplace_back(i->first, std::move(s));
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

SparseVec scaled(const SparseVec& x, const Scalar& a) {
  SparseVec out;
  if (a.is_zero()) return out;
  out.reserve(x.size());
  for (const auto& [c, v] : x) out.emplace_back(c, v * a);
  return out;
}

SparseVec from_dense(const std::vector<Scalar>& d) {
  SparseVec out;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!d[i].is_zero()) out.emplace_back(i, d[i]);
  return out;
}

std::vector<Scalar> to_dense(const SparseVec& v, std::size_t n, const Field& f) {
  std::vector<Scalar> d(n, f.zero());
  for (const auto& [c, x] : v) d.at(c) = x;
  return d;
}

GradedSpace::GradedSpace(std::vector<Coord> coords) : coords_(std::move(coords)) {
  std::stable_sort(coords_.begin(), coords_.end(), [](const Coord& a, const Coord& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.label < b.label;
  });
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (!index_.emplace(coords_[i].label, i).second)
      throw LinalgError("duplicate basis label '" + coords_[i].label + "'");
}

std::optional<std::size_t> GradedSpace::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t GradedSpace::dim(int degree) const {
  return static_cast<std::size_t>(std::count_if(
      coords_.begin(), coords_.end(), [&](const Coord& c) { return c.degree == degree; }));
}

Scalar Subspace::Row::at(std::size_t c, const Field& f) const {
  if (dense) return full[c];
  auto it = std::lower_bound(sparse.begin(), sparse.end(), c,
                             [](const auto& e, std::size_t k) { return e.first < k; });
  return it != sparse.end() && it->first == c ? it->second : f.zero();
}

SparseVec Subspace::Row::to_sparse() const { return dense ? from_dense(full) : sparse; }

void Subspace::check(const SparseVec& v) const {
  if (!v.empty() && v.back().first >= n_)
    throw LinalgError("coordinate " + std::to_string(v.back().first) +
                      " outside ambient of dimension " + std::to_string(n_));
  for (const auto& e : v)
    if (e.second.field() != field_) throw LinalgError("vector over the wrong field");
}

SparseVec Subspace::reduce(const SparseVec& v) const {
  check(v);
  if (rows_.empty() || v.empty()) return v;
  // Rows vanish on every other pivot, so one pass over the pivots of v suffices.
  std::vector<std::pair<const Row*, Scalar>> hits;
  for (const auto& [c, x] : v)
    if (auto it = rows_.find(c); it != rows_.end()) hits.emplace_back(&it->second, x);
  if (hits.empty()) return v;

  std::vector<Scalar> acc = to_dense(v, n_, field_);
  for (const auto& [row, x] : hits) {
    if (row->dense) {
      for (std::size_t c = 0; c < n_; ++c)
        if (!row->full[c].is_zero()) acc[c] -= x * row->full[c];
    } else {
      for (const auto& [c, y] : row->sparse) acc[c] -= x * y;
    }
  }
  return from_dense(acc);
}

void Subspace::normalize(Row& r) const {
  std::size_t nnz = r.dense ? static_cast<std::size_t>(std::count_if(
                                  r.full.begin(), r.full.end(), [](const Scalar& s) { return !s.is_zero(); }))
                            : r.sparse.size();
  bool want_dense = 2 * nnz > n_;
  if (want_dense && !r.dense) {
    r.full = to_dense(r.sparse, n_, field_);
    r.sparse.clear();
    r.dense = true;
  } else if (!want_dense && r.dense) {
    r.sparse = from_dense(r.full);
    r.full.clear();
    r.dense = false;
  }
}

bool Subspace::insert(const SparseVec& v) {
  SparseVec r = reduce(v);
  if (r.empty()) return false;
  const std::size_t pivot = r.front().first;
  r = scaled(r, r.front().second.inverse());

  for (auto& [p, row] : rows_) {
    Scalar x = row.at(pivot, field_);
    if (x.is_zero()) continue;
    if (row.dense) {
      for (const auto& [c, y] : r) row.full[c] -= x * y;
    } else {
      axpy(row.sparse, -x, r);
    }
    normalize(row);
  }
  Row fresh;
  fresh.sparse = std::move(r);
  normalize(fresh);
  rows_.emplace(pivot, std::move(fresh));
  return true;
}

std::vector<std::size_t> Subspace::pivots() const {
  std::vector<std::size_t> out;
  out.reserve(rows_.size());
  for (const auto& e : rows_) out.push_back(e.first);
  return out;
}

std::vector<SparseVec> Subspace::basis() const {
  std::vector<SparseVec> out;
  out.reserve(rows_.size());
  for (const auto& e : rows_) out.push_back(e.second.to_sparse());
  return out;
}

QuotientBasis::QuotientBasis(const Subspace& s) : sub_(s) {
  for (std::size_t c = 0; c < s.ambient_dim(); ++c)
    if (!s.is_pivot(c)) {
      slot_.emplace(c, reps_.size());
      reps_.push_back(c);
    }
}

SparseVec QuotientBasis::project(const SparseVec& v) const {
  SparseVec out;
  for (auto& [c, x] : sub_.reduce(v)) out.emplace_back(slot_.at(c), x);
  return out;
}

SparseVec QuotientBasis::lift(std::size_t i) const {
  return SparseVec{{reps_.at(i), sub_.field().one()}};
}

Matrix Matrix::identity(Field f, std::size_t n) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Scalar& s) { return s.is_zero(); });
}

SparseVec Matrix::column(std::size_t j) const {
  SparseVec out;
  for (std::size_t i = 0; i < rows_; ++i)
    if (!(*this)(i, j).is_zero()) out.emplace_back(i, (*this)(i, j));
  return out;
}

SparseVec Matrix::row(std::size_t i) const {
  SparseVec out;
  for (std::size_t j = 0; j < cols_; ++j)
    if (!(*this)(i, j).is_zero()) out.emplace_back(j, (*this)(i, j));
  return out;
}

void Matrix::set_column(std::size_t j, const SparseVec& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = field_.zero();
  for (const auto& [i, x] : v) (*this)(i, j) = x;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw LinalgError("matrix shape mismatch in product");
  Matrix c(a.field_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) c(i, j) += x * b(k, j);
    }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LinalgError("matrix shape mismatch in sum");
  Matrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LinalgError("matrix shape mismatch in difference");
  Matrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
  return c;
}

Matrix operator*(const Scalar& s, const Matrix& a) {
  Matrix c = a;
  for (auto& x : c.a_) x *= s;
  return c;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

Subspace row_space(const Matrix& m) {
  Subspace s(m.field(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) s.insert(m.row(i));
  return s;
}

std::size_t rank(const Matrix& m) { return row_space(m).dim(); }

std::vector<SparseVec> kernel(const Matrix& m) {
  Subspace rs = row_space(m);
  std::vector<SparseVec> rows = rs.basis();
  std::vector<std::size_t> piv = rs.pivots();
  std::vector<SparseVec> out;
  const Field& f = m.field();
  // Free columns give one kernel vector each: x_free = 1, x_pivot = -row[free].
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (rs.is_pivot(c)) continue;
    std::vector<Scalar> x(m.cols(), f.zero());
    x[c] = f.one();
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (const auto& [col, v] : rows[r])
        if (col == c) x[piv[r]] = -v;
    out.push_back(from_dense(x));
  }
  return out;
}

std::optional<std::size_t> stabilization_detect(const std::vector<std::size_t>& dims,
                                                std::size_t patience) {
  if (patience == 0) throw LinalgError("patience must be positive");
  for (std::size_t i = 1; i < dims.size(); ++i)
    if (dims[i] < dims[i - 1]) throw LinalgError("dimension sequence is not monotone");
  if (dims.size() < patience) return std::nullopt;
  for (std::size_t i = 0; i + patience <= dims.size(); ++i)
    if (dims[i + patience - 1] == dims[i]) return i;
  return std::nullopt;
}

}  // namespace zhu
