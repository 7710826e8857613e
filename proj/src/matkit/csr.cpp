#include "normalkit/matkit/csr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "normalkit/simd/kernels.hpp"

namespace normalkit::matkit {

CsrMatrix::CsrMatrix(Index rows, Index cols, std::vector<Index> row_ptr,
                     std::vector<Index> col_idx, Vector values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows < 0 || cols < 0) throw DimensionError("CsrMatrix: negative dimension");
  require_size(row_ptr_.size(), static_cast<std::size_t>(rows) + 1, "CsrMatrix row_ptr");
  require_size(values_.size(), col_idx_.size(), "CsrMatrix values");
  if (row_ptr_.front() != 0 || row_ptr_.back() != static_cast<Index>(col_idx_.size())) {
    throw DimensionError("CsrMatrix: row_ptr must start at 0 and end at nnz");
  }
  for (Index i = 0; i < rows; ++i) {
    const Index b = row_ptr_[static_cast<std::size_t>(i)];
    const Index e = row_ptr_[static_cast<std::size_t>(i) + 1];
    if (e < b) throw DimensionError("CsrMatrix: row_ptr not monotone");
    for (Index k = b; k < e; ++k) {
      const Index c = col_idx_[static_cast<std::size_t>(k)];
      if (c < 0 || c >= cols) throw DimensionError("CsrMatrix: column index out of range");
      if (k > b && c <= col_idx_[static_cast<std::size_t>(k) - 1]) {
        throw DimensionError("CsrMatrix: column indices not strictly increasing in row " +
                             std::to_string(i));
      }
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(Index rows, Index cols, std::span<const Triplet> triplets) {
  std::vector<Index> count(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw DimensionError("CsrMatrix::from_triplets: index out of range");
    }
    ++count[static_cast<std::size_t>(t.row) + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<Index> cols_tmp(triplets.size());
  Vector vals_tmp(triplets.size());
  std::vector<Index> next(count.begin(), count.end() - 1);
  for (const auto& t : triplets) {
    const auto pos = static_cast<std::size_t>(next[static_cast<std::size_t>(t.row)]++);
    cols_tmp[pos] = t.col;
    vals_tmp[pos] = t.value;
  }
  std::vector<Index> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> col_idx;
  Vector values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  std::vector<std::size_t> order;
  for (Index i = 0; i < rows; ++i) {
    const auto b = static_cast<std::size_t>(count[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(count[static_cast<std::size_t>(i) + 1]);
    order.resize(e - b);
    std::iota(order.begin(), order.end(), b);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t p, std::size_t q) { return cols_tmp[p] < cols_tmp[q]; });
    for (std::size_t p : order) {
      if (!col_idx.empty() && static_cast<Index>(col_idx.size()) > row_ptr[static_cast<std::size_t>(i)] &&
          col_idx.back() == cols_tmp[p]) {
        values.back() += vals_tmp[p];
      } else {
        col_idx.push_back(cols_tmp[p]);
        values.push_back(vals_tmp[p]);
      }
    }
    row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<Index>(col_idx.size());
  }
  return CsrMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::identity(Index n) { return diagonal(Vector(static_cast<std::size_t>(n), 1.0)); }

CsrMatrix CsrMatrix::diagonal(ConstSpan d) {
  const auto n = static_cast<Index>(d.size());
  std::vector<Index> row_ptr(d.size() + 1);
  std::vector<Index> col_idx(d.size());
  std::iota(row_ptr.begin(), row_ptr.end(), Index{0});
  std::iota(col_idx.begin(), col_idx.end(), Index{0});
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), Vector(d.begin(), d.end()));
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& d, double drop_tol) {
  std::vector<Triplet> t;
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = 0; j < d.cols(); ++j)
      if (std::abs(d(i, j)) > drop_tol) t.push_back({i, j, d(i, j)});
  return from_triplets(d.rows(), d.cols(), t);
}

double CsrMatrix::at(Index i, Index j) const {
  const auto b = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i)];
  const auto e = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(b, e, j);
  if (it == e || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void CsrMatrix::apply(ConstSpan x, MutSpan y) const {
  require_size(x.size(), static_cast<std::size_t>(cols_), "CsrMatrix::apply x");
  require_size(y.size(), static_cast<std::size_t>(rows_), "CsrMatrix::apply y");
  simd::active().csr_spmv(static_cast<std::size_t>(rows_), row_ptr_.data(), col_idx_.data(),
                          values_.data(), x.data(), y.data());
}

void CsrMatrix::apply_transpose(ConstSpan x, MutSpan y) const {
  require_size(x.size(), static_cast<std::size_t>(rows_), "CsrMatrix::apply_transpose x");
  require_size(y.size(), static_cast<std::size_t>(cols_), "CsrMatrix::apply_transpose y");
  std::fill(y.begin(), y.end(), 0.0);
  for (Index i = 0; i < rows_; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    for (Index k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      y[static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(k)])] +=
          values_[static_cast<std::size_t>(k)] * xi;
    }
  }
}

Vector CsrMatrix::apply(ConstSpan x) const {
  Vector y(static_cast<std::size_t>(rows_));
  apply(x, y);
  return y;
}

Vector CsrMatrix::apply_transpose(ConstSpan x) const {
  Vector y(static_cast<std::size_t>(cols_));
  apply_transpose(x, y);
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Index> row_ptr(static_cast<std::size_t>(cols_) + 1, 0);
  for (Index c : col_idx_) ++row_ptr[static_cast<std::size_t>(c) + 1];
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<Index> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<Index> col_idx(col_idx_.size());
  Vector values(values_.size());
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      const auto c = static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(k)]);
      const auto pos = static_cast<std::size_t>(next[c]++);
      col_idx[pos] = i;
      values[pos] = values_[static_cast<std::size_t>(k)];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

Vector CsrMatrix::diagonal_values() const {
  Vector d(static_cast<std::size_t>(std::min(rows_, cols_)));
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[static_cast<std::size_t>(i)] = at(i, i);
  return d;
}

std::pair<Index, Index> CsrMatrix::bandwidth() const {
  Index lower = 0;
  Index upper = 0;
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      const Index j = col_idx_[static_cast<std::size_t>(k)];
      lower = std::max(lower, i - j);
      upper = std::max(upper, j - i);
    }
  }
  return {lower, upper};
}

double CsrMatrix::frobenius_norm() const { return simd::nrm2(values_); }

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool CsrMatrix::is_symmetric(double rel_tol) const {
  if (rows_ != cols_) return false;
  const CsrMatrix d = add(*this, 1.0, transpose(), -1.0);
  return d.max_abs() <= rel_tol * std::max(max_abs(), kNormFloor);
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
      d(i, col_idx_[static_cast<std::size_t>(k)]) = values_[static_cast<std::size_t>(k)];
  return d;
}

CsrMatrix add(const CsrMatrix& a, double alpha, const CsrMatrix& b, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("add: shape mismatch");
  std::vector<Index> row_ptr(static_cast<std::size_t>(a.rows()) + 1, 0);
  std::vector<Index> col_idx;
  Vector values;
  col_idx.reserve(static_cast<std::size_t>(a.nnz() + b.nnz()));
  values.reserve(col_idx.capacity());
  const auto& ar = a.row_ptr();
  const auto& br = b.row_ptr();
  for (std::size_t i = 0; i < static_cast<std::size_t>(a.rows()); ++i) {
    auto p = static_cast<std::size_t>(ar[i]);
    auto q = static_cast<std::size_t>(br[i]);
    const auto pe = static_cast<std::size_t>(ar[i + 1]);
    const auto qe = static_cast<std::size_t>(br[i + 1]);
    while (p < pe || q < qe) {
      const Index ca = p < pe ? a.col_idx()[p] : std::numeric_limits<Index>::max();
      const Index cb = q < qe ? b.col_idx()[q] : std::numeric_limits<Index>::max();
      if (ca == cb) {
        col_idx.push_back(ca);
        values.push_back(alpha * a.values()[p++] + beta * b.values()[q++]);
      } else if (ca < cb) {
        col_idx.push_back(ca);
        values.push_back(alpha * a.values()[p++]);
      } else {
        col_idx.push_back(cb);
        values.push_back(beta * b.values()[q++]);
      }
    }
    row_ptr[i + 1] = static_cast<Index>(col_idx.size());
  }
  return CsrMatrix(a.rows(), a.cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix scaled(const CsrMatrix& a, double s) {
  CsrMatrix c = a;
  simd::scal(s, c.values());
  return c;
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimension mismatch");
  const auto nc = static_cast<std::size_t>(b.cols());
  Vector acc(nc, 0.0);
  std::vector<Index> marker(nc, -1);
  std::vector<Index> row_ptr(static_cast<std::size_t>(a.rows()) + 1, 0);
  std::vector<Index> col_idx;
  Vector values;
  std::vector<Index> pattern;
  for (Index i = 0; i < a.rows(); ++i) {
    pattern.clear();
    for (Index k = a.row_ptr()[static_cast<std::size_t>(i)]; k < a.row_ptr()[static_cast<std::size_t>(i) + 1]; ++k) {
      const Index p = a.col_idx()[static_cast<std::size_t>(k)];
      const double av = a.values()[static_cast<std::size_t>(k)];
      for (Index m = b.row_ptr()[static_cast<std::size_t>(p)]; m < b.row_ptr()[static_cast<std::size_t>(p) + 1]; ++m) {
        const auto j = static_cast<std::size_t>(b.col_idx()[static_cast<std::size_t>(m)]);
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          pattern.push_back(static_cast<Index>(j));
        }
        acc[j] += av * b.values()[static_cast<std::size_t>(m)];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (Index j : pattern) {
      col_idx.push_back(j);
      values.push_back(acc[static_cast<std::size_t>(j)]);
    }
    row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<Index>(col_idx.size());
  }
  return CsrMatrix(a.rows(), b.cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix triple_product(const CsrMatrix& p, const CsrMatrix& a) {
  return multiply(p.transpose(), multiply(a, p));
}

CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("Matrix Market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "coordinate") {
    throw ConfigError("Matrix Market: expected a coordinate matrix header");
  }
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer") throw ConfigError("Matrix Market: unsupported field " + field);
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    throw ConfigError("Matrix Market: unsupported symmetry " + symmetry);
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  Index rows = 0, cols = 0, nnz = 0;
  if (!(sizes >> rows >> cols >> nnz)) throw ConfigError("Matrix Market: bad size line");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  for (Index k = 0; k < nnz; ++k) {
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw ConfigError("Matrix Market: truncated entry list");
    t.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) t.push_back({j - 1, i - 1, v});
  }
  return CsrMatrix::from_triplets(rows, cols, t);
}

CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = a.row_ptr()[static_cast<std::size_t>(i)]; k < a.row_ptr()[static_cast<std::size_t>(i) + 1]; ++k)
      out << i + 1 << ' ' << a.col_idx()[static_cast<std::size_t>(k)] + 1 << ' '
          << a.values()[static_cast<std::size_t>(k)] << '\n';
}

void write_matrix_market(const std::string& path, const CsrMatrix& a) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  write_matrix_market(out, a);
}

}  // namespace normalkit::matkit
