// SPDX-License-Identifier: Apache-2.0

#include "feec/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "feec/error.hpp"

namespace feec
{

SparseMatrix::SparseMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0)
{
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets)
{
  for (const auto &t : triplets)
  {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
    {
      throw UsageError("triplet index out of range");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet &a, const Triplet &b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t i = 0;
  while (i < triplets.size())
  {
    const int r = triplets[i].row;
    const int c = triplets[i].col;
    double s = 0.0;
    for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; i++)
    {
      s += triplets[i].value;
    }
    if (s != 0.0)
    {
      m.col_idx_.push_back(c);
      m.values_.push_back(s);
      m.row_ptr_[r + 1]++;
    }
  }
  for (int r = 0; r < rows; r++)
  {
    m.row_ptr_[r + 1] += m.row_ptr_[r];
  }
  return m;
}

SparseMatrix SparseMatrix::identity(int n)
{
  std::vector<Triplet> t;
  t.reserve(n);
  for (int i = 0; i < n; i++)
  {
    t.push_back({i, i, 1.0});
  }
  return from_triplets(n, n, std::move(t));
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd &dense, double drop_tol)
{
  std::vector<Triplet> t;
  for (Eigen::Index r = 0; r < dense.rows(); r++)
  {
    for (Eigen::Index c = 0; c < dense.cols(); c++)
    {
      if (std::abs(dense(r, c)) > drop_tol)
      {
        t.push_back({static_cast<int>(r), static_cast<int>(c), dense(r, c)});
      }
    }
  }
  return from_triplets(static_cast<int>(dense.rows()), static_cast<int>(dense.cols()),
                       std::move(t));
}

double SparseMatrix::coeff(int row, int col) const
{
  const auto first = col_idx_.begin() + row_ptr_[row];
  const auto last = col_idx_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(first, last, col);
  return (it != last && *it == col) ? values_[it - col_idx_.begin()] : 0.0;
}

double SparseMatrix::max_abs() const
{
  double m = 0.0;
  for (double v : values_)
  {
    m = std::max(m, std::abs(v));
  }
  return m;
}

Vector SparseMatrix::operator*(const Vector &x) const
{
  if (x.size() != cols_)
  {
    throw UsageError("matrix-vector size mismatch");
  }
  Vector y = Vector::Zero(rows_);
  for (int r = 0; r < rows_; r++)
  {
    double s = 0.0;
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; p++)
    {
      s += values_[p] * x[col_idx_[p]];
    }
    y[r] = s;
  }
  return y;
}

SparseMatrix SparseMatrix::transpose() const
{
  SparseMatrix t(cols_, rows_);
  t.col_idx_.resize(values_.size());
  t.values_.resize(values_.size());
  for (int c : col_idx_)
  {
    t.row_ptr_[c + 1]++;
  }
  for (int r = 0; r < cols_; r++)
  {
    t.row_ptr_[r + 1] += t.row_ptr_[r];
  }
  std::vector<int> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  for (int r = 0; r < rows_; r++)
  {
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; p++)
    {
      const int q = next[col_idx_[p]]++;
      t.col_idx_[q] = r;
      t.values_[q] = values_[p];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::scaled(double s) const
{
  SparseMatrix m = *this;
  for (double &v : m.values_)
  {
    v *= s;
  }
  return m;
}

std::vector<Triplet> SparseMatrix::triplets() const
{
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (int r = 0; r < rows_; r++)
  {
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; p++)
    {
      t.push_back({r, col_idx_[p], values_[p]});
    }
  }
  return t;
}

Eigen::MatrixXd SparseMatrix::to_dense() const
{
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int r = 0; r < rows_; r++)
  {
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; p++)
    {
      d(r, col_idx_[p]) = values_[p];
    }
  }
  return d;
}

SparseMatrix SparseMatrix::submatrix(std::span<const int> row_ids,
                                     std::span<const int> col_ids) const
{
  std::vector<int> col_map(cols_, -1);
  for (std::size_t j = 0; j < col_ids.size(); j++)
  {
    col_map[col_ids[j]] = static_cast<int>(j);
  }
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < row_ids.size(); i++)
  {
    const int r = row_ids[i];
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; p++)
    {
      const int c = col_map[col_idx_[p]];
      if (c >= 0)
      {
        t.push_back({static_cast<int>(i), c, values_[p]});
      }
    }
  }
  return from_triplets(static_cast<int>(row_ids.size()), static_cast<int>(col_ids.size()),
                       std::move(t));
}

void SparseMatrix::write_coordinate(std::ostream &os) const
{
  os << rows_ << ' ' << cols_ << ' ' << values_.size() << '\n';
  char buf[64];
  for (int r = 0; r < rows_; r++)
  {
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; p++)
    {
      std::snprintf(buf, sizeof buf, "%.17g", values_[p]);
      os << r << ' ' << col_idx_[p] << ' ' << buf << '\n';
    }
  }
}

SparseMatrix multiply(const SparseMatrix &a, const SparseMatrix &b)
{
  if (a.cols() != b.rows())
  {
    throw UsageError("matrix product size mismatch");
  }
  const auto arp = a.row_ptr();
  const auto aci = a.col_idx();
  const auto av = a.values();
  const auto brp = b.row_ptr();
  const auto bci = b.col_idx();
  const auto bv = b.values();
  std::vector<Triplet> t;
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<int> touched;
  std::vector<char> mark(b.cols(), 0);
  for (int r = 0; r < a.rows(); r++)
  {
    touched.clear();
    for (int p = arp[r]; p < arp[r + 1]; p++)
    {
      const int k = aci[p];
      for (int q = brp[k]; q < brp[k + 1]; q++)
      {
        const int c = bci[q];
        if (!mark[c])
        {
          mark[c] = 1;
          touched.push_back(c);
        }
        acc[c] += av[p] * bv[q];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int c : touched)
    {
      t.push_back({r, c, acc[c]});
      acc[c] = 0.0;
      mark[c] = 0;
    }
  }
  return SparseMatrix::from_triplets(a.rows(), b.cols(), std::move(t));
}

SparseMatrix add(const SparseMatrix &a, const SparseMatrix &b, double alpha, double beta)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
  {
    throw UsageError("matrix sum size mismatch");
  }
  auto t = a.scaled(alpha).triplets();
  auto tb = b.scaled(beta).triplets();
  t.insert(t.end(), tb.begin(), tb.end());
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

}  // namespace feec
