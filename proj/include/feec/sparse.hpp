// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_SPARSE_HPP
#define FEEC_SPARSE_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace feec
{

using Vector = Eigen::VectorXd;

struct Triplet
{
  int row;
  int col;
  double value;
};

//
// Compressed sparse row matrix. Column ids are strictly ascending within each row and no
// explicit zeros are stored. Immutable once built.
//
class SparseMatrix
{
public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols);

  // Duplicates are summed in input order after a stable sort by (row, col), so the result
  // only depends on the order in which triplets were produced. Exact zeros are dropped.
  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(int n);
  static SparseMatrix from_dense(const Eigen::MatrixXd &dense, double drop_tol = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  double coeff(int row, int col) const;
  double max_abs() const;

  Vector operator*(const Vector &x) const;
  SparseMatrix transpose() const;
  SparseMatrix scaled(double s) const;
  std::vector<Triplet> triplets() const;
  Eigen::MatrixXd to_dense() const;

  // Rows/cols selected by index lists (in the given order).
  SparseMatrix submatrix(std::span<const int> row_ids, std::span<const int> col_ids) const;

  // Coordinate text dump: "rows cols nnz" header, then "row col value" with 17 digits.
  void write_coordinate(std::ostream &os) const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

// Sparse product. Only exact zeros are pruned from the result.
SparseMatrix multiply(const SparseMatrix &a, const SparseMatrix &b);
// alpha A + beta B.
SparseMatrix add(const SparseMatrix &a, const SparseMatrix &b, double alpha = 1.0,
                 double beta = 1.0);

}  // namespace feec

#endif  // FEEC_SPARSE_HPP
