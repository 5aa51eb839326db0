#pragma once

#include <vector>

#include "enriques/algebra.hpp"

namespace enriques {

// Dense matrix of scalars over one field.
class ExactMatrix {
 public:
  ExactMatrix(const FieldSpec& fs, size_t rows, size_t cols)
      : spec_(fs), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(fs)) {}

  static ExactMatrix identity(const FieldSpec& fs, size_t n) {
    ExactMatrix m(fs, n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(fs);
    return m;
  }

  static ExactMatrix from_rows(const FieldSpec& fs, const std::vector<std::vector<Scalar>>& rows) {
    size_t nc = rows.empty() ? 0 : rows[0].size();
    ExactMatrix m(fs, rows.size(), nc);
    for (size_t r = 0; r < rows.size(); ++r) {
      check_internal(rows[r].size() == nc, "ragged rows");
      for (size_t c = 0; c < nc; ++c) {
        if (rows[r][c].spec() != fs)
          fail(Errc::MixedFields, "matrix entry over " + rows[r][c].spec().str() +
                                      " in a matrix over " + fs.str());
        m.at(r, c) = rows[r][c];
      }
    }
    return m;
  }

  const FieldSpec& spec() const { return spec_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  Scalar& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const Scalar& at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  void set(size_t r, size_t c, const Scalar& v) {
    if (v.spec() != spec_)
      fail(Errc::MixedFields,
           "matrix entry over " + v.spec().str() + " in a matrix over " + spec_.str());
    at(r, c) = v;
  }

  std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
    check_internal(v.size() == cols_, "dimension mismatch in apply");
    std::vector<Scalar> out(rows_, Scalar::zero(spec_));
    for (size_t r = 0; r < rows_; ++r)
      for (size_t c = 0; c < cols_; ++c) out[r] += at(r, c) * v[c];
    return out;
  }

 private:
  FieldSpec spec_;
  size_t rows_, cols_;
  std::vector<Scalar> data_;
};

struct Rref {
  ExactMatrix mat;                 // reduced row echelon form
  std::vector<size_t> pivot_cols;  // one per pivot row, ascending
  std::vector<size_t> free_cols;
  size_t rank() const { return pivot_cols.size(); }
};

// Deterministic reduced row echelon form.  Pivot rule: leftmost column,
// first row with a unit entry.  Over K[e] this mirrors the elimination of
// the value-part matrix; a column carrying only pure-epsilon entries means
// the system is not free over K[e] and is rejected.
inline Rref rref(ExactMatrix m) {
  const FieldSpec fs = m.spec();
  Rref out{std::move(m), {}, {}};
  ExactMatrix& a = out.mat;
  size_t pr = 0;
  for (size_t c = 0; c < a.cols(); ++c) {
    size_t sel = a.rows();
    for (size_t r = pr; r < a.rows(); ++r) {
      if (a.at(r, c).is_unit()) {
        sel = r;
        break;
      }
    }
    if (sel == a.rows()) {
      if (fs.dual) {
        for (size_t r = pr; r < a.rows(); ++r)
          require(a.at(r, c).is_zero(), Errc::NonUnitPivot,
                  "pure-epsilon pivot candidate; system is not free over " + fs.str());
      }
      out.free_cols.push_back(c);
      continue;
    }
    if (sel != pr)
      for (size_t k = 0; k < a.cols(); ++k) std::swap(a.at(sel, k), a.at(pr, k));
    Scalar inv = a.at(pr, c).inverse();
    for (size_t k = c; k < a.cols(); ++k) a.at(pr, k) *= inv;
    for (size_t r = 0; r < a.rows(); ++r) {
      if (r == pr || a.at(r, c).is_zero()) continue;
      Scalar f = a.at(r, c);
      for (size_t k = c; k < a.cols(); ++k) a.at(r, k) -= f * a.at(pr, k);
    }
    out.pivot_cols.push_back(c);
    if (++pr == a.rows()) {
      for (size_t k = c + 1; k < a.cols(); ++k) out.free_cols.push_back(k);
      break;
    }
  }
  return out;
}

struct KernelResult {
  size_t rank = 0;
  std::vector<std::vector<Scalar>> kernel;  // one vector per free column
  std::vector<size_t> pivot_cols, free_cols;
};

namespace lindetail {

inline KernelResult kernel_from_rref(const Rref& r, size_t cols, const FieldSpec& fs) {
  KernelResult out;
  out.rank = r.rank();
  out.pivot_cols = r.pivot_cols;
  out.free_cols = r.free_cols;
  for (size_t f : r.free_cols) {
    std::vector<Scalar> v(cols, Scalar::zero(fs));
    v[f] = Scalar::one(fs);
    for (size_t i = 0; i < r.pivot_cols.size(); ++i) v[r.pivot_cols[i]] = -r.mat.at(i, f);
    out.kernel.push_back(std::move(v));
  }
  return out;
}

// Kernel of M + e M1 over K[e]: solve the value part, then lift each basis
// vector u by a particular solution of M w = -M1 u.  The result is a free
// basis {u + e w}; an unliftable u means the system is not flat over K[e].
inline KernelResult solve_kernel_dual(const ExactMatrix& m) {
  const FieldSpec dual_fs = m.spec();
  const FieldSpec fs = dual_fs.base();
  size_t rows = m.rows(), cols = m.cols();
  ExactMatrix value(fs, rows, cols), deriv(fs, rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) {
      value.set(r, c, m.at(r, c).value_part());
      deriv.set(r, c, m.at(r, c).deriv_part());
    }
  Rref rv = rref(value);
  KernelResult base = kernel_from_rref(rv, cols, fs);
  size_t k = base.kernel.size();

  // all right-hand sides at once: [M | -M1 u_1 | ... | -M1 u_k]
  ExactMatrix aug(fs, rows, cols + k);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) aug.set(r, c, value.at(r, c));
  for (size_t j = 0; j < k; ++j) {
    auto rhs = deriv.apply(base.kernel[j]);
    for (size_t r = 0; r < rows; ++r) aug.set(r, cols + j, -rhs[r]);
  }
  Rref ra = rref(aug);
  for (size_t p : ra.pivot_cols)
    require(p < cols, Errc::NonUnitPivot,
            "first-order deformation is obstructed; system not free over " + dual_fs.str());

  KernelResult out;
  out.rank = rv.rank();
  out.pivot_cols = rv.pivot_cols;
  out.free_cols = rv.free_cols;
  for (size_t j = 0; j < k; ++j) {
    std::vector<Scalar> v(cols, Scalar::zero(dual_fs));
    for (size_t c = 0; c < cols; ++c) v[c] = base.kernel[j][c].promoted();
    for (size_t i = 0; i < ra.pivot_cols.size(); ++i) {
      Scalar w = ra.mat.at(i, cols + j);
      if (!w.is_zero())
        v[ra.pivot_cols[i]] += Scalar::dual(dual_fs, 0, 1) * w.promoted();
    }
    out.kernel.push_back(std::move(v));
  }
  return out;
}

}  // namespace lindetail

// Exact nullspace.  rank + kernel.size() == cols; each vector satisfies
// M v = 0 exactly.  The basis is canonical: vector j has a 1 in the j-th
// free column and zeros in the others.  Over K[e] the kernel is computed
// as a free module by lifting the value-part kernel.
inline KernelResult solve_kernel(const ExactMatrix& m) {
  if (m.spec().dual) return lindetail::solve_kernel_dual(m);
  const FieldSpec fs = m.spec();
  Rref r = rref(m);
  return lindetail::kernel_from_rref(r, m.cols(), fs);
}

inline size_t matrix_rank(const ExactMatrix& m) { return rref(m).rank(); }

}  // namespace enriques
