#include "wrlat/integer.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace wrlat {

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void subtract_row_multiple(IntMatrix& m, std::size_t target, std::size_t source, const Integer& q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(target, j) -= q * m(source, j);
}

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

}  // namespace

std::string to_decimal(const Integer& value) { return value.str(); }

Integer integer_power(const Integer& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool IntMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

Integer determinant(const IntMatrix& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = input.rows();
  if (n == 0) return 1;
  IntMatrix m = input;
  Integer previous = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && m(pivot, k) == 0) ++pivot;
      if (pivot == n) return 0;
      swap_rows(m, k, pivot);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / previous;
      }
      m(i, k) = 0;
    }
    previous = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t rank(const IntMatrix& input) {
  IntMatrix m = input;
  std::size_t r = 0;
  Integer previous = 1;
  for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
    std::size_t pivot = r;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    swap_rows(m, r, pivot);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      for (std::size_t j = col + 1; j < m.cols(); ++j) {
        m(i, j) = (m(i, j) * m(r, col) - m(i, col) * m(r, j)) / previous;
      }
      m(i, col) = 0;
    }
    previous = m(r, col);
    ++r;
  }
  return r;
}

IntMatrix hermite_normal_form(const IntMatrix& input) {
  IntMatrix h = input;
  std::size_t r = 0;
  for (std::size_t col = 0; col < h.cols() && r < h.rows(); ++col) {
    while (true) {
      std::size_t best = h.rows();
      for (std::size_t k = r; k < h.rows(); ++k) {
        if (h(k, col) == 0) continue;
        if (best == h.rows() || abs(h(k, col)) < abs(h(best, col))) best = k;
      }
      if (best == h.rows()) break;
      swap_rows(h, r, best);
      bool cleared = true;
      for (std::size_t k = r + 1; k < h.rows(); ++k) {
        if (h(k, col) == 0) continue;
        subtract_row_multiple(h, k, r, floor_div(h(k, col), h(r, col)));
        if (h(k, col) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (h(r, col) == 0) continue;
    if (h(r, col) < 0)
      for (std::size_t j = 0; j < h.cols(); ++j) h(r, j) = -h(r, j);
    for (std::size_t k = 0; k < r; ++k) subtract_row_multiple(h, k, r, floor_div(h(k, col), h(r, col)));
    ++r;
  }
  IntMatrix out(r, h.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = h(i, j);
  return out;
}

std::vector<Integer> smith_invariants(const IntMatrix& input) {
  IntMatrix a = input;
  const std::size_t limit = std::min(a.rows(), a.cols());
  std::vector<Integer> diagonal;
  for (std::size_t t = 0; t < limit; ++t) {
    auto move_min_to_pivot = [&](bool whole_block) {
      std::size_t bi = a.rows(), bj = a.cols();
      for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j) {
          if (!whole_block && i != t && j != t) continue;
          if (a(i, j) == 0) continue;
          if (bi == a.rows() || abs(a(i, j)) < abs(a(bi, bj))) {
            bi = i;
            bj = j;
          }
        }
      if (bi == a.rows()) return false;
      swap_rows(a, t, bi);
      swap_cols(a, t, bj);
      return true;
    };
    if (!move_min_to_pivot(true)) break;
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < a.rows(); ++i) {
        subtract_row_multiple(a, i, t, a(i, t) / a(t, t));
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a.cols(); ++j) {
        const Integer q = a(t, j) / a(t, t);
        if (q != 0)
          for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) -= q * a(i, t);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) {
        move_min_to_pivot(false);
        continue;
      }
      bool divides = true;
      for (std::size_t i = t + 1; i < a.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < a.cols(); ++j)
          if (a(i, j) % a(t, t) != 0) {
            for (std::size_t k = 0; k < a.cols(); ++k) a(t, k) += a(i, k);
            divides = false;
            break;
          }
      if (divides) break;
    }
    diagonal.push_back(abs(a(t, t)));
  }
  return diagonal;
}

bool in_row_span(const IntMatrix& basis, std::span<const Integer> x) {
  if (x.size() != basis.cols()) throw std::invalid_argument("vector length mismatch");
  const IntMatrix h = hermite_normal_form(basis);
  std::vector<Integer> rest(x.begin(), x.end());
  std::size_t col = 0;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    std::size_t pivot = col;
    while (h(r, pivot) == 0) ++pivot;
    for (; col < pivot; ++col)
      if (rest[col] != 0) return false;
    if (rest[pivot] % h(r, pivot) != 0) return false;
    const Integer q = rest[pivot] / h(r, pivot);
    for (std::size_t j = pivot; j < h.cols(); ++j) rest[j] -= q * h(r, j);
    col = pivot + 1;
  }
  return std::all_of(rest.begin(), rest.end(), [](const Integer& v) { return v == 0; });
}

std::optional<std::vector<Integer>> integer_coefficients(const IntMatrix& basis,
                                                         std::span<const Integer> x) {
  const std::size_t n = basis.rows();
  if (basis.cols() != n || x.size() != n) throw std::invalid_argument("square system expected");
  // Solve basis^T y = x by Gauss-Jordan over Q.
  std::vector<std::vector<Rational>> aug(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = Rational(basis(j, i));
    aug[i][n] = Rational(x[i]);
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && aug[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::invalid_argument("singular basis");
    std::swap(aug[col], aug[pivot]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || aug[i][col] == 0) continue;
      const Rational f = aug[i][col] / aug[col][col];
      for (std::size_t j = col; j <= n; ++j) aug[i][j] -= f * aug[col][j];
    }
  }
  std::vector<Integer> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational v = aug[i][n] / aug[i][i];
    if (denominator(v) != 1) return std::nullopt;
    y[i] = numerator(v);
  }
  return y;
}

bool is_positive_definite(const IntMatrix& input) {
  if (!input.is_symmetric()) return false;
  const std::size_t n = input.rows();
  IntMatrix m = input;
  Integer previous = 1;
  // Without pivoting, the Bareiss pivots are the leading principal minors.
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / previous;
      m(i, k) = 0;
    }
    previous = m(k, k);
  }
  return true;
}

}  // namespace wrlat
