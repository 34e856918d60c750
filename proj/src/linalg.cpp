#include "peq/linalg.hpp"

#include <algorithm>
#include <functional>

namespace peq {
namespace cstar {

std::string Scalar::str() const {
  std::string s = re.get_str();
  if (im != 0) {
    s += (im >= 0 ? "+" : "");
    s += im.get_str() + "i";
  }
  return s;
}

Scalar Scalar::parse(const std::string& text) {
  // forms: "a/b", "a/b+c/di", "ci" with optional signs
  std::string t;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw AxiomError("ParseError", "empty scalar");
  Scalar out;
  std::size_t pos = 0;
  auto read_term = [&]() {
    std::size_t start = pos;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) ++pos;
    while (pos < t.size() && (isdigit(static_cast<unsigned char>(t[pos])) || t[pos] == '/'))
      ++pos;
    bool imag = pos < t.size() && t[pos] == 'i';
    std::string num = t.substr(start, pos - start);
    if (imag) ++pos;
    if (num.empty() || num == "+" || num == "-") num += "1";
    if (num[0] == '+') num.erase(num.begin());
    mpq_class q(num);
    q.canonicalize();
    if (imag)
      out.im += q;
    else
      out.re += q;
  };
  while (pos < t.size()) read_term();
  return out;
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
  return m;
}

Mat Mat::unit(int n, int i, int j) {
  Mat m(n, n);
  m.at(i, j) = Scalar(1);
  return m;
}

Mat Mat::operator+(const Mat& o) const {
  Mat m(rows, cols);
  for (std::size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] + o.a[k];
  return m;
}

Mat Mat::operator-(const Mat& o) const {
  Mat m(rows, cols);
  for (std::size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] - o.a[k];
  return m;
}

Mat Mat::operator*(const Mat& o) const {
  Mat m(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      if (at(i, k).is_zero()) continue;
      for (int j = 0; j < o.cols; ++j)
        m.at(i, j) = m.at(i, j) + at(i, k) * o.at(k, j);
    }
  return m;
}

Mat Mat::scaled(const Scalar& c) const {
  Mat m(rows, cols);
  for (std::size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] * c;
  return m;
}

Mat Mat::adjoint() const {
  Mat m(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j).conj();
  return m;
}

Scalar Mat::trace() const {
  Scalar t;
  for (int i = 0; i < std::min(rows, cols); ++i) t = t + at(i, i);
  return t;
}

bool Mat::is_zero() const {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

Mat Mat::unflatten(int r, int c, const Vec& v) {
  Mat m(r, c);
  m.a = v;
  return m;
}

Mat Mat::left_mult_operator(int n) const {
  // row-major flattening: (B X)_{ij} = sum_k B_{ik} X_{kj}
  Mat op(n * n, n * n);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k)
      if (!at(i, k).is_zero())
        for (int j = 0; j < n; ++j) op.at(i * n + j, k * n + j) = at(i, k);
  return op;
}

bool RowSpace::add(Vec v) {
  v = reduce(std::move(v));
  int pivot = -1;
  for (int k = 0; k < width_; ++k)
    if (!v[k].is_zero()) {
      pivot = k;
      break;
    }
  if (pivot < 0) return false;
  Scalar inv = v[pivot].inverse();
  for (auto& x : v) x = x * inv;
  // back-substitute into existing rows
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Scalar c = rows_[r][pivot];
    if (c.is_zero()) continue;
    for (int k = 0; k < width_; ++k) rows_[r][k] = rows_[r][k] - c * v[k];
  }
  // keep rows sorted by pivot
  std::size_t at = 0;
  while (at < pivots_.size() && pivots_[at] < pivot) ++at;
  rows_.insert(rows_.begin() + at, std::move(v));
  pivots_.insert(pivots_.begin() + at, pivot);
  return true;
}

Vec RowSpace::reduce(Vec v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Scalar c = v[pivots_[r]];
    if (c.is_zero()) continue;
    for (int k = 0; k < width_; ++k) v[k] = v[k] - c * rows_[r][k];
  }
  return v;
}

bool RowSpace::contains(Vec v) const {
  v = reduce(std::move(v));
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

bool RowSpace::contains_space(const RowSpace& o) const {
  for (const auto& r : o.rows_)
    if (!contains(r)) return false;
  return true;
}

bool RowSpace::same_space(const RowSpace& o) const {
  return rank() == o.rank() && contains_space(o);
}

std::optional<Vec> solve_coordinates(const std::vector<Vec>& basis, const Vec& v) {
  if (basis.empty()) {
    for (const auto& x : v)
      if (!x.is_zero()) return std::nullopt;
    return Vec{};
  }
  const int width = static_cast<int>(basis[0].size());
  const int n = static_cast<int>(basis.size());
  // augmented rows: basis vector | unit coordinate vector
  std::vector<Vec> rows(n, Vec(width + n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < width; ++k) rows[i][k] = basis[i][k];
    rows[i][width + i] = Scalar(1);
  }
  // eliminate
  std::vector<int> pivots;
  int rank = 0;
  for (int col = 0; col < width && rank < n; ++col) {
    int sel = -1;
    for (int r = rank; r < n; ++r)
      if (!rows[r][col].is_zero()) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[rank], rows[sel]);
    Scalar inv = rows[rank][col].inverse();
    for (auto& x : rows[rank]) x = x * inv;
    for (int r = 0; r < n; ++r) {
      if (r == rank) continue;
      Scalar c = rows[r][col];
      if (c.is_zero()) continue;
      for (int k = 0; k < width + n; ++k)
        rows[r][k] = rows[r][k] - c * rows[rank][k];
    }
    pivots.push_back(col);
    ++rank;
  }
  Vec residual = v, coords(n);
  for (int r = 0; r < rank; ++r) {
    Scalar c = residual[pivots[r]];
    if (c.is_zero()) continue;
    for (int k = 0; k < width; ++k) residual[k] = residual[k] - c * rows[r][k];
    for (int i = 0; i < n; ++i) coords[i] = coords[i] + c * rows[r][width + i];
  }
  for (const auto& x : residual)
    if (!x.is_zero()) return std::nullopt;
  return coords;
}

std::vector<Vec> kernel_basis(const std::vector<Vec>& image, int width) {
  const int n = static_cast<int>(image.size());
  // rows: image vector | unit vector ; echelonize by the image part, kernel
  // vectors appear as rows with zero image part.
  std::vector<Vec> rows(n, Vec(width + n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < width; ++k) rows[i][k] = image[i][k];
    rows[i][width + i] = Scalar(1);
  }
  int rank = 0;
  for (int col = 0; col < width && rank < n; ++col) {
    int sel = -1;
    for (int r = rank; r < n; ++r)
      if (!rows[r][col].is_zero()) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[rank], rows[sel]);
    Scalar inv = rows[rank][col].inverse();
    for (auto& x : rows[rank]) x = x * inv;
    for (int r = 0; r < n; ++r) {
      if (r == rank) continue;
      Scalar c = rows[r][col];
      if (c.is_zero()) continue;
      for (int k = 0; k < width + n; ++k)
        rows[r][k] = rows[r][k] - c * rows[rank][k];
    }
    ++rank;
  }
  std::vector<Vec> out;
  for (int r = rank; r < n; ++r)
    out.emplace_back(rows[r].begin() + width, rows[r].end());
  return out;
}

bool is_positive_semidefinite(const Mat& m0) {
  if (m0.rows != m0.cols) return false;
  Mat m = m0;
  const int n = m.rows;
  // Hermitian check
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m.at(i, j) != m.at(j, i).conj()) return false;
  std::vector<char> done(n, 0);
  while (true) {
    int p = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && !m.at(i, i).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) {
      // zero diagonal: matrix must vanish on the remaining block
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!done[i] && !done[j] && !m.at(i, j).is_zero()) return false;
      return true;
    }
    if (m.at(p, p).im != 0 || m.at(p, p).re < 0) return false;
    Scalar d = m.at(p, p).inverse();
    for (int i = 0; i < n; ++i) {
      if (done[i] || i == p) continue;
      for (int j = 0; j < n; ++j) {
        if (done[j] || j == p) continue;
        m.at(i, j) = m.at(i, j) - m.at(i, p) * d * m.at(p, j);
      }
    }
    done[p] = 1;
  }
}

std::vector<Scalar> minimal_polynomial(const std::function<Vec(int)>& power,
                                       int max_degree) {
  std::vector<Vec> powers;
  RowSpace space(static_cast<int>(power(0).size()));
  for (int d = 0; d <= max_degree; ++d) {
    Vec p = power(d);
    powers.push_back(p);
    if (!space.add(p)) {
      // dependence: express powers[d] in the previous ones
      std::vector<Vec> prev(powers.begin(), powers.end() - 1);
      auto coords = solve_coordinates(prev, powers.back());
      if (!coords) throw AxiomError("LinearAlgebraDefect", "minimal polynomial");
      std::vector<Scalar> poly(d + 1);
      for (int k = 0; k < d; ++k) poly[k] = -(*coords)[k];
      poly[d] = Scalar(1);
      return poly;
    }
  }
  throw AxiomError("LinearAlgebraDefect", "minimal polynomial did not terminate");
}

namespace {

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> out;
  for (mpz_class d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      out.push_back(n / d);
    }
  return out;
}

}  // namespace

RationalRoots rational_roots(std::vector<mpq_class> coeffs) {
  RationalRoots res;
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.size() <= 1) {
    res.complete = true;
    return res;
  }
  // strip roots at zero
  while (coeffs.size() > 1 && coeffs.front() == 0) {
    res.roots.emplace_back(0);
    coeffs.erase(coeffs.begin());
  }
  while (coeffs.size() > 1) {
    // clear denominators
    mpz_class lcm = 1;
    for (const auto& c : coeffs) {
      mpz_class den = c.get_den();
      lcm = lcm / gcd(lcm, den) * den;
    }
    std::vector<mpz_class> ic;
    for (const auto& c : coeffs) {
      mpq_class v = c * mpq_class(lcm);
      v.canonicalize();
      ic.push_back(v.get_num());
    }
    if (ic.front() == 0) {
      res.roots.emplace_back(0);
      coeffs.erase(coeffs.begin());
      continue;
    }
    bool found = false;
    mpq_class root;
    for (const auto& p : divisors(ic.front())) {
      for (const auto& q : divisors(ic.back())) {
        for (int sign = 0; sign < 2 && !found; ++sign) {
          mpq_class cand(sign ? -p : p, q);
          cand.canonicalize();
          mpq_class val = 0;
          for (std::size_t k = coeffs.size(); k-- > 0;) val = val * cand + coeffs[k];
          if (val == 0) {
            found = true;
            root = cand;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) {
      res.complete = false;
      return res;
    }
    res.roots.push_back(root);
    // deflate: divide by (x - root)
    std::vector<mpq_class> q(coeffs.size() - 1);
    mpq_class carry = 0;
    for (std::size_t k = coeffs.size(); k-- > 1;) {
      q[k - 1] = coeffs[k] + carry;
      carry = q[k - 1] * root;
    }
    coeffs = q;
  }
  res.complete = true;
  return res;
}

}  // namespace cstar
}  // namespace peq
