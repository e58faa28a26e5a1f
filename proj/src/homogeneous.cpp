#include "spin7/homogeneous.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "spin7/error.hpp"

namespace spin7 {

namespace {

using IntVec = std::vector<long>;

GaussianRational I(const Rational& v) { return {Rational(0), v}; }

ComplexMatrix E(int n, int i, int j, GaussianRational v = {1}) { return ComplexMatrix::unit(n, i, j, v); }

ComplexMatrix zero(int n) { return ComplexMatrix(n); }

// 2x2 generators with [s1, s2] = -s3 cyclically.
ComplexMatrix sigma(int which) {
  const Rational h(1, 2);
  switch (which) {
    case 1: return E(2, 0, 1, I(h)) + E(2, 1, 0, I(h));
    case 2: return E(2, 0, 1, {h}) + E(2, 1, 0, {-h});
    default: return E(2, 0, 0, I(h)) + E(2, 1, 1, I(-h));
  }
}

MatrixTuple q_tuple(const ComplexMatrix& x, const ComplexMatrix& y, const ComplexMatrix& z) { return {x, y, z}; }

std::vector<MatrixTuple> q_basis(long k, long l, long m) {
  auto s1 = sigma(1), s2 = sigma(2), s3 = sigma(3), o = zero(2);
  auto sc = [&](long v) { return s3.scaled({Rational(v)}); };
  return {q_tuple(s1, o, o),
          q_tuple(s2, o, o),
          q_tuple(o, s1, o),
          q_tuple(o, s2, o),
          q_tuple(o, o, s1),
          q_tuple(o, o, s2),
          q_tuple(sc(k), sc(l), sc(m)),
          q_tuple(sc(l), sc(-k), o),
          q_tuple(sc(m * k), sc(m * l), sc(-(k * k + l * l)))};
}

std::vector<MatrixTuple> m_basis(long k, long l) {
  auto o3 = zero(3), o2 = zero(2);
  const GaussianRational one{1}, mone{-1}, i1 = I(1), mi1 = I(-1);
  ComplexMatrix x = E(3, 0, 0, i1) + E(3, 1, 1, i1) + E(3, 2, 2, I(-2));  // i diag(1,1,-2)
  ComplexMatrix y = E(2, 0, 0, i1) + E(2, 1, 1, mi1);                       // i diag(1,-1)
  return {
      {E(3, 0, 2) + E(3, 2, 0, mone), o2},
      {E(3, 0, 2, i1) + E(3, 2, 0, i1), o2},
      {E(3, 1, 2) + E(3, 2, 1, mone), o2},
      {E(3, 1, 2, i1) + E(3, 2, 1, i1), o2},
      {o3, E(2, 0, 1) + E(2, 1, 0, mone)},
      {o3, E(2, 0, 1, i1) + E(2, 1, 0, i1)},
      {x.scaled({Rational(k)}), y.scaled({Rational(-l)})},
      {E(3, 0, 1) + E(3, 1, 0, mone), o2},
      {E(3, 0, 1, i1) + E(3, 1, 0, i1), o2},
      {E(3, 0, 0, i1) + E(3, 1, 1, mi1), o2},
      {x.scaled({make_rational(l, 3)}), y.scaled({Rational(k)})},
  };
}

// Solves G c = b exactly (G invertible).
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> g, std::vector<Rational> b) {
  const std::size_t n = g.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && g[piv][col] == 0) ++piv;
    if (piv == n) throw internal_error("singular Gram matrix");
    std::swap(g[piv], g[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || g[r][col] == 0) continue;
      Rational f = g[r][col] / g[col][col];
      for (std::size_t c = col; c < n; ++c) g[r][c] -= f * g[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= g[i][i];
  return b;
}

std::vector<Rational> coordinates(const std::vector<MatrixTuple>& basis, const std::vector<std::vector<Rational>>& gram,
                                  const MatrixTuple& x) {
  std::vector<Rational> rhs;
  for (const auto& e : basis) rhs.push_back(trace_form(x, e));
  auto c = solve_linear(gram, rhs);
  MatrixTuple back = combine(basis, c);
  for (std::size_t b = 0; b < x.size(); ++b)
    if (!(back[b] == x[b])) throw internal_error("element outside the span of the basis");
  return c;
}

// Row-style Hermite normal form of the lattice spanned by the rows.
std::vector<IntVec> hermite_normal_form(std::vector<IntVec> rows) {
  if (rows.empty()) return rows;
  const std::size_t n = rows.front().size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
    // Euclid on column entries of rows r..end.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || std::labs(rows[i][col]) < std::labs(rows[best][col]))) best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        long q = rows[i][col] / rows[r][col];
        for (std::size_t c = 0; c < n; ++c) rows[i][c] -= q * rows[r][c];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][col] == 0) continue;
    if (rows[r][col] < 0)
      for (auto& x : rows[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      long q = rows[i][col] / rows[r][col];
      if (rows[i][col] - q * rows[r][col] < 0) --q;
      for (std::size_t c = 0; c < n; ++c) rows[i][c] -= q * rows[r][c];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

// Basis of the integer kernel {v in Z^n : A v = 0}, in Hermite normal form.
std::vector<IntVec> integer_kernel(const std::vector<IntVec>& a, std::size_t n) {
  // Column operations on A, mirrored on the identity.
  std::vector<IntVec> cols(n, IntVec(a.size())), u(n, IntVec(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    u[j][j] = 1;
    for (std::size_t i = 0; i < a.size(); ++i) cols[j][i] = a[i][j];
  }
  std::size_t piv_col = 0;
  for (std::size_t row = 0; row < a.size() && piv_col < n; ++row) {
    while (true) {
      std::size_t best = n;
      for (std::size_t j = piv_col; j < n; ++j)
        if (cols[j][row] != 0 && (best == n || std::labs(cols[j][row]) < std::labs(cols[best][row]))) best = j;
      if (best == n) break;
      std::swap(cols[piv_col], cols[best]);
      std::swap(u[piv_col], u[best]);
      bool done = true;
      for (std::size_t j = piv_col + 1; j < n; ++j) {
        if (cols[j][row] == 0) continue;
        long q = cols[j][row] / cols[piv_col][row];
        for (std::size_t i = 0; i < a.size(); ++i) cols[j][i] -= q * cols[piv_col][i];
        for (std::size_t i = 0; i < n; ++i) u[j][i] -= q * u[piv_col][i];
        if (cols[j][row] != 0) done = false;
      }
      if (done) break;
    }
    if (cols[piv_col][row] != 0) ++piv_col;
  }
  std::vector<IntVec> ker(u.begin() + static_cast<long>(piv_col), u.end());
  return hermite_normal_form(ker);
}

// Rational gcd of a vector: the largest g with v in g Z^n.
Rational rational_gcd(const std::vector<Rational>& v) {
  mpz_class den = 1;
  for (const auto& x : v) den = lcm(den, x.get_den());
  mpz_class g = 0;
  for (const auto& x : v) {
    mpz_class num = x.get_num() * (den / x.get_den());
    g = gcd(g, num);
  }
  Rational out(g, den);
  out.canonicalize();
  return out;
}

std::vector<IntVec> to_integer_rows(const std::vector<std::vector<Rational>>& rows) {
  std::vector<IntVec> out;
  for (const auto& r : rows) {
    mpz_class den = 1;
    for (const auto& x : r) den = lcm(den, x.get_den());
    IntVec iv;
    for (const auto& x : r) {
      mpz_class v = x.get_num() * (den / x.get_den());
      if (!v.fits_slong_p()) throw internal_error("integer overflow in lattice computation");
      iv.push_back(v.get_si());
    }
    out.push_back(iv);
  }
  return out;
}

std::vector<Rational> diagonal_phases(const MatrixTuple& x) {
  std::vector<Rational> out;
  for (const auto& mtx : x)
    for (int i = 0; i < mtx.dim(); ++i)
      for (int j = 0; j < mtx.dim(); ++j) {
        const auto& v = mtx.at(i, j);
        if (i == j) {
          if (v.re != 0) throw input_error("circle generator is not skew-hermitian diagonal");
          out.push_back(v.im);
        } else if (!v.is_zero()) {
          throw input_error("circle generator is not diagonal");
        }
      }
  return out;
}

}  // namespace

ComplexMatrix ComplexMatrix::unit(int n, int i, int j, GaussianRational v) {
  ComplexMatrix m(n);
  m.at(i, j) = std::move(v);
  return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
  ComplexMatrix r(n_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
  return r;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
  ComplexMatrix r(n_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
  return r;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
  ComplexMatrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      GaussianRational s;
      for (int k = 0; k < n_; ++k) s = s + at(i, k) * o.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

ComplexMatrix ComplexMatrix::scaled(const GaussianRational& c) const {
  ComplexMatrix r(n_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * c;
  return r;
}

GaussianRational ComplexMatrix::trace() const {
  GaussianRational s;
  for (int i = 0; i < n_; ++i) s = s + at(i, i);
  return s;
}

bool ComplexMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const auto& v) { return v.is_zero(); });
}

bool ComplexMatrix::is_skew_hermitian() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const auto& a = at(i, j);
      const auto& b = at(j, i);
      if (a.re != -b.re || a.im != b.im) return false;
    }
  return true;
}

MatrixTuple bracket(const MatrixTuple& x, const MatrixTuple& y) {
  if (x.size() != y.size()) throw input_error("tuples of different shape");
  MatrixTuple r;
  for (std::size_t b = 0; b < x.size(); ++b) r.push_back(x[b] * y[b] - y[b] * x[b]);
  return r;
}

MatrixTuple combine(const std::vector<MatrixTuple>& basis, const std::vector<Rational>& coeffs) {
  if (basis.size() != coeffs.size() || basis.empty()) throw input_error("coefficient count mismatch");
  MatrixTuple r;
  for (const auto& m : basis.front()) r.push_back(ComplexMatrix(m.dim()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (std::size_t b = 0; b < r.size(); ++b) r[b] = r[b] + basis[i][b].scaled({coeffs[i]});
  }
  return r;
}

Rational trace_form(const MatrixTuple& x, const MatrixTuple& y) {
  GaussianRational s;
  for (std::size_t b = 0; b < x.size(); ++b) s = s + (x[b] * y[b]).trace();
  if (s.im != 0) throw internal_error("trace form is not real");
  return -s.re;
}

bool StructureTensor::is_antisymmetric() const {
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if ((*this)(k, i, j) != -(*this)(k, j, i)) return false;
  return true;
}

bool StructureTensor::satisfies_jacobi() const {
  // sum over cyclic (i,j,k) of [[e_i,e_j],e_k]
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k)
        for (int out = 0; out < n_; ++out) {
          Rational s = 0;
          for (int m = 0; m < n_; ++m) {
            s += (*this)(m, i, j) * (*this)(out, m, k);
            s += (*this)(m, j, k) * (*this)(out, m, i);
            s += (*this)(m, k, i) * (*this)(out, m, j);
          }
          if (s != 0) return false;
        }
  return true;
}

std::vector<int> normalize_q_indices(int k, int l, int m) {
  std::vector<int> v = {std::abs(k), std::abs(l), std::abs(m)};
  int g = std::gcd(std::gcd(v[0], v[1]), v[2]);
  if (g == 0) throw input_error("indices (0,0,0) do not define a model");
  for (auto& x : v) x /= g;
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

std::vector<int> normalize_m_indices(int k, int l) {
  std::vector<int> v = {std::abs(k), std::abs(l)};
  int g = std::gcd(v[0], v[1]);
  if (g == 0) throw input_error("indices (0,0) do not define a model");
  for (auto& x : v) x /= g;
  return v;
}

CosetModel::CosetModel(ModelKind kind, std::vector<int> indices) : kind_(kind), indices_(std::move(indices)) { build(); }

CosetModel CosetModel::q(int k, int l, int m) { return CosetModel(ModelKind::Q, normalize_q_indices(k, l, m)); }

CosetModel CosetModel::m(int k, int l) { return CosetModel(ModelKind::M, normalize_m_indices(k, l)); }

CosetModel CosetModel::make(const std::string& kind, const std::vector<int>& idx) {
  std::string k = kind;
  for (auto& ch : k) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (k == "q") {
    if (idx.size() != 3) throw input_error("model q needs three indices k, l, m");
    return q(idx[0], idx[1], idx[2]);
  }
  if (k == "m") {
    if (idx.size() != 2) throw input_error("model m needs two indices k, l");
    return m(idx[0], idx[1]);
  }
  throw input_error("unknown model '" + kind + "' (expected q or m)");
}

std::string CosetModel::name() const {
  std::ostringstream os;
  os << (kind_ == ModelKind::Q ? "Q(" : "M(");
  for (std::size_t i = 0; i < indices_.size(); ++i) os << (i ? "," : "") << indices_[i];
  os << ')';
  return os.str();
}

std::vector<int> CosetModel::isotropy_indices() const {
  std::vector<int> v;
  for (int i = 7; i < dim(); ++i) v.push_back(i);
  return v;
}

bool CosetModel::is_distinguished() const {
  return std::all_of(indices_.begin(), indices_.end(), [](int x) { return x == 1; });
}

SymbolTable CosetModel::symbols() const {
  if (kind_ == ModelKind::Q) return SymbolTable::make({Symbol::A, Symbol::B, Symbol::C, Symbol::F});
  return SymbolTable::make({Symbol::A, Symbol::B, Symbol::C});
}

std::vector<std::vector<Rational>> CosetModel::gram() const {
  const auto& b = *basis_;
  std::vector<std::vector<Rational>> g(b.size(), std::vector<Rational>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) g[i][j] = trace_form(b[i], b[j]);
  return g;
}

void CosetModel::build() {
  auto basis = std::make_shared<std::vector<MatrixTuple>>(
      kind_ == ModelKind::Q ? q_basis(indices_[0], indices_[1], indices_[2]) : m_basis(indices_[0], indices_[1]));
  for (const auto& e : *basis)
    for (const auto& mtx : e)
      if (!mtx.is_skew_hermitian()) throw internal_error("basis element is not skew-hermitian");
  basis_ = basis;
  const int n = dim();
  auto g = gram();
  auto st = std::make_shared<StructureTensor>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto c = coordinates(*basis, g, bracket((*basis)[i], (*basis)[j]));
      for (int k = 0; k < n; ++k) (*st)(k, i, j) = c[k];
    }
  if (!st->is_antisymmetric() || !st->satisfies_jacobi()) throw internal_error("structure constants violate Lie axioms");
  structure_ = st;
  auto dg = std::make_shared<std::vector<Multivector<Rational>>>();
  for (int i = 0; i < n; ++i) {
    Multivector<Rational> d(n + 1, n);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if ((*st)(i, j, k) != 0) d.add(mask_of({j, k}), -(*st)(i, j, k));
    dg->push_back(d);
  }
  dg->push_back(Multivector<Rational>(n + 1, n));  // d(dt) = 0
  d_gen_ = dg;
}

StructureTensor structure_constants(const CosetModel& model) { return model.structure(); }

template <class Coeff>
Multivector<Coeff> invariant_d(const Multivector<Coeff>& form, const CosetModel& model) {
  const int n = model.coframe_size();
  if (form.size() != n || form.dt_index() != model.dt_generator())
    throw input_error("form is not over the coframe of " + model.name());
  Multivector<Coeff> out(n, form.dt_index());
  for (const auto& [mask, coeff] : form.terms()) {
    auto idx = mask_indices(mask);
    Multivector<Rational> d(n, form.dt_index());
    for (std::size_t p = 0; p < idx.size(); ++p) {
      Multivector<Rational> term = Multivector<Rational>::scalar(n, Rational(p % 2 ? -1 : 1), form.dt_index());
      for (std::size_t q = 0; q < idx.size(); ++q) {
        if (q == p)
          term = wedge(term, model.d_generator(idx[q]));
        else
          term = wedge(term, Multivector<Rational>::generator(n, idx[q], form.dt_index()));
      }
      d += term;
    }
    for (const auto& [m, c] : d.terms()) out.add(m, coeff * coeff_from_rational<Coeff>(c));
  }
  return out;
}

template Multivector<LaurentPoly> invariant_d(const Multivector<LaurentPoly>&, const CosetModel&);
template Multivector<double> invariant_d(const Multivector<double>&, const CosetModel&);
template Multivector<Rational> invariant_d(const Multivector<Rational>&, const CosetModel&);

namespace {
template <class Coeff>
bool is_basic_impl(const Multivector<Coeff>& form, const CosetModel& model) {
  for (const auto& [m, c] : form.terms())
    if (m & model.isotropy_mask()) return false;
  auto d = invariant_d(form, model);
  for (int x : model.isotropy_indices())
    if (!interior(d, x).is_zero()) return false;
  return true;
}
}  // namespace

bool is_basic(const Multivector<LaurentPoly>& form, const CosetModel& model) { return is_basic_impl(form, model); }
bool is_basic(const Multivector<Rational>& form, const CosetModel& model) { return is_basic_impl(form, model); }

std::optional<std::array<Rational, 3>> plane_speeds(const CosetModel& model, const std::vector<Rational>& x) {
  const auto& c = model.structure();
  const int n = model.dim();
  if (static_cast<int>(x.size()) != n) throw input_error("element has wrong number of coordinates");
  auto ad = [&](int j) {
    std::vector<Rational> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      if (x[i] != 0)
        for (int k = 0; k < n; ++k) out[k] += x[i] * c(k, i, j);
    return out;
  };
  std::array<Rational, 3> speeds;
  for (int p = 0; p < 3; ++p) {
    auto a = ad(2 * p), b = ad(2 * p + 1);
    for (int k = 0; k < n; ++k) {
      if (k != 2 * p + 1 && a[k] != 0) return std::nullopt;
      if (k != 2 * p && b[k] != 0) return std::nullopt;
    }
    if (a[2 * p + 1] != -b[2 * p]) return std::nullopt;
    speeds[p] = a[2 * p + 1];
  }
  auto e7 = ad(6);
  for (const auto& v : e7)
    if (v != 0) return std::nullopt;
  return speeds;
}

WeightMultiset isotropy_weights(const CosetModel& model) {
  WeightMultiset w;
  const int n = model.dim();
  if (model.kind() == ModelKind::Q) {
    const auto& idx = model.indices();
    auto ker = integer_kernel({{idx[0], idx[1], idx[2]}}, 3);
    auto g = model.gram();
    for (const auto& b : ker) {
      auto s3 = sigma(3);
      MatrixTuple h = {s3.scaled({Rational(b[0])}), s3.scaled({Rational(b[1])}), s3.scaled({Rational(b[2])})};
      auto coords = coordinates(model.basis(), g, h);
      for (int i = 0; i < 7; ++i)
        if (coords[i] != 0) throw internal_error("Cartan element leaves the isotropy algebra");
      w.cartan_basis.push_back(coords);
    }
  } else {
    for (int i : {9, 10}) {
      std::vector<Rational> v(static_cast<std::size_t>(n));
      v[i] = 1;
      w.cartan_basis.push_back(v);
    }
  }
  std::vector<std::array<Rational, 3>> speeds;
  for (const auto& h : w.cartan_basis) {
    auto s = plane_speeds(model, h);
    if (!s) throw internal_error("isotropy action is not a skew block rotation in the q-metric");
    speeds.push_back(*s);
  }
  w.trivial = 1;  // e7 is fixed by construction of plane_speeds
  for (int p = 0; p < 3; ++p) {
    IntVec v;
    for (const auto& s : speeds) {
      if (s[p].get_den() != 1) throw internal_error("non-integral isotropy weight");
      v.push_back(s[p].get_num().get_si());
    }
    if (std::all_of(v.begin(), v.end(), [](long x) { return x == 0; })) {
      w.trivial += 2;
      continue;
    }
    auto first = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
    if (*first < 0)
      for (auto& x : v) x = -x;
    w.weights.push_back(v);
  }
  return w;
}

WeightMultiset g2_reference_weights() {
  // Cartan of g2 acting on Im(O): weights x, y, z on three planes with x + y - z = 0,
  // written in the basis (x, y) of that plane.
  WeightMultiset w;
  w.weights = {{1, 0}, {0, 1}, {1, 1}};
  w.trivial = 1;
  return w;
}

bool weights_equivalent(const WeightMultiset& a, const WeightMultiset& b) {
  if (a.trivial != b.trivial || a.weights.size() != b.weights.size()) return false;
  const std::size_t k = a.weights.size();
  if (k == 0) return true;
  const std::size_t r = a.weights.front().size();
  if (r != 2 || b.weights.front().size() != 2) throw input_error("weight matcher supports rank two only");
  auto det = [](const IntVec& x, const IntVec& y) { return x[0] * y[1] - x[1] * y[0]; };
  // Pick two independent weights of a, map them to every signed ordered pair of b, test the rest.
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j || det(a.weights[i], a.weights[j]) == 0) continue;
      do {
        for (int s1 : {1, -1})
          for (int s2 : {1, -1}) {
            // L a_i = s1 b_perm[i], L a_j = s2 b_perm[j]; L = B A^{-1}
            const auto& ai = a.weights[i];
            const auto& aj = a.weights[j];
            IntVec bi = b.weights[perm[i]], bj = b.weights[perm[j]];
            for (auto& x : bi) x *= s1;
            for (auto& x : bj) x *= s2;
            Rational d(det(ai, aj));
            if (det(bi, bj) == 0) continue;
            // A = [ai aj] columns, A^{-1} = 1/d [[aj1, -aj0], [-ai1, ai0]]
            std::array<std::array<Rational, 2>, 2> inv = {{{Rational(aj[1]) / d, Rational(-aj[0]) / d},
                                                           {Rational(-ai[1]) / d, Rational(ai[0]) / d}}};
            std::array<std::array<Rational, 2>, 2> L;
            for (int row = 0; row < 2; ++row)
              for (int col = 0; col < 2; ++col)
                L[row][col] = Rational(bi[row]) * inv[0][col] + Rational(bj[row]) * inv[1][col];
            bool ok = true;
            for (std::size_t t = 0; t < k && ok; ++t) {
              std::array<Rational, 2> img = {L[0][0] * a.weights[t][0] + L[0][1] * a.weights[t][1],
                                             L[1][0] * a.weights[t][0] + L[1][1] * a.weights[t][1]};
              const auto& target = b.weights[perm[t]];
              bool plus = img[0] == target[0] && img[1] == target[1];
              bool minus = img[0] == -target[0] && img[1] == -target[1];
              ok = plus || minus;
            }
            if (ok) return true;
          }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  return false;
}

bool classify_invariant_g2(const CosetModel& model) {
  return weights_equivalent(isotropy_weights(model), g2_reference_weights());
}

bool classify_arithmetic(const CosetModel& model) {
  const auto& v = model.indices();
  return std::all_of(v.begin(), v.end(), [](int x) { return std::abs(x) == 1; });
}

std::vector<Mask> tangent_decomposition(const CosetModel& model) {
  if (model.kind() == ModelKind::Q)
    return {mask_of({0, 1}), mask_of({2, 3}), mask_of({4, 5}), mask_of({6})};
  return {mask_of({0, 1, 2, 3}), mask_of({4, 5}), mask_of({6})};
}

bool isotropy_preserves_decomposition(const CosetModel& model) {
  const auto& c = model.structure();
  auto parts = tangent_decomposition(model);
  for (int x : model.isotropy_indices())
    for (Mask part : parts)
      for (int j : mask_indices(part))
        for (int k = 0; k < model.dim(); ++k)
          if (c(k, x, j) != 0 && !(part & (Mask(1) << k))) return false;
  return true;
}

bool su2_irreducible_on_v1(const CosetModel& model) {
  if (model.kind() != ModelKind::M) throw input_error("only defined for the M model");
  const auto& c = model.structure();
  // trivial on V2 + V3
  for (int x : {7, 8, 9})
    for (int j : {4, 5, 6})
      for (int k = 0; k < model.dim(); ++k)
        if (c(k, x, j) != 0) return false;
  // V1 has no fixed vector: the stacked 12x4 matrix of ad(e8), ad(e9), ad(e10) has rank 4.
  std::vector<std::vector<Rational>> rows;
  for (int x : {7, 8, 9})
    for (int k = 0; k < 4; ++k) {
      std::vector<Rational> r;
      for (int j = 0; j < 4; ++j) r.push_back(c(k, x, j));
      rows.push_back(r);
    }
  int rank = 0;
  for (int col = 0; col < 4; ++col) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<std::size_t>(rank)]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][col] == 0) continue;
      Rational f = rows[r][col] / rows[rank][col];
      for (int cc = 0; cc < 4; ++cc) rows[r][cc] -= f * rows[rank][cc];
    }
    ++rank;
  }
  // The only real representations of su(2) of dimension 4 without trivial summands are irreducible.
  return rank == 4;
}

CircleData collapsing_circle(const CosetModel& model, const std::vector<Rational>& generator) {
  auto s = diagonal_phases(combine(model.basis(), generator));
  std::vector<std::vector<Rational>> cartan;
  for (int x : model.isotropy_indices()) {
    try {
      cartan.push_back(diagonal_phases(model.basis()[x]));
    } catch (const Error&) {
      // non-diagonal isotropy generators lie outside the maximal torus
    }
  }
  const std::size_t n = s.size();
  // exp(pi tau X) = 1 iff tau s in 2 Z^n.
  Rational gs = rational_gcd(s);
  if (gs == 0) throw input_error("zero circle generator");
  CircleData out;
  out.period_over_pi = Rational(2) / gs;
  // Quotient of the phase space by the isotropy torus: integer annihilator rows K.
  auto k = integer_kernel(to_integer_rows(cartan), n);
  // lattice L = K Z^n, basis from the HNF of the columns of K
  std::vector<IntVec> cols;
  for (std::size_t j = 0; j < n; ++j) {
    IntVec v;
    for (const auto& row : k) v.push_back(row[j]);
    cols.push_back(v);
  }
  auto lattice = hermite_normal_form(cols);
  std::vector<Rational> w;
  for (const auto& row : k) {
    Rational acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += Rational(row[j]) * s[j];
    w.push_back(acc);
  }
  if (std::all_of(w.begin(), w.end(), [](const Rational& x) { return x == 0; }))
    throw input_error("circle lies in the isotropy group");
  // w = sum c_i lattice_i; lattice rows are in echelon form.
  const std::size_t r = lattice.size();
  std::vector<Rational> coeff(r), rest = w;
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t piv = 0;
    while (lattice[i][piv] == 0) ++piv;
    coeff[i] = rest[piv] / Rational(lattice[i][piv]);
    for (std::size_t j = 0; j < rest.size(); ++j) rest[j] -= coeff[i] * Rational(lattice[i][j]);
  }
  for (const auto& x : rest)
    if (x != 0) throw internal_error("quotient vector outside the lattice span");
  // exp(pi tau X) in the isotropy torus iff tau * coeff in 2 Z^r.
  Rational order = rational_gcd(coeff) / gs;
  if (order.get_den() != 1) throw internal_error("non-integral intersection order");
  out.isotropy_intersection = order.get_num().get_si();
  out.required_derivative = Rational(2 * out.isotropy_intersection) / out.period_over_pi;
  return out;
}

}  // namespace spin7
