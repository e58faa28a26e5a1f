#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spin7/laurent.hpp"
#include "spin7/multivector.hpp"
#include "spin7/rational.hpp"

namespace spin7 {

struct GaussianRational {
  Rational re, im;
  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  bool is_zero() const { return re == 0 && im == 0; }
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n * n)) {}
  static ComplexMatrix unit(int n, int i, int j, GaussianRational v = {1});

  int dim() const { return n_; }
  GaussianRational& at(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  const GaussianRational& at(int i, int j) const { return data_[static_cast<std::size_t>(i * n_ + j)]; }

  ComplexMatrix operator+(const ComplexMatrix& o) const;
  ComplexMatrix operator-(const ComplexMatrix& o) const;
  ComplexMatrix operator*(const ComplexMatrix& o) const;
  ComplexMatrix scaled(const GaussianRational& c) const;
  GaussianRational trace() const;
  bool is_zero() const;
  bool is_skew_hermitian() const;
  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) { return a.n_ == b.n_ && a.data_ == b.data_; }

 private:
  int n_ = 0;
  std::vector<GaussianRational> data_;
};

// Element of a direct sum of matrix Lie algebras, one matrix per factor.
using MatrixTuple = std::vector<ComplexMatrix>;

MatrixTuple bracket(const MatrixTuple& x, const MatrixTuple& y);
MatrixTuple combine(const std::vector<MatrixTuple>& basis, const std::vector<Rational>& coeffs);
// q(X,Y) = -tr(XY) summed over factors; must be real.
Rational trace_form(const MatrixTuple& x, const MatrixTuple& y);

// c^k_ij with [e_i, e_j] = sum_k c^k_ij e_k.
class StructureTensor {
 public:
  StructureTensor() = default;
  explicit StructureTensor(int n) : n_(n), c_(static_cast<std::size_t>(n * n * n)) {}
  int dim() const { return n_; }
  const Rational& operator()(int k, int i, int j) const { return c_[idx(k, i, j)]; }
  Rational& operator()(int k, int i, int j) { return c_[idx(k, i, j)]; }
  bool is_antisymmetric() const;
  bool satisfies_jacobi() const;

 private:
  std::size_t idx(int k, int i, int j) const { return static_cast<std::size_t>((k * n_ + i) * n_ + j); }
  int n_ = 0;
  std::vector<Rational> c_;
};

enum class ModelKind { Q, M };

// Q(k,l,m): SU(2)^3 / U(1)^2;  M(k,l): (SU(3) x SU(2)) / (SU(2) x U(1)).
// Generators 0..6 span the tangent space, the rest the isotropy algebra;
// the coframe has one extra generator (index dim()) for dt.
class CosetModel {
 public:
  static CosetModel q(int k, int l, int m);
  static CosetModel m(int k, int l);
  // "q" or "m" with the index list.
  static CosetModel make(const std::string& kind, const std::vector<int>& indices);

  ModelKind kind() const { return kind_; }
  const std::vector<int>& indices() const { return indices_; }
  std::string name() const;

  int dim() const { return static_cast<int>(basis_->size()); }
  static constexpr int tangent_dim() { return 7; }
  int dt_generator() const { return dim(); }
  int coframe_size() const { return dim() + 1; }
  Mask tangent_mask() const { return (Mask(1) << 7) - 1; }
  Mask isotropy_mask() const { return ((Mask(1) << dim()) - 1) & ~tangent_mask(); }
  Mask dt_mask() const { return Mask(1) << dim(); }
  std::vector<int> isotropy_indices() const;

  const std::vector<MatrixTuple>& basis() const { return *basis_; }
  const StructureTensor& structure() const { return *structure_; }
  // d e^i over the coframe (constant coefficients).
  const Multivector<Rational>& d_generator(int i) const { return (*d_gen_)[static_cast<std::size_t>(i)]; }
  // Gram matrix of q on the basis.
  std::vector<std::vector<Rational>> gram() const;

  SymbolTable symbols() const;
  // The indices (1,1,1) / (1,1) for which an invariant structure exists.
  bool is_distinguished() const;

 private:
  CosetModel(ModelKind kind, std::vector<int> indices);
  void build();

  ModelKind kind_ = ModelKind::Q;
  std::vector<int> indices_;
  std::shared_ptr<const std::vector<MatrixTuple>> basis_;
  std::shared_ptr<const StructureTensor> structure_;
  std::shared_ptr<const std::vector<Multivector<Rational>>> d_gen_;
};

std::vector<int> normalize_q_indices(int k, int l, int m);
std::vector<int> normalize_m_indices(int k, int l);

StructureTensor structure_constants(const CosetModel& model);

template <class Coeff>
Multivector<Coeff> invariant_d(const Multivector<Coeff>& form, const CosetModel& model);

bool is_basic(const Multivector<LaurentPoly>& form, const CosetModel& model);
bool is_basic(const Multivector<Rational>& form, const CosetModel& model);

// Rotation speeds of ad_X on the planes (e1,e2), (e3,e4), (e5,e6):
// [X, e_{2p-1}] = s_p e_{2p}, [X, e_{2p}] = -s_p e_{2p-1}, and [X, e7] = 0.
// X is a rational combination of basis vectors; nullopt if ad_X is not of that form.
std::optional<std::array<Rational, 3>> plane_speeds(const CosetModel& model, const std::vector<Rational>& x);

struct WeightMultiset {
  std::vector<std::vector<long>> weights;  // one per invariant 2-plane, canonical sign
  int trivial = 0;                         // number of trivial 1-dimensional summands
  std::vector<std::vector<Rational>> cartan_basis;  // isotropy Cartan basis used
};

WeightMultiset isotropy_weights(const CosetModel& model);

// The u(1)^2 weights of the 7-dimensional G2 representation.
WeightMultiset g2_reference_weights();

// Brute force: is there a linear isomorphism of the weight lattices taking one multiset
// to the other up to individual signs, with matching trivial counts?
bool weights_equivalent(const WeightMultiset& a, const WeightMultiset& b);

bool classify_invariant_g2(const CosetModel& model);
// Closed-form criterion: |k| = |l| = |m| = 1, resp. |k| = |l| = 1.
bool classify_arithmetic(const CosetModel& model);

// Checks that ad of each isotropy generator preserves the summands V_i of the tangent space.
bool isotropy_preserves_decomposition(const CosetModel& model);
std::vector<Mask> tangent_decomposition(const CosetModel& model);
// M only: su(2) acts irreducibly on V1 = span(e1..e4) and trivially on V2 + V3.
bool su2_irreducible_on_v1(const CosetModel& model);

// Period of exp(theta * X) for a tuple of diagonal skew-hermitian matrices with rational
// imaginary parts (as a rational multiple of pi), and the order of its intersection with
// the isotropy subgroup.
struct CircleData {
  Rational period_over_pi;
  long isotropy_intersection = 0;
  // 2 pi |S cap H| / period: the limiting derivative magnitude a smooth collapse needs.
  Rational required_derivative;
};
CircleData collapsing_circle(const CosetModel& model, const std::vector<Rational>& generator);

}  // namespace spin7
