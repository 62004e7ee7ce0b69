// Dense-matrix reference for fermion mode algebra, built directly from
// Pauli-string Kronecker products.  It performs no symbolic rewriting at
// all, so checks against it exercise a fully independent code path.
//
// Convention (shared contract with the library, code paths independent):
// sites are listed in ascending lexicographic order; site k of n occupies
// tensor slot k counted from the most significant qubit, and
//   a_k = Z ⊗ ... ⊗ Z ⊗ s ⊗ I ⊗ ... ⊗ I,   s = [[0,1],[0,0]],
// with k leading Z factors.  Basis index of |b_0 ... b_{n-1}> is
// sum_k b_k 2^(n-1-k); the vacuum is index 0.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace jw_oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct RawFactor {
  std::vector<int> site;
  bool dagger = false;
};

// one product of modes with a scalar in front; no ordering assumed
struct RawTerm {
  cplx coeff{1.0, 0.0};
  std::vector<RawFactor> factors;
};

using RawPoly = std::vector<RawTerm>;

struct Space {
  std::vector<std::vector<int>> sites;  // ascending, duplicate-free

  explicit Space(std::vector<std::vector<int>> s) : sites(std::move(s)) {
    for (std::size_t i = 1; i < sites.size(); ++i)
      if (!(sites[i - 1] < sites[i]))
        throw std::invalid_argument("oracle space sites must be ascending");
    if (sites.size() > 22)
      throw std::invalid_argument("oracle space too large");
  }

  static Space interval(int lo, int hi) {
    std::vector<std::vector<int>> s;
    for (int x = lo; x <= hi; ++x) s.push_back({x});
    return Space(std::move(s));
  }

  int index_of(const std::vector<int>& s) const {
    for (std::size_t k = 0; k < sites.size(); ++k)
      if (sites[k] == s) return static_cast<int>(k);
    return -1;
  }

  long dim() const { return 1L << sites.size(); }
};

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat annihilator(const Space& sp, const std::vector<int>& site) {
  int k = sp.index_of(site);
  if (k < 0) throw std::invalid_argument("site outside oracle space");
  Mat z = Mat::Zero(2, 2), s = Mat::Zero(2, 2), id = Mat::Identity(2, 2);
  z(0, 0) = 1.0, z(1, 1) = -1.0;
  s(0, 1) = 1.0;
  Mat out = Mat::Identity(1, 1);
  int n = static_cast<int>(sp.sites.size());
  for (int j = 0; j < n; ++j)
    out = kron(out, j < k ? z : (j == k ? s : id));
  return out;
}

inline Mat represent(const Space& sp, const RawPoly& p) {
  Mat out = Mat::Zero(sp.dim(), sp.dim());
  for (const RawTerm& t : p) {
    Mat m = Mat::Identity(sp.dim(), sp.dim());
    for (const RawFactor& f : t.factors) {
      Mat a = annihilator(sp, f.site);
      m *= f.dagger ? Mat(a.adjoint()) : a;
    }
    out += t.coeff * m;
  }
  return out;
}

// grand total of Z factors: parity operator prod_k (1 - 2 n_k)
inline Mat parity_operator(const Space& sp) {
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1.0, z(1, 1) = -1.0;
  Mat out = Mat::Identity(1, 1);
  for (std::size_t j = 0; j < sp.sites.size(); ++j) out = kron(out, z);
  return out;
}

inline Vec vacuum(const Space& sp) {
  Vec v = Vec::Zero(sp.dim());
  v(0) = 1.0;
  return v;
}

inline Vec filled(const Space& sp) {
  Vec v = Vec::Zero(sp.dim());
  v(sp.dim() - 1) = 1.0;
  return v;
}

inline double op_norm(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(m.adjoint() * m),
                                        Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return top > 0 ? std::sqrt(top) : 0.0;
}

// convenience builders for raw polys
inline RawFactor an(std::vector<int> s) { return RawFactor{std::move(s), false}; }
inline RawFactor cr(std::vector<int> s) { return RawFactor{std::move(s), true}; }
inline RawFactor an(int x) { return an(std::vector<int>{x}); }
inline RawFactor cr(int x) { return cr(std::vector<int>{x}); }

inline RawTerm term(cplx c, std::vector<RawFactor> fs) {
  return RawTerm{c, std::move(fs)};
}

}  // namespace jw_oracle
