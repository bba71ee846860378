#include "superstar/supercstar.hpp"

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "superstar/error.hpp"

namespace superstar {

namespace {

Eigen::MatrixXcd grading_op(const std::vector<int>& g) {
  Eigen::VectorXcd d(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) d(i) = g[i] ? -1.0 : 1.0;
  return d.asDiagonal();
}

Eigen::MatrixXcd hodge_matrix(int n) {
  const Mask D = Mask{1} << n, full = D - 1;
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(D, D);
  for (Mask I = 0; I < D; ++I) J(full & ~I, I) = merge_sign(I, full & ~I);
  return J;
}

double op_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

Eigen::MatrixXcd adjoint_homogeneous(const HilbertSuper& H, const Eigen::MatrixXcd& T, int p) {
  // (T†)^H J^H = Γ^{p} J^H T in the (·,·) geometry with Gram matrix `gram`
  const Eigen::MatrixXcd Tstar = H.gram.inverse() * T.adjoint() * H.gram;
  Eigen::MatrixXcd r = H.J.inverse() * Tstar * H.J;
  if (p) r = r * grading_op(H.grading);
  return r;
}

}  // namespace

HilbertSuper make_hilbert_super(std::vector<int> grading, Eigen::MatrixXcd gram, Eigen::MatrixXcd J, int pJ) {
  HilbertSuper H{std::move(grading), std::move(gram), std::move(J), pJ, 0.0};
  const auto& g = H.grading;
  const Eigen::Index d = static_cast<Eigen::Index>(g.size());
  if (H.gram.rows() != d || H.J.rows() != d)
    throw Error(Error::Kind::Precondition, "Hilbert superspace data have inconsistent sizes");
  double defect = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      if (g[i] != g[j]) defect = std::max(defect, std::abs(H.gram(i, j)));
      if ((g[i] ^ g[j]) != pJ) defect = std::max(defect, std::abs(H.J(i, j)));
    }
  defect = std::max(defect, (H.J.adjoint() * H.gram * H.J - H.gram).cwiseAbs().maxCoeff());
  Eigen::MatrixXcd J2 = H.J * H.J;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double s = ((pJ + 1) * g[j]) % 2 ? -1.0 : 1.0;
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
    e(j) = s;
    defect = std::max(defect, (J2.col(j) - e).cwiseAbs().maxCoeff());
  }
  H.defect = defect;
  if (defect > 1e-10) throw Error(Error::Kind::InvariantViolation, "Hilbert superspace axioms fail");
  return H;
}

HilbertSuper hodge_hilbert(int n) {
  std::vector<int> g(std::size_t{1} << n);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = mask_parity(i);
  return make_hilbert_super(g, Eigen::MatrixXcd::Identity(g.size(), g.size()), hodge_matrix(n), n % 2);
}

HilbertSuper make_hilbert_super(const TruncatedBasis& b) {
  if (b.aux != 0) throw Error(Error::Kind::Unsupported, "Hilbert superspace over auxiliary generators");
  Eigen::MatrixXcd J = Eigen::kroneckerProduct(Eigen::MatrixXcd::Identity(b.even_size(), b.even_size()),
                                               hodge_matrix(b.n))
                           .eval();
  return make_hilbert_super(b.grading(), Eigen::MatrixXcd::Identity(b.dim(), b.dim()), std::move(J), b.n % 2);
}

Eigen::MatrixXcd superhermitian_gram(const HilbertSuper& H) { return H.J.adjoint() * H.gram; }

SuperOperator superadjoint(const HilbertSuper& H, const SuperOperator& T) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(T.mat.rows(), T.mat.cols());
  for (int p = 0; p < 2; ++p) {
    Eigen::MatrixXcd part = parity_block(T.mat, H.grading, p);
    if (part.cwiseAbs().maxCoeff() == 0.0) continue;
    r += adjoint_homogeneous(H, part, p);
  }
  return make_operator(std::move(r), H.grading);
}

SuperOperator superadjoint_closed_form(const HilbertSuper& H, const SuperOperator& T) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(T.mat.rows(), T.mat.cols());
  for (int p = 0; p < 2; ++p) {
    Eigen::MatrixXcd part = parity_block(T.mat, H.grading, p);
    Eigen::MatrixXcd core = H.J * (H.gram.inverse() * part.adjoint() * H.gram) * H.J;
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      const int x = H.grading[j];
      const int e = ((H.pJ + 1) * (p + x) + p * x) % 2;
      r.col(j) += (e ? -1.0 : 1.0) * core.col(j);
    }
  }
  return make_operator(std::move(r), H.grading);
}

CstarReport cstar_norm_check(const HilbertSuper& H, const std::vector<SuperOperator>& generators, int max_length) {
  CstarReport rep;
  std::vector<SuperOperator> letters;
  for (const auto& g : generators) {
    letters.push_back(g);
    letters.push_back(superadjoint(H, g));
  }
  const Eigen::Index d = static_cast<Eigen::Index>(H.grading.size());
  std::vector<SuperOperator> words{make_operator(Eigen::MatrixXcd::Identity(d, d), H.grading)};
  std::vector<SuperOperator> frontier = words;
  for (int len = 1; len <= max_length; ++len) {
    std::vector<SuperOperator> next;
    for (const auto& w : frontier)
      for (const auto& l : letters) {
        SuperOperator p = make_operator(w.mat * l.mat, H.grading);
        if (w.parity >= 0 && l.parity >= 0 && p.parity >= 0 && p.mat.cwiseAbs().maxCoeff() > 1e-12 &&
            p.parity != (w.parity + l.parity) % 2)
          rep.grading_consistent = false;
        next.push_back(std::move(p));
      }
    words.insert(words.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  // orthonormal basis of the span of all words (vectorized)
  Eigen::MatrixXcd A(d * d, static_cast<Eigen::Index>(words.size()));
  for (std::size_t k = 0; k < words.size(); ++k) A.col(k) = words[k].mat.reshaped();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU);
  const double smax = svd.singularValues()(0);
  Eigen::Index rank = 0;
  while (rank < svd.singularValues().size() && svd.singularValues()(rank) > 1e-10 * smax) ++rank;
  rep.span_dimension = static_cast<std::size_t>(rank);
  const Eigen::MatrixXcd Q = svd.matrixU().leftCols(rank);
  auto residual = [&](const Eigen::MatrixXcd& m) {
    Eigen::VectorXcd v = m.reshaped();
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    return (v - Q * (Q.adjoint() * v)).norm() / nv;
  };
  // the generated algebra is the span of all words; words of maximal length are only sampled
  const std::size_t shorter = words.size() - frontier.size();
  for (std::size_t k = 0; k < shorter; ++k) {
    const auto& w = words[k];
    rep.dagger_closure_residual = std::max(rep.dagger_closure_residual, residual(superadjoint(H, w).mat));
    Eigen::MatrixXcd star = H.gram.inverse() * w.mat.adjoint() * H.gram;
    rep.star_closure_residual = std::max(rep.star_closure_residual, residual(star));
    const double n = op_norm(w.mat);
    if (n > 0) {
      const double n2 = op_norm(superadjoint(H, w).mat * w.mat);
      rep.cstar_discrepancy = std::max(rep.cstar_discrepancy, std::abs(n2 - n * n) / (n * n));
    }
  }
  return rep;
}

}  // namespace superstar
