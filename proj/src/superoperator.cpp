#include "superstar/superoperator.hpp"

#include "superstar/error.hpp"

namespace superstar {

int operator_parity(const Eigen::MatrixXcd& m, const std::vector<int>& grading, double tol) {
  if (static_cast<std::size_t>(m.rows()) != grading.size() || m.rows() != m.cols())
    throw Error(Error::Kind::Precondition, "operator does not match its grading");
  bool even = false, odd = false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) <= tol) continue;
      (grading[i] == grading[j] ? even : odd) = true;
    }
  if (even && odd) return -1;
  return odd ? 1 : 0;
}

SuperOperator make_operator(Eigen::MatrixXcd m, std::vector<int> grading, double tol) {
  int p = operator_parity(m, grading, tol);
  return {std::move(m), std::move(grading), p};
}

Eigen::MatrixXcd parity_block(const Eigen::MatrixXcd& m, const std::vector<int>& grading, int p) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if ((grading[i] ^ grading[j]) == p) r(i, j) = m(i, j);
  return r;
}

}  // namespace superstar
