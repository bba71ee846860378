#pragma once

#include <Eigen/Dense>
#include <vector>

#include "superstar/grassmann.hpp"

namespace superstar {

/// Matrix on a graded basis; grading[i] ∈ {0,1} is the degree of basis vector i.
struct SuperOperator {
  Eigen::MatrixXcd mat;
  std::vector<int> grading;
  int parity = 0;  // 0, 1, or −1 for inhomogeneous
};

/// Degree of a matrix with respect to `grading` (entries below tol ignored); −1 if mixed, 0 for zero.
int operator_parity(const Eigen::MatrixXcd& m, const std::vector<int>& grading, double tol = 1e-12);
SuperOperator make_operator(Eigen::MatrixXcd m, std::vector<int> grading, double tol = 1e-12);
/// Part of degree p.
Eigen::MatrixXcd parity_block(const Eigen::MatrixXcd& m, const std::vector<int>& grading, int p);

}  // namespace superstar
