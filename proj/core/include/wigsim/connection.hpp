#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wigsim/wavelets.hpp"

namespace wigsim {

// Galerkin integrals of scaling-function derivative products,
// values[k + max_shift] = integral of phi^(a)(x) phi^(b)(x - k) dx for
// |k| <= 2K-2. Normalized by the polynomial-reproduction moment rule.
struct ConnectionTable {
  WaveletFamily family;
  int left_order = 0;   // a
  int right_order = 0;  // b
  std::vector<double> values;

  int max_shift() const { return (static_cast<int>(values.size()) - 1) / 2; }
  double at(int shift) const;
  int total_order() const { return left_order + right_order; }
};

// Eigenvector method on the refinement-induced linear system, restricted to
// the parity subspace of the total order. Gated by the family smoothness:
// max(a, b) < sobolev_estimate.
ConnectionTable connection_coefficients(const WaveletFamily& family, int a, int b);

// Effective one-sided table for the order-d derivative: the symmetric split
// a = floor(d/2), b = ceil(d/2) with the integration-by-parts sign (-1)^a.
// Satisfies sum_k k^d gamma_k = (-1)^d d!.
std::vector<double> derivative_stencil(const WaveletFamily& family, int d);

// Periodic circulant Galerkin derivative of order d on 2^level points over a
// domain of physical length L. Antisymmetric for odd d, symmetric for even d.
struct DerivativeMatrix {
  int order = 0;
  int level = 0;
  int size = 0;
  double domain_length = 0.0;
  int halfwidth = 0;
  std::vector<double> stencil;  // offsets -halfwidth..halfwidth, physical scaling applied

  double stencil_at(int offset) const { return stencil[offset + halfwidth]; }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  // along the row index (q axis) of a field
  void apply_columns(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const;
  // along the column index (p axis) of a field
  void apply_rows(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const;
  Eigen::MatrixXd dense() const;
};

DerivativeMatrix derivative_matrix(const WaveletFamily& family, int d, int level,
                                   double domain_length);

}  // namespace wigsim
