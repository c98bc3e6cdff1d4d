#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wilsonline/types.hpp"

namespace wilsonline {

// Matrix representation of an orthonormal basis {E_a} of a compact Lie
// algebra, orthonormal for (X, Y) = -Tr XY.
struct RepBasis {
  std::string name;
  int dim_rep = 0;
  std::vector<Matrix> generators;

  int dim_algebra() const { return static_cast<int>(generators.size()); }
};

// (sum_a E_a (x) E_a)^order on C^n (x) C^n.
struct TensorOperator {
  int order = 1;
  TensorMatrix matrix;
};

// The fundamental representation of su(2):
//   E1 = diag(i, -i)/sqrt2, E2 = [[0,-1],[1,0]]/sqrt2, E3 = [[0,i],[i,0]]/sqrt2.
RepBasis su2_basis();

// Throws ValidationError unless every generator is anti-Hermitian and the
// Gram matrix under -Tr XY is the identity, both to `tol`.
void validate(const RepBasis& basis, double tol = 1e-12);

// G_ab = -Tr(E_a E_b).
Eigen::MatrixXcd gram_matrix(const RepBasis& basis);

// Kronecker product, index (i*n + k, j*n + l) -> a(i,j) b(k,l).
TensorMatrix kron(const Matrix& a, const Matrix& b);

// sum_a E_a (x) E_a.
TensorOperator casimir_tensor(const RepBasis& basis);

// Tr (sum_a E_a (x) E_a)^m by repeated multiplication. m = 0 gives n^2.
Complex tensor_trace_power(const RepBasis& basis, int m);

// Swap operator S(u (x) v) = v (x) u on C^n (x) C^n.
TensorMatrix swap_operator(int n);

// Eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi on the real
// symmetric embedding [[Re, -Im], [Im, Re]], whose spectrum is the
// Hermitian spectrum with every eigenvalue doubled.
std::vector<double> hermitian_eigenvalues(const TensorMatrix& h);

// {"dim_rep": n, "generators": [[[re,im],...],...]}; each generator is a
// row-major list of n*n entries. Rejects bases that fail validate().
RepBasis basis_from_json(const nlohmann::json& doc, double tol = 1e-12);
nlohmann::json basis_to_json(const RepBasis& basis);

}  // namespace wilsonline
