#include "wilsonline/lie_rep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wilsonline {

RepBasis su2_basis() {
  const Complex i{0.0, 1.0};
  const double s = 1.0 / std::sqrt(2.0);
  RepBasis b;
  b.name = "su2-fundamental";
  b.dim_rep = 2;
  Matrix e1(2, 2), e2(2, 2), e3(2, 2);
  e1 << s * i, 0.0, 0.0, -s * i;
  e2 << 0.0, -s, s, 0.0;
  e3 << 0.0, s * i, s * i, 0.0;
  b.generators = {e1, e2, e3};
  return b;
}

Eigen::MatrixXcd gram_matrix(const RepBasis& basis) {
  const int d = basis.dim_algebra();
  Eigen::MatrixXcd g(d, d);
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      g(a, c) = -(basis.generators[a] * basis.generators[c]).trace();
  return g;
}

void validate(const RepBasis& basis, double tol) {
  if (basis.dim_rep < 1 || basis.dim_rep > kMaxRepDim)
    throw ValidationError("representation dimension must be in [1, 8]");
  if (basis.generators.empty())
    throw ValidationError("basis has no generators");
  for (std::size_t a = 0; a < basis.generators.size(); ++a) {
    const Matrix& e = basis.generators[a];
    if (e.rows() != basis.dim_rep || e.cols() != basis.dim_rep)
      throw ValidationError("generator " + std::to_string(a) +
                            " has the wrong shape");
    if ((e + e.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw ValidationError("generator " + std::to_string(a) +
                            " is not anti-Hermitian");
  }
  const Eigen::MatrixXcd g = gram_matrix(basis);
  const auto id = Eigen::MatrixXcd::Identity(g.rows(), g.cols());
  if ((g - id).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("generators are not orthonormal under -Tr XY");
}

TensorMatrix kron(const Matrix& a, const Matrix& b) {
  TensorMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

TensorOperator casimir_tensor(const RepBasis& basis) {
  const int n = basis.dim_rep;
  TensorOperator op;
  op.order = 1;
  op.matrix = TensorMatrix::Zero(n * n, n * n);
  for (const Matrix& e : basis.generators) op.matrix += kron(e, e);
  return op;
}

Complex tensor_trace_power(const RepBasis& basis, int m) {
  if (m < 0) throw std::invalid_argument("tensor power must be nonnegative");
  const int n = basis.dim_rep;
  const TensorMatrix c = casimir_tensor(basis).matrix;
  TensorMatrix p = TensorMatrix::Identity(n * n, n * n);
  for (int i = 0; i < m; ++i) p = p * c;
  return p.trace();
}

TensorMatrix swap_operator(int n) {
  TensorMatrix s = TensorMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) s(k * n + i, i * n + k) = 1.0;
  return s;
}

std::vector<double> hermitian_eigenvalues(const TensorMatrix& h) {
  const Eigen::Index n = h.rows();
  if (h.cols() != n) throw std::invalid_argument("matrix must be square");
  Eigen::MatrixXd a(2 * n, 2 * n);
  a << h.real(), -h.imag(), h.imag(), h.real();
  a = 0.5 * (a + a.transpose());

  const Eigen::Index m = 2 * n;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = p + 1; q < m; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p + 1; q < m; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index r = 0; r < m; ++r) {
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (Eigen::Index r = 0; r < m; ++r) {
          const double apr = a(p, r), aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
      }
    }
  }
  std::vector<double> doubled(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) doubled[i] = a(i, i);
  std::sort(doubled.begin(), doubled.end());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    out.push_back(0.5 * (doubled[2 * i] + doubled[2 * i + 1]));
  return out;
}

namespace {

Complex parse_entry(const nlohmann::json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw ValidationError("matrix entry must be a number or [re, im]");
}

}  // namespace

RepBasis basis_from_json(const nlohmann::json& doc, double tol) {
  if (!doc.is_object() || !doc.contains("dim_rep") ||
      !doc.contains("generators"))
    throw ValidationError("basis document needs dim_rep and generators");
  RepBasis b;
  b.name = doc.value("name", std::string("custom"));
  b.dim_rep = doc.at("dim_rep").get<int>();
  if (b.dim_rep < 1 || b.dim_rep > kMaxRepDim)
    throw ValidationError("dim_rep must be in [1, 8]");
  const int n = b.dim_rep;
  for (const auto& g : doc.at("generators")) {
    if (!g.is_array() || g.size() != static_cast<std::size_t>(n * n))
      throw ValidationError("generator must list n*n entries row-major");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = parse_entry(g[r * n + c]);
    b.generators.push_back(m);
  }
  validate(b, tol);
  return b;
}

nlohmann::json basis_to_json(const RepBasis& basis) {
  nlohmann::json gens = nlohmann::json::array();
  for (const Matrix& e : basis.generators) {
    nlohmann::json flat = nlohmann::json::array();
    for (int r = 0; r < basis.dim_rep; ++r)
      for (int c = 0; c < basis.dim_rep; ++c)
        flat.push_back({e(r, c).real(), e(r, c).imag()});
    gens.push_back(flat);
  }
  return {{"name", basis.name}, {"dim_rep", basis.dim_rep},
          {"generators", gens}};
}

}  // namespace wilsonline
