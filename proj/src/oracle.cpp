#include "rectri/oracle.hpp"

#include <vector>

namespace rectri::oracle {

namespace {

template <typename T>
void check_shapes(const TriangularSpec& spec, const MatrixView<const T>& A,
                  const MatrixView<const T>& B) {
  validate(spec);
  if (A.rows() != A.cols())
    throw ShapeError("oracle: A must be square, got " +
                     std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
  const index_t want = spec.side == Side::Left ? B.rows() : B.cols();
  if (want != A.rows())
    throw ShapeError("oracle: B is " + std::to_string(B.rows()) + "x" +
                     std::to_string(B.cols()) + ", not conformal with A of " +
                     std::to_string(A.rows()));
}

// op(materialize(A)) as a dense double matrix.
template <typename T>
MatrixBuffer<double> materialize_op(const MatrixView<const T>& A, Uplo uplo,
                                    Trans trans, Diag diag) {
  MatrixBuffer<double> dense = materialize_triangle(A, uplo, diag);
  if (effective_op(trans, ElemKind::F64) == Trans::NoTrans) return dense;
  const index_t n = dense.rows();
  MatrixBuffer<double> t(n, n);
  for (index_t c = 0; c < n; ++c)
    for (index_t r = 0; r < n; ++r) t(r, c) = dense(c, r);
  return t;
}

}  // namespace

template <typename T>
MatrixBuffer<double> materialize_triangle(MatrixView<const T> A, Uplo uplo,
                                          Diag diag) {
  if (A.rows() != A.cols())
    throw ShapeError("materialize: A must be square");
  const index_t n = A.rows();
  MatrixBuffer<double> out(n, n, 0.0);
  for (index_t c = 0; c < n; ++c) {
    const index_t r0 = uplo == Uplo::Lower ? c : 0;
    const index_t r1 = uplo == Uplo::Lower ? n : c + 1;
    for (index_t r = r0; r < r1; ++r)
      out(r, c) = static_cast<double>(A(r, c));
  }
  if (diag == Diag::Unit)
    for (index_t r = 0; r < n; ++r) out(r, r) = 1.0;
  return out;
}

template <typename T>
MatrixBuffer<double> oracle_trmm(const TriangularSpec& spec,
                                 MatrixView<const T> A, MatrixView<const T> B) {
  check_shapes(spec, A, B);
  const MatrixBuffer<double> M =
      materialize_op(A, spec.uplo, spec.trans, spec.diag);
  MatrixBuffer<double> out(B.rows(), B.cols());
  const double alpha = spec.alpha;
  if (spec.side == Side::Left) {
    for (index_t j = 0; j < B.cols(); ++j)
      for (index_t i = 0; i < B.rows(); ++i) {
        double acc = 0.0;
        for (index_t k = 0; k < M.cols(); ++k)
          acc += M(i, k) * static_cast<double>(B(k, j));
        out(i, j) = alpha * acc;
      }
  } else {
    for (index_t j = 0; j < B.cols(); ++j)
      for (index_t i = 0; i < B.rows(); ++i) {
        double acc = 0.0;
        for (index_t k = 0; k < M.rows(); ++k)
          acc += static_cast<double>(B(i, k)) * M(k, j);
        out(i, j) = alpha * acc;
      }
  }
  return out;
}

template <typename T>
MatrixBuffer<double> oracle_trsm(const TriangularSpec& spec,
                                 MatrixView<const T> A, MatrixView<const T> B) {
  check_shapes(spec, A, B);
  const index_t n = A.rows();

  // Reduce the Right problem to a Left solve on the transposed system:
  // X * op(A) = alpha * B  <=>  op(A)^T X^T = alpha * B^T.
  MatrixBuffer<double> M =
      materialize_op(A, spec.uplo, spec.trans, spec.diag);
  const bool left = spec.side == Side::Left;
  if (!left) {
    MatrixBuffer<double> t(n, n);
    for (index_t c = 0; c < n; ++c)
      for (index_t r = 0; r < n; ++r) t(r, c) = M(c, r);
    M = std::move(t);
  }
  for (index_t r = 0; r < n; ++r)
    if (M(r, r) == 0.0) throw SingularityError(r);

  const index_t k = left ? B.cols() : B.rows();
  const auto rhs = [&](index_t i, index_t c) {
    return spec.alpha * static_cast<double>(left ? B(i, c) : B(c, i));
  };

  // M is triangular but not tagged; detect which triangle is populated by
  // construction of op.
  const Trans eff = effective_op(spec.trans, ElemKind::F64);
  bool lower = (spec.uplo == Uplo::Lower) == (eff == Trans::NoTrans);
  if (!left) lower = !lower;

  MatrixBuffer<double> x(n, k);
  for (index_t c = 0; c < k; ++c) {
    if (lower) {
      for (index_t r = 0; r < n; ++r) {
        double acc = rhs(r, c);
        for (index_t j = 0; j < r; ++j) acc -= M(r, j) * x(j, c);
        x(r, c) = acc / M(r, r);
      }
    } else {
      for (index_t r = n - 1; r >= 0; --r) {
        double acc = rhs(r, c);
        for (index_t j = r + 1; j < n; ++j) acc -= M(r, j) * x(j, c);
        x(r, c) = acc / M(r, r);
      }
    }
  }

  MatrixBuffer<double> out(B.rows(), B.cols());
  for (index_t c = 0; c < out.cols(); ++c)
    for (index_t r = 0; r < out.rows(); ++r)
      out(r, c) = left ? x(r, c) : x(c, r);
  return out;
}

template MatrixBuffer<double> materialize_triangle<float>(
    MatrixView<const float>, Uplo, Diag);
template MatrixBuffer<double> materialize_triangle<double>(
    MatrixView<const double>, Uplo, Diag);
template MatrixBuffer<double> oracle_trmm<float>(const TriangularSpec&,
                                                 MatrixView<const float>,
                                                 MatrixView<const float>);
template MatrixBuffer<double> oracle_trmm<double>(const TriangularSpec&,
                                                  MatrixView<const double>,
                                                  MatrixView<const double>);
template MatrixBuffer<double> oracle_trsm<float>(const TriangularSpec&,
                                                 MatrixView<const float>,
                                                 MatrixView<const float>);
template MatrixBuffer<double> oracle_trsm<double>(const TriangularSpec&,
                                                  MatrixView<const double>,
                                                  MatrixView<const double>);

}  // namespace rectri::oracle
