#include "rectri/base_kernels.hpp"

#include <string>
#include <vector>

#include "parallel_util.hpp"

namespace rectri {

namespace {

Trans flip(Trans t) {
  return t == Trans::NoTrans ? Trans::Trans : Trans::NoTrans;
}

template <typename T>
void check_tile(const TriangularSpec& spec, const MatrixView<const T>& A,
                const MatrixView<T>& B, index_t tile_limit) {
  validate(spec);
  if (A.rows() != A.cols())
    throw ShapeError("triangular A must be square, got " +
                     std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
  const index_t want = spec.side == Side::Left ? B.rows() : B.cols();
  if (want != A.rows())
    throw ShapeError("B is " + std::to_string(B.rows()) + "x" +
                     std::to_string(B.cols()) + ", not conformal with " +
                     std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                     " A on the " + std::string(to_string(spec.side)));
  if (A.rows() > tile_limit)
    throw TileLimitError("tile of size " + std::to_string(A.rows()) +
                         " exceeds limit " + std::to_string(tile_limit));
  if (overlaps(A, B)) throw AliasError("A and B views overlap");
}

// Both kernels run the Left form; Right is the same computation on the
// transposed problem (op flipped, B addressed row-wise).

template <typename T>
struct RhsAccess {
  T* base;
  index_t ld;
  bool transposed;

  T& operator()(index_t i, index_t c) const {
    return transposed ? base[i * ld + c] : base[c * ld + i];
  }
};

// TRSM in the phase-synchronized shape of the workgroup program: every
// right-hand side is normalized by the diagonal up front, then row p-1's
// final value is substituted out of all later rows, one p per phase.
// For Upper/Trans forms the same loop runs on reflected indices:
//   pi(r) maps the loop's row r to a stored row of A, and lower(r, j) reads
//   the effective lower factor's (r, j) entry.
template <typename T>
void trsm_left_lower(Uplo uplo, Trans trans, Diag diag, T alpha, index_t n,
                     const MatrixView<const T>& A, const RhsAccess<T>& B,
                     index_t rhs, const Backend& backend) {
  const bool reflected = (uplo == Uplo::Lower) == (trans == Trans::Trans);
  const bool unit = diag == Diag::Unit;

  const auto pi = [&](index_t r) { return reflected ? n - 1 - r : r; };
  const auto lower = [&](index_t r, index_t j) -> T {
    if (uplo == Uplo::Lower)
      return trans == Trans::NoTrans ? A(r, j) : A(n - 1 - j, n - 1 - r);
    return trans == Trans::NoTrans ? A(n - 1 - r, n - 1 - j) : A(j, r);
  };

  std::vector<T> diag_vals(static_cast<std::size_t>(n), T{1});
  if (!unit)
    for (index_t r = 0; r < n; ++r) diag_vals[r] = A(pi(r), pi(r));

  detail::parallel_chunks(rhs, backend.parallel_width, [&](index_t c0,
                                                           index_t c1) {
    for (index_t c = c0; c < c1; ++c) {
      for (index_t r = 0; r < n; ++r) {
        const T loaded = alpha * B(pi(r), c);
        B(pi(r), c) = unit ? loaded : loaded / diag_vals[r];
      }
      for (index_t p = 1; p < n; ++p) {
        const T resolved = B(pi(p - 1), c);
        for (index_t r = p; r < n; ++r) {
          const T mult = unit ? lower(r, p - 1) : lower(r, p - 1) / diag_vals[r];
          B(pi(r), c) = B(pi(r), c) - mult * resolved;
        }
      }
    }
  });
}

// TRMM forms follow the classic in-place orderings: saxpy sweeps for the
// NoTrans triangles, dot sweeps for the Trans ones, each directed so every
// read sees a not-yet-overwritten value.
template <typename T>
void trmm_left(Uplo uplo, Trans trans, Diag diag, T alpha, index_t n,
               const MatrixView<const T>& A, const RhsAccess<T>& B, index_t rhs,
               const Backend& backend) {
  const bool unit = diag == Diag::Unit;
  detail::parallel_chunks(rhs, backend.parallel_width, [&](index_t c0,
                                                           index_t c1) {
    for (index_t c = c0; c < c1; ++c) {
      if (trans == Trans::NoTrans && uplo == Uplo::Lower) {
        for (index_t k = n - 1; k >= 0; --k) {
          const T temp = alpha * B(k, c);
          B(k, c) = unit ? temp : temp * A(k, k);
          for (index_t i = k + 1; i < n; ++i)
            B(i, c) = B(i, c) + temp * A(i, k);
        }
      } else if (trans == Trans::NoTrans && uplo == Uplo::Upper) {
        for (index_t k = 0; k < n; ++k) {
          const T temp = alpha * B(k, c);
          B(k, c) = unit ? temp : temp * A(k, k);
          for (index_t i = 0; i < k; ++i) B(i, c) = B(i, c) + temp * A(i, k);
        }
      } else if (trans == Trans::Trans && uplo == Uplo::Lower) {
        for (index_t i = 0; i < n; ++i) {
          T temp = unit ? B(i, c) : B(i, c) * A(i, i);
          for (index_t k = i + 1; k < n; ++k) temp += A(k, i) * B(k, c);
          B(i, c) = alpha * temp;
        }
      } else {
        for (index_t i = n - 1; i >= 0; --i) {
          T temp = unit ? B(i, c) : B(i, c) * A(i, i);
          for (index_t k = 0; k < i; ++k) temp += A(k, i) * B(k, c);
          B(i, c) = alpha * temp;
        }
      }
    }
  });
}

}  // namespace

template <typename T>
void trmm_base(const TriangularSpec& spec, MatrixView<const T> A,
               MatrixView<T> B, index_t tile_limit, const Backend& backend) {
  check_tile(spec, A, B, tile_limit);
  validate(backend);
  const index_t n = A.rows();
  const index_t rhs = spec.side == Side::Left ? B.cols() : B.rows();
  if (n == 0 || rhs == 0) return;

  const T alpha = static_cast<T>(spec.alpha);
  if (alpha == T{}) {
    T* base = B.data();
    const index_t ld = B.leading_dim();
    for (index_t j = 0; j < B.cols(); ++j)
      for (index_t i = 0; i < B.rows(); ++i) base[j * ld + i] = T{};
    return;
  }

  const Trans trans = effective_op(spec, elem_kind_of<T>::value);
  RhsAccess<T> rhs_access{B.data(), B.leading_dim(), spec.side == Side::Right};
  const Trans eff = spec.side == Side::Left ? trans : flip(trans);
  trmm_left(spec.uplo, eff, spec.diag, alpha, n, A, rhs_access, rhs, backend);
}

template <typename T>
void trsm_base(const TriangularSpec& spec, MatrixView<const T> A,
               MatrixView<T> B, index_t tile_limit, const Backend& backend) {
  check_tile(spec, A, B, tile_limit);
  validate(backend);
  const index_t n = A.rows();
  const index_t rhs = spec.side == Side::Left ? B.cols() : B.rows();

  if (spec.diag == Diag::NonUnit) {
    for (index_t r = 0; r < n; ++r)
      if (A(r, r) == T{}) throw SingularityError(r);
  }
  if (n == 0 || rhs == 0) return;

  const Trans trans = effective_op(spec, elem_kind_of<T>::value);
  RhsAccess<T> rhs_access{B.data(), B.leading_dim(), spec.side == Side::Right};
  const Trans eff = spec.side == Side::Left ? trans : flip(trans);
  trsm_left_lower(spec.uplo, eff, spec.diag, static_cast<T>(spec.alpha), n, A,
                  rhs_access, rhs, backend);
}

template void trmm_base<float>(const TriangularSpec&, MatrixView<const float>,
                               MatrixView<float>, index_t, const Backend&);
template void trmm_base<double>(const TriangularSpec&, MatrixView<const double>,
                                MatrixView<double>, index_t, const Backend&);
template void trsm_base<float>(const TriangularSpec&, MatrixView<const float>,
                               MatrixView<float>, index_t, const Backend&);
template void trsm_base<double>(const TriangularSpec&, MatrixView<const double>,
                                MatrixView<double>, index_t, const Backend&);

}  // namespace rectri
