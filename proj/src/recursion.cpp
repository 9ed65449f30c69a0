#include "rectri/recursion.hpp"

#include <cassert>

namespace rectri {

OpKind parse_op_kind(std::string_view s) {
  if (s == "trmm") return OpKind::Trmm;
  if (s == "trsm") return OpKind::Trsm;
  throw ConfigError("unknown op '" + std::string(s) + "' (trmm|trsm)");
}

// All 32 schemas follow from one in-place safety rule: order the two
// diagonal-block steps so the GEMM update reads only a half of B that still
// holds its pre-update values. For TRMM that half is the one processed
// second (it still holds the inputs the update needs); for TRSM it is the
// half solved first (the update consumes the solved values).
RecursionSchema schema_for(OpKind op, const TriangularSpec& spec) {
  const Trans trans = effective_op(spec.trans, ElemKind::F64);
  const bool straight = (spec.uplo == Uplo::Lower) == (trans == Trans::NoTrans);
  const bool flip_for_op = op == OpKind::Trsm;
  const bool flip_for_side = spec.side == Side::Right;
  const bool first_is_a22 = (straight != flip_for_op) != flip_for_side;

  RecursionSchema schema;
  schema.first_block = first_is_a22 ? DiagBlock::A22 : DiagBlock::A11;
  schema.second_block = first_is_a22 ? DiagBlock::A11 : DiagBlock::A22;

  GemmUpdate& u = schema.update;
  u.off_trans = trans;
  u.off_on_left = spec.side == Side::Left;
  const BHalf first_half = first_is_a22 ? BHalf::B2 : BHalf::B1;
  const BHalf other_half = first_is_a22 ? BHalf::B1 : BHalf::B2;
  if (op == OpKind::Trmm) {
    u.write_half = first_half;
    u.read_half = other_half;
    u.sign = 1.0;
    u.carries_alpha = true;
  } else {
    u.read_half = first_half;
    u.write_half = other_half;
    u.sign = -1.0;
    u.carries_alpha = false;
  }
  return schema;
}

namespace {

template <typename T>
void check_problem(const TriangularSpec& spec, const MatrixView<const T>& A,
                   const MatrixView<T>& B, Threshold threshold,
                   const Backend& backend) {
  validate(spec);
  validate(backend);
  if (threshold.value < 1) throw ConfigError("threshold must be >= 1");
  if (A.rows() != A.cols())
    throw ShapeError("triangular A must be square, got " +
                     std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
  const index_t want = spec.side == Side::Left ? B.rows() : B.cols();
  if (want != A.rows())
    throw ShapeError("B is " + std::to_string(B.rows()) + "x" +
                     std::to_string(B.cols()) + ", not conformal with " +
                     std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                     " A on the " + std::string(to_string(spec.side)));
  if (overlaps(A, B)) throw AliasError("A and B views overlap");
}

// The recursion: first diagonal block, GEMM update, second diagonal block.
// The two steps are ordered by the schema and must run sequentially (the
// update reads what the first step produced or preserves what the second
// step needs); parallelism lives inside gemm and the base kernels.
template <typename T>
class RecDriver {
 public:
  RecDriver(OpKind op, Threshold threshold, const Backend& backend,
            const EventSink& sink, index_t n_total)
      : op_(op), threshold_(threshold), backend_(backend), sink_(sink) {
    max_depth_ = 1;
    for (index_t span = n_total; span > threshold.value; span = (span + 1) / 2)
      ++max_depth_;
    tile_limit_ = std::max(kDefaultTileLimit, threshold.value);
  }

  void run(const TriangularSpec& spec, MatrixView<const T> A, MatrixView<T> B,
           index_t row0, int depth) {
    assert(depth <= max_depth_);
    (void)depth;
    const index_t n = A.rows();
    const index_t rhs = spec.side == Side::Left ? B.cols() : B.rows();

    if (n <= threshold_.value) {
      if (op_ == OpKind::Trmm) {
        emit(RecEvent::BaseTrmm, n, rhs);
        trmm_base(spec, A, B, tile_limit_, backend_);
      } else {
        emit(RecEvent::BaseTrsm, n, rhs);
        try {
          trsm_base(spec, A, B, tile_limit_, backend_);
        } catch (const SingularityError& e) {
          throw SingularityError(row0 + e.index());
        }
      }
      return;
    }

    const index_t mid = split_half(n);
    const RecursionSchema schema = schema_for(op_, spec);

    const MatrixView<const T> a11 = A.subview(0, 0, mid, mid);
    const MatrixView<const T> a22 = A.subview(mid, mid, n - mid, n - mid);
    const MatrixView<const T> off =
        spec.uplo == Uplo::Lower ? A.subview(mid, 0, n - mid, mid)
                                 : A.subview(0, mid, mid, n - mid);
    const bool left = spec.side == Side::Left;
    const MatrixView<T> b1 = left ? B.subview(0, 0, mid, B.cols())
                                  : B.subview(0, 0, B.rows(), mid);
    const MatrixView<T> b2 =
        left ? B.subview(mid, 0, n - mid, B.cols())
             : B.subview(0, mid, B.rows(), n - mid);

    const auto diag_of = [&](DiagBlock block) {
      return block == DiagBlock::A11 ? a11 : a22;
    };
    const auto half_of = [&](BHalf half) { return half == BHalf::B1 ? b1 : b2; };
    const auto row_of = [&](DiagBlock block) {
      return block == DiagBlock::A11 ? row0 : row0 + mid;
    };

    run(spec, diag_of(schema.first_block),
        half_of(schema.first_block == DiagBlock::A11 ? BHalf::B1 : BHalf::B2),
        row_of(schema.first_block), depth + 1);

    const GemmUpdate& u = schema.update;
    const MatrixView<T> dst = half_of(u.write_half);
    const MatrixView<const T> src = half_of(u.read_half);
    const T coeff =
        static_cast<T>(u.sign * (u.carries_alpha ? spec.alpha : 1.0));
    emit(RecEvent::Gemm, dst.rows(), dst.cols());
    if (u.off_on_left)
      gemm(coeff, u.off_trans, off, Trans::NoTrans, src, T{1}, dst, backend_);
    else
      gemm(coeff, Trans::NoTrans, src, u.off_trans, off, T{1}, dst, backend_);

    run(spec, diag_of(schema.second_block),
        half_of(schema.second_block == DiagBlock::A11 ? BHalf::B1 : BHalf::B2),
        row_of(schema.second_block), depth + 1);
  }

 private:
  void emit(RecEvent event, index_t n, index_t m) const {
    if (sink_) sink_(event, n, m);
  }

  OpKind op_;
  Threshold threshold_;
  const Backend& backend_;
  const EventSink& sink_;
  index_t tile_limit_ = kDefaultTileLimit;
  int max_depth_ = 1;
};

}  // namespace

template <typename T>
void rec_trmm(const TriangularSpec& spec, MatrixView<const T> A,
              MatrixView<T> B, Threshold threshold, const Backend& backend,
              const EventSink& sink) {
  check_problem(spec, A, B, threshold, backend);
  if (A.rows() == 0 || B.rows() == 0 || B.cols() == 0) return;

  TriangularSpec eff = spec;
  eff.trans = effective_op(spec, elem_kind_of<T>::value);
  RecDriver<T> driver(OpKind::Trmm, threshold, backend, sink, A.rows());
  driver.run(eff, A, B, 0, 1);
}

template <typename T>
void rec_trsm(const TriangularSpec& spec, MatrixView<const T> A,
              MatrixView<T> B, Threshold threshold, const Backend& backend,
              const EventSink& sink) {
  check_problem(spec, A, B, threshold, backend);
  if (A.rows() == 0 || B.rows() == 0 || B.cols() == 0) return;

  // Alpha is applied exactly once, here; the recursion below runs alpha = 1.
  scale(static_cast<T>(spec.alpha), B);
  TriangularSpec eff = spec;
  eff.trans = effective_op(spec, elem_kind_of<T>::value);
  eff.alpha = 1.0;
  RecDriver<T> driver(OpKind::Trsm, threshold, backend, sink, A.rows());
  driver.run(eff, A, B, 0, 1);
}

template void rec_trmm<float>(const TriangularSpec&, MatrixView<const float>,
                              MatrixView<float>, Threshold, const Backend&,
                              const EventSink&);
template void rec_trmm<double>(const TriangularSpec&, MatrixView<const double>,
                               MatrixView<double>, Threshold, const Backend&,
                               const EventSink&);
template void rec_trsm<float>(const TriangularSpec&, MatrixView<const float>,
                              MatrixView<float>, Threshold, const Backend&,
                              const EventSink&);
template void rec_trsm<double>(const TriangularSpec&, MatrixView<const double>,
                               MatrixView<double>, Threshold, const Backend&,
                               const EventSink&);

}  // namespace rectri
