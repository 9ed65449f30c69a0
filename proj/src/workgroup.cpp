#include "rectri/workgroup.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace rectri {

namespace {
constexpr int kRegsPerThread = 8;
constexpr int kGlobalA = 0;
constexpr int kGlobalB = 1;
}  // namespace

// Executes one program: phases in order, threads within a phase in the
// schedule's order, one group at a time (groups share nothing). Every shared
// and global access is checked for same-phase conflicts between threads of
// the same group.
template <typename T>
class Simulator {
 public:
  Simulator(const WorkgroupProgram<T>& program, MatrixView<const T> A,
            MatrixView<const T> B, const SimOptions& options)
      : program_(program), a_(A), options_(options) {
    b_ = MatrixBuffer<T>(B.rows(), B.cols());
    for (index_t c = 0; c < B.cols(); ++c)
      for (index_t r = 0; r < B.rows(); ++r) b_(r, c) = B(r, c);
    if (options_.record_trace) {
      trace_.group_count = program.group_count;
      trace_.threads_per_group = program.threads_per_group;
      trace_.per_thread.resize(static_cast<std::size_t>(
          program.group_count * program.threads_per_group));
    }
  }

  SimResult<T> run(const ScheduleFn& schedule) {
    const index_t threads = program_.threads_per_group;
    std::vector<index_t> order(static_cast<std::size_t>(threads));
    ThreadCtx<T> ctx;
    ctx.sim_ = this;

    for (index_t g = 0; g < program_.group_count; ++g) {
      reset_group_memory();
      for (int ph = 0; ph < static_cast<int>(program_.phases.size()); ++ph) {
        std::iota(order.begin(), order.end(), index_t{0});
        if (schedule) schedule(g, ph, order);
        phase_ = ph;
        phase_accesses_.clear();
        for (index_t t : order) {
          ctx.group_ = g;
          ctx.local_ = t;
          program_.phases[static_cast<std::size_t>(ph)](ctx);
        }
        scan_phase(g, ph);
      }
    }
    return SimResult<T>{std::move(b_), std::move(trace_), std::move(hazards_)};
  }

  T shared_read(index_t group, index_t thread, int slot, index_t i) {
    check_slot(slot, i);
    record(group, thread, MemSpace::Shared, slot, i, AccessKind::Read);
    return shared_[static_cast<std::size_t>(slot)][static_cast<std::size_t>(i)];
  }

  void shared_write(index_t group, index_t thread, int slot, index_t i, T v) {
    check_slot(slot, i);
    record(group, thread, MemSpace::Shared, slot, i, AccessKind::Write);
    shared_[static_cast<std::size_t>(slot)][static_cast<std::size_t>(i)] = v;
  }

  T a_read(index_t group, index_t thread, index_t r, index_t c) {
    if (r < 0 || r >= a_.rows() || c < 0 || c >= a_.cols())
      throw BoundsError("simulated A read out of range");
    record(group, thread, MemSpace::Global, kGlobalA, c * a_.rows() + r,
           AccessKind::Read);
    return a_(r, c);
  }

  T b_read(index_t group, index_t thread, index_t r, index_t c) {
    if (r < 0 || r >= b_.rows() || c < 0 || c >= b_.cols())
      throw BoundsError("simulated B read out of range");
    record(group, thread, MemSpace::Global, kGlobalB, c * b_.rows() + r,
           AccessKind::Read);
    return b_(r, c);
  }

  void b_write(index_t group, index_t thread, index_t r, index_t c, T v) {
    if (r < 0 || r >= b_.rows() || c < 0 || c >= b_.cols())
      throw BoundsError("simulated B write out of range");
    record(group, thread, MemSpace::Global, kGlobalB, c * b_.rows() + r,
           AccessKind::Write);
    b_(r, c) = v;
  }

  T& reg(index_t thread, int i) {
    if (i < 0 || i >= kRegsPerThread)
      throw BoundsError("thread register out of range");
    return regs_[static_cast<std::size_t>(thread * kRegsPerThread + i)];
  }

 private:
  struct PhaseAccess {
    MemSpace space;
    int object;
    index_t index;
    index_t thread;
    AccessKind kind;
  };

  void check_slot(int slot, index_t i) const {
    if (slot < 0 || slot >= static_cast<int>(program_.shared_slots.size()))
      throw BoundsError("shared slot id out of range");
    if (i < 0 || i >= program_.shared_slots[static_cast<std::size_t>(slot)].length)
      throw BoundsError("shared slot index out of range");
  }

  void reset_group_memory() {
    shared_.clear();
    for (const SharedSlotSpec& slot : program_.shared_slots)
      shared_.emplace_back(static_cast<std::size_t>(slot.length),
                           std::numeric_limits<T>::quiet_NaN());
    regs_.assign(static_cast<std::size_t>(program_.threads_per_group) *
                     kRegsPerThread,
                 T{});
  }

  void record(index_t group, index_t thread, MemSpace space, int object,
              index_t index, AccessKind kind) {
    phase_accesses_.push_back(PhaseAccess{space, object, index, thread, kind});
    if (options_.record_trace)
      trace_.thread(group, thread)
          .push_back(AccessRecord{phase_, space, object, index, kind});
  }

  void scan_phase(index_t group, int phase) {
    auto loc_less = [](const PhaseAccess& x, const PhaseAccess& y) {
      if (x.space != y.space) return x.space < y.space;
      if (x.object != y.object) return x.object < y.object;
      return x.index < y.index;
    };
    std::sort(phase_accesses_.begin(), phase_accesses_.end(),
              [&](const PhaseAccess& x, const PhaseAccess& y) {
                if (loc_less(x, y)) return true;
                if (loc_less(y, x)) return false;
                return x.thread < y.thread;
              });
    std::size_t i = 0;
    while (i < phase_accesses_.size()) {
      std::size_t j = i + 1;
      while (j < phase_accesses_.size() &&
             !loc_less(phase_accesses_[i], phase_accesses_[j]))
        ++j;
      // One location: conflicting iff some thread writes it and a different
      // thread touches it in the same phase.
      const PhaseAccess* writer = nullptr;
      for (std::size_t k = i; k < j; ++k)
        if (phase_accesses_[k].kind == AccessKind::Write) {
          writer = &phase_accesses_[k];
          break;
        }
      if (writer != nullptr) {
        for (std::size_t k = i; k < j; ++k) {
          if (phase_accesses_[k].thread != writer->thread) {
            hazards_.items.push_back(Hazard{writer->space, writer->object,
                                            writer->index, group,
                                            writer->thread,
                                            phase_accesses_[k].thread, phase});
            break;
          }
        }
      }
      i = j;
    }
  }

  const WorkgroupProgram<T>& program_;
  MatrixView<const T> a_;
  SimOptions options_;
  MatrixBuffer<T> b_;
  std::vector<std::vector<T>> shared_;
  std::vector<T> regs_;
  std::vector<PhaseAccess> phase_accesses_;
  KernelTrace trace_;
  HazardReport hazards_;
  int phase_ = 0;
};

template <typename T>
T ThreadCtx<T>::shared_read(int slot, index_t i) {
  return static_cast<Simulator<T>*>(sim_)->shared_read(group_, local_, slot, i);
}
template <typename T>
void ThreadCtx<T>::shared_write(int slot, index_t i, T value) {
  static_cast<Simulator<T>*>(sim_)->shared_write(group_, local_, slot, i,
                                                 value);
}
template <typename T>
T ThreadCtx<T>::a_read(index_t r, index_t c) {
  return static_cast<Simulator<T>*>(sim_)->a_read(group_, local_, r, c);
}
template <typename T>
T ThreadCtx<T>::b_read(index_t r, index_t c) {
  return static_cast<Simulator<T>*>(sim_)->b_read(group_, local_, r, c);
}
template <typename T>
void ThreadCtx<T>::b_write(index_t r, index_t c, T value) {
  static_cast<Simulator<T>*>(sim_)->b_write(group_, local_, r, c, value);
}
template <typename T>
T& ThreadCtx<T>::reg(int i) {
  return static_cast<Simulator<T>*>(sim_)->reg(local_, i);
}

namespace {

constexpr int kSlotDiag = 0;
constexpr int kSlotBWork = 1;
constexpr int kSlotACol = 2;

struct TrsmMaps {
  index_t n = 0;
  bool reflected = false;
  bool transposed_rhs = false;
  Uplo uplo = Uplo::Lower;
  Trans eff = Trans::NoTrans;
  bool unit = false;

  index_t pi(index_t r) const { return reflected ? n - 1 - r : r; }

  // (row, col) of the effective lower factor's (r, j) entry in stored A.
  std::pair<index_t, index_t> lower(index_t r, index_t j) const {
    if (uplo == Uplo::Lower)
      return eff == Trans::NoTrans ? std::pair{r, j}
                                   : std::pair{n - 1 - j, n - 1 - r};
    return eff == Trans::NoTrans ? std::pair{n - 1 - r, n - 1 - j}
                                 : std::pair{j, r};
  }
};

TrsmMaps make_trsm_maps(const TriangularSpec& spec, index_t n, ElemKind kind) {
  TrsmMaps maps;
  maps.n = n;
  maps.uplo = spec.uplo;
  const Trans trans = effective_op(spec, kind);
  maps.eff = spec.side == Side::Left
                 ? trans
                 : (trans == Trans::NoTrans ? Trans::Trans : Trans::NoTrans);
  maps.reflected = (spec.uplo == Uplo::Lower) == (maps.eff == Trans::Trans);
  maps.transposed_rhs = spec.side == Side::Right;
  maps.unit = spec.diag == Diag::Unit;
  return maps;
}

template <typename T>
WorkgroupProgram<T> build_trsm_program_impl(const TriangularSpec& spec,
                                            index_t n, index_t m,
                                            index_t tile_limit,
                                            bool missing_barrier) {
  validate(spec);
  if (n < 1) throw ShapeError("trsm program needs n >= 1");
  if (m < 0) throw ShapeError("trsm program needs m >= 0");
  if (n > tile_limit)
    throw TileLimitError("tile of size " + std::to_string(n) +
                         " exceeds limit " + std::to_string(tile_limit));
  if (missing_barrier && n < 2)
    throw ConfigError("a 1x1 tile has no barrier to drop");

  const TrsmMaps maps = make_trsm_maps(spec, n, elem_kind_of<T>::value);
  const T alpha = static_cast<T>(spec.alpha);

  WorkgroupProgram<T> program;
  program.group_count = m;
  program.threads_per_group = n;
  program.shared_slots = {{"diag", n}, {"b_work", n}, {"a_col", n}};

  const auto rhs_read = [maps](ThreadCtx<T>& ctx, index_t i) {
    return maps.transposed_rhs ? ctx.b_read(ctx.group(), i)
                               : ctx.b_read(i, ctx.group());
  };
  const auto rhs_write = [maps](ThreadCtx<T>& ctx, index_t i, T v) {
    if (maps.transposed_rhs)
      ctx.b_write(ctx.group(), i, v);
    else
      ctx.b_write(i, ctx.group(), v);
  };

  // Loads the diagonal and the normalized right-hand side; after it, row 0 of
  // the solution is final.
  const auto load_body = [maps, alpha, rhs_read](ThreadCtx<T>& ctx) {
    const index_t r = ctx.local();
    const index_t p = maps.pi(r);
    const T d = maps.unit ? T{1} : ctx.a_read(p, p);
    ctx.shared_write(kSlotDiag, r, d);
    const T loaded = alpha * rhs_read(ctx, p);
    ctx.shared_write(kSlotBWork, r, maps.unit ? loaded : loaded / d);
  };

  // Phase p substitutes the resolved row p-1 out of every later row,
  // finalizing row p.
  const auto elim_body = [maps](ThreadCtx<T>& ctx, index_t p) {
    const index_t r = ctx.local();
    if (r < p) return;
    const T resolved = ctx.shared_read(kSlotBWork, p - 1);
    const auto [ar, ac] = maps.lower(r, p - 1);
    const T lval = ctx.a_read(ar, ac);
    const T mult = maps.unit ? lval : lval / ctx.shared_read(kSlotDiag, r);
    ctx.shared_write(kSlotACol, r, mult);
    const T mine = ctx.shared_read(kSlotBWork, r);
    ctx.shared_write(kSlotBWork, r,
                     mine - ctx.shared_read(kSlotACol, r) * resolved);
  };

  const auto writeback_body = [maps, rhs_write](ThreadCtx<T>& ctx) {
    const index_t r = ctx.local();
    rhs_write(ctx, maps.pi(r), ctx.shared_read(kSlotBWork, r));
  };

  if (!missing_barrier) {
    program.phases.push_back([load_body, writeback_body, n](ThreadCtx<T>& ctx) {
      load_body(ctx);
      if (n == 1) writeback_body(ctx);
    });
    for (index_t p = 1; p < n; ++p) {
      program.phases.push_back(
          [elim_body, writeback_body, p, n](ThreadCtx<T>& ctx) {
            elim_body(ctx, p);
            if (p == n - 1) writeback_body(ctx);
          });
    }
  } else {
    // Load fused into the first elimination phase: thread 0's write of
    // b_work[0] and the other threads' reads of it now share a phase.
    program.phases.push_back([load_body, elim_body, writeback_body,
                              n](ThreadCtx<T>& ctx) {
      load_body(ctx);
      elim_body(ctx, 1);
      if (n == 2) writeback_body(ctx);
    });
    for (index_t p = 2; p < n; ++p) {
      program.phases.push_back(
          [elim_body, writeback_body, p, n](ThreadCtx<T>& ctx) {
            elim_body(ctx, p);
            if (p == n - 1) writeback_body(ctx);
          });
    }
  }
  return program;
}

}  // namespace

template <typename T>
WorkgroupProgram<T> build_trsm_program(const TriangularSpec& spec, index_t n,
                                       index_t m, index_t tile_limit) {
  return build_trsm_program_impl<T>(spec, n, m, tile_limit, false);
}

template <typename T>
WorkgroupProgram<T> build_trsm_program_missing_barrier(
    const TriangularSpec& spec, index_t n, index_t m, index_t tile_limit) {
  return build_trsm_program_impl<T>(spec, n, m, tile_limit, true);
}

template <typename T>
SimResult<T> simulate_scheduled(const WorkgroupProgram<T>& program,
                                MatrixView<const T> A, MatrixView<const T> B,
                                const ScheduleFn& schedule,
                                const SimOptions& options) {
  Simulator<T> sim(program, A, B, options);
  return sim.run(schedule);
}

template <typename T>
SimResult<T> simulate(const WorkgroupProgram<T>& program, MatrixView<const T> A,
                      MatrixView<const T> B, std::uint64_t schedule_seed,
                      const SimOptions& options) {
  ScheduleFn shuffled = [schedule_seed](index_t group, int phase,
                                        std::vector<index_t>& order) {
    std::mt19937_64 rng(schedule_seed ^
                        (0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(group) + 1)) ^
                        (0xbf58476d1ce4e5b9ull * (static_cast<std::uint64_t>(phase) + 1)));
    std::shuffle(order.begin(), order.end(), rng);
  };
  return simulate_scheduled(program, A, B, shuffled, options);
}

template class ThreadCtx<float>;
template class ThreadCtx<double>;

template WorkgroupProgram<float> build_trsm_program<float>(
    const TriangularSpec&, index_t, index_t, index_t);
template WorkgroupProgram<double> build_trsm_program<double>(
    const TriangularSpec&, index_t, index_t, index_t);
template WorkgroupProgram<float> build_trsm_program_missing_barrier<float>(
    const TriangularSpec&, index_t, index_t, index_t);
template WorkgroupProgram<double> build_trsm_program_missing_barrier<double>(
    const TriangularSpec&, index_t, index_t, index_t);
template SimResult<float> simulate_scheduled<float>(
    const WorkgroupProgram<float>&, MatrixView<const float>,
    MatrixView<const float>, const ScheduleFn&, const SimOptions&);
template SimResult<double> simulate_scheduled<double>(
    const WorkgroupProgram<double>&, MatrixView<const double>,
    MatrixView<const double>, const ScheduleFn&, const SimOptions&);
template SimResult<float> simulate<float>(const WorkgroupProgram<float>&,
                                          MatrixView<const float>,
                                          MatrixView<const float>,
                                          std::uint64_t, const SimOptions&);
template SimResult<double> simulate<double>(const WorkgroupProgram<double>&,
                                            MatrixView<const double>,
                                            MatrixView<const double>,
                                            std::uint64_t, const SimOptions&);

}  // namespace rectri
