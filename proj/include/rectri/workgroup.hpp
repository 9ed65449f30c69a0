#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rectri/flags.hpp"
#include "rectri/matrix.hpp"

namespace rectri {

// Single-threaded model of a SIMT workgroup launch: one group per right-hand
// side, one thread per row, phases separated by barriers. It exists to check
// the synchronization contract of the base-kernel formulation, not to model
// capacity or timing.

enum class AccessKind { Read, Write };
enum class MemSpace { Shared, Global };

struct AccessRecord {
  int phase;
  MemSpace space;
  int object;  // shared slot index, or global matrix id (0 = A, 1 = B)
  index_t index;
  AccessKind kind;
};

// Ordered per-thread access logs, indexed [group][thread]. Phases are
// nondecreasing within a thread by construction.
struct KernelTrace {
  index_t group_count = 0;
  index_t threads_per_group = 0;
  std::vector<std::vector<AccessRecord>> per_thread;

  std::vector<AccessRecord>& thread(index_t group, index_t local) {
    return per_thread[static_cast<std::size_t>(group * threads_per_group +
                                               local)];
  }
};

// One conflicting same-phase pair: accesses to the same location from two
// different threads of one group where at least one side is a write.
struct Hazard {
  MemSpace space;
  int object;
  index_t index;
  index_t group;
  index_t thread_a;
  index_t thread_b;
  int phase;
};

// Empty iff the program's result is independent of intra-phase thread order.
struct HazardReport {
  std::vector<Hazard> items;
  bool empty() const noexcept { return items.empty(); }
};

struct SharedSlotSpec {
  std::string name;
  index_t length;
};

template <typename T>
class ThreadCtx;

// Barrier-delimited program: every phase body runs once per thread, in an
// order chosen by the schedule, with a barrier between consecutive phases.
// Groups share nothing; barriers scope to one group.
template <typename T>
struct WorkgroupProgram {
  index_t group_count = 0;
  index_t threads_per_group = 0;
  std::vector<SharedSlotSpec> shared_slots;
  std::vector<std::function<void(ThreadCtx<T>&)>> phases;

  index_t barrier_count() const noexcept {
    return phases.empty() ? 0 : static_cast<index_t>(phases.size()) - 1;
  }
};

// Access surface handed to phase bodies. Every read and write is logged for
// hazard detection; reg() is private per-thread storage and is not logged.
template <typename T>
class ThreadCtx {
 public:
  index_t group() const noexcept { return group_; }
  index_t local() const noexcept { return local_; }

  T shared_read(int slot, index_t i);
  void shared_write(int slot, index_t i, T value);

  T a_read(index_t r, index_t c);
  T b_read(index_t r, index_t c);
  void b_write(index_t r, index_t c, T value);

  T& reg(int i);

 private:
  template <typename U>
  friend class Simulator;

  ThreadCtx() = default;
  void* sim_ = nullptr;
  index_t group_ = 0;
  index_t local_ = 0;
};

template <typename T>
struct SimResult {
  MatrixBuffer<T> b_out;
  KernelTrace trace;
  HazardReport hazards;
};

struct SimOptions {
  bool record_trace = true;
};

// Permutation provider: fills `order` (a permutation of 0..threads-1) for the
// given group and phase.
using ScheduleFn =
    std::function<void(index_t group, int phase, std::vector<index_t>& order)>;

// Builds the phase program for one TRSM tile: n threads per group, one group
// per right-hand side, n phases (phase i finalizes row i of the solution),
// shared slots for the diagonal, the working column of B, and the current
// column of A. Upper/Right/Trans variants reuse the same body through index
// reflection. Requires n >= 1 and n <= tile_limit.
template <typename T>
WorkgroupProgram<T> build_trsm_program(const TriangularSpec& spec, index_t n,
                                       index_t m, index_t tile_limit = 256);

// Same tile, but the load phase is fused into the first elimination phase,
// dropping the barrier between them. Solves correctly only under in-order
// schedules; exists so tests can watch the simulator flag a real race.
template <typename T>
WorkgroupProgram<T> build_trsm_program_missing_barrier(
    const TriangularSpec& spec, index_t n, index_t m, index_t tile_limit = 256);

// Runs the program with an explicit intra-phase schedule. A and B are the
// global bindings; B is copied, mutated by the run, and returned.
template <typename T>
SimResult<T> simulate_scheduled(const WorkgroupProgram<T>& program,
                                MatrixView<const T> A, MatrixView<const T> B,
                                const ScheduleFn& schedule,
                                const SimOptions& options = {});

// Runs the program permuting intra-phase thread order pseudo-randomly from
// the seed. Hazards are reported, never thrown.
template <typename T>
SimResult<T> simulate(const WorkgroupProgram<T>& program, MatrixView<const T> A,
                      MatrixView<const T> B, std::uint64_t schedule_seed,
                      const SimOptions& options = {});

}  // namespace rectri
