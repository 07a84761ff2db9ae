#pragma once

// Data-parallel kernels run over a fixed block decomposition. Each block is
// accumulated serially (Neumaier compensation) and the per-block partials are
// folded in block order, so results are bitwise identical for any thread
// count — the serial driver and the OpenMP driver produce the same bytes.

#include <cmath>
#include <cstdint>
#include <exception>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace carnot::par {

inline constexpr std::int64_t kBlockSize = 1024;

inline bool openmp_enabled() {
#if defined(_OPENMP)
  return true;
#else
  return false;
#endif
}

inline int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Compensated (Neumaier) accumulator.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double result() const { return sum + comp; }
};

/// Runs fn(block_index, i_begin, i_end) over the fixed block decomposition of
/// [0, n). Exceptions thrown inside a block are captured and rethrown after
/// the loop completes.
template <class F>
void for_blocks(std::int64_t n, bool parallel, F&& fn) {
  if (n <= 0) return;
  const std::int64_t nblocks = (n + kBlockSize - 1) / kBlockSize;
  std::exception_ptr err = nullptr;

#if defined(_OPENMP)
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < nblocks; ++b) {
      try {
        const std::int64_t lo = b * kBlockSize;
        const std::int64_t hi = std::min(n, lo + kBlockSize);
        fn(b, lo, hi);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#else
  (void)parallel;
#endif
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t lo = b * kBlockSize;
    const std::int64_t hi = std::min(n, lo + kBlockSize);
    fn(b, lo, hi);
  }
  if (err) std::rethrow_exception(err);
}

/// Deterministic sum of term(i) over [0, n).
template <class F>
double sum_indexed(std::int64_t n, bool parallel, F&& term) {
  if (n <= 0) return 0.0;
  const std::int64_t nblocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
  for_blocks(n, parallel, [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
    Kahan acc;
    for (std::int64_t i = lo; i < hi; ++i) acc.add(term(i));
    partial[static_cast<std::size_t>(b)] = acc.result();
  });
  Kahan total;
  for (double p : partial) total.add(p);
  return total.result();
}

/// Deterministic K-component sum; term(i, out) fills out[0..K).
template <int K, class F>
std::array<double, K> sum_indexed_multi(std::int64_t n, bool parallel, F&& term) {
  std::array<double, K> res{};
  if (n <= 0) return res;
  const std::int64_t nblocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::array<double, K>> partial(static_cast<std::size_t>(nblocks));
  for_blocks(n, parallel, [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
    std::array<Kahan, K> acc{};
    double buf[K];
    for (std::int64_t i = lo; i < hi; ++i) {
      term(i, buf);
      for (int k = 0; k < K; ++k) acc[k].add(buf[k]);
    }
    for (int k = 0; k < K; ++k) partial[static_cast<std::size_t>(b)][k] = acc[k].result();
  });
  std::array<Kahan, K> total{};
  for (auto& p : partial)
    for (int k = 0; k < K; ++k) total[k].add(p[k]);
  for (int k = 0; k < K; ++k) res[k] = total[k].result();
  return res;
}

/// Fills out[i] = fn(i); deterministic by construction.
template <class F>
void transform_indexed(std::int64_t n, bool parallel, std::vector<double>& out, F&& fn) {
  out.assign(static_cast<std::size_t>(n), 0.0);
  for_blocks(n, parallel, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) out[static_cast<std::size_t>(i)] = fn(i);
  });
}

}  // namespace carnot::par
