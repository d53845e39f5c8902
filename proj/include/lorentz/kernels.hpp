#pragma once

// Grid kernels behind every scan in the library. Each kernel exists twice:
// `serial::` is the reference implementation kept for tests and the
// benchmark, `parallel::` is the OpenMP version the library calls. Both
// return identical results: maps write disjoint slots, and reductions are
// max-reductions with a deterministic lowest-index tie break.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lorentz::kernels {

struct ArgMax {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

/// sup over i <= j of g[j] / g[i], with the maximizing pair.
struct PairSup {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  std::size_t j = 0;
};

namespace detail {

inline bool better(double v, std::size_t idx, double best, std::size_t best_idx) {
  if (std::isnan(v)) return false;
  return v > best || (v == best && idx < best_idx);
}

inline bool better_pair(double v, std::size_t i, std::size_t j, const PairSup& b) {
  if (std::isnan(v)) return false;
  return v > b.value || (v == b.value && (i < b.i || (i == b.i && j < b.j)));
}

// Ratio of two nonnegative numbers where 0/0 counts as 1 (no growth) and
// x/0 as +inf.
inline double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  if (num == 0.0) return 1.0;
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

namespace serial {

template <class F>
std::vector<double> map(std::span<const double> xs, F&& f) {
  std::vector<double> out(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) out[k] = f(xs[k]);
  return out;
}

inline ArgMax argmax(std::span<const double> values) {
  ArgMax best;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (detail::better(values[k], k, best.value, best.index)) best = {values[k], k};
  return best;
}

inline PairSup suffix_ratio_sup(std::span<const double> g) {
  PairSup best;
  const std::size_t n = g.size();
  if (n == 0) return best;
  // Running suffix max of g and its lowest index.
  double smax = g[n - 1];
  std::size_t sidx = n - 1;
  std::vector<double> suf(n);
  std::vector<std::size_t> sufi(n);
  for (std::size_t k = n; k-- > 0;) {
    if (g[k] >= smax) {
      smax = g[k];
      sidx = k;
    }
    suf[k] = smax;
    sufi[k] = sidx;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double r = detail::safe_ratio(suf[i], g[i]);
    if (detail::better_pair(r, i, sufi[i], best)) best = {r, i, sufi[i]};
  }
  return best;
}

template <class F>
PairSup double_loop_sup(std::size_t n, std::size_t m, F&& f) {
  PairSup best;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double v = f(i, j);
      if (detail::better_pair(v, i, j, best)) best = {v, i, j};
    }
  return best;
}

template <class R, class F>
std::vector<R> panels(std::span<const double> cuts, F&& f) {
  std::vector<R> out(cuts.size() > 0 ? cuts.size() - 1 : 0);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) out[k] = f(cuts[k], cuts[k + 1]);
  return out;
}

template <class R, class F>
std::vector<R> tabulate(std::size_t n, F&& f) {
  std::vector<R> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = f(k);
  return out;
}

}  // namespace serial

namespace parallel {

namespace detail {
// Captures the first exception thrown inside an OpenMP region so it can be
// rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mu_);
      if (!ptr_) ptr_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (ptr_) std::rethrow_exception(ptr_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr ptr_;
};
}  // namespace detail

template <class F>
std::vector<double> map(std::span<const double> xs, F&& f) {
  std::vector<double> out(xs.size());
  detail::ExceptionSlot slot;
  const auto n = static_cast<long long>(xs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long long k = 0; k < n; ++k) slot.run([&] { out[k] = f(xs[k]); });
  slot.rethrow();
  return out;
}

inline ArgMax argmax(std::span<const double> values) {
  ArgMax best;
  const auto n = static_cast<long long>(values.size());
#pragma omp parallel
  {
    ArgMax local;
#pragma omp for nowait
    for (long long k = 0; k < n; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      if (lorentz::kernels::detail::better(values[idx], idx, local.value, local.index))
        local = {values[idx], idx};
    }
#pragma omp critical
    if (lorentz::kernels::detail::better(local.value, local.index, best.value, best.index))
      best = local;
  }
  return best;
}

inline PairSup suffix_ratio_sup(std::span<const double> g) {
  // The suffix-max scan is linear and cheap; the reduction over i is the part
  // worth spreading out.
  PairSup best;
  const std::size_t n = g.size();
  if (n == 0) return best;
  std::vector<double> suf(n);
  std::vector<std::size_t> sufi(n);
  double smax = g[n - 1];
  std::size_t sidx = n - 1;
  for (std::size_t k = n; k-- > 0;) {
    if (g[k] >= smax) {
      smax = g[k];
      sidx = k;
    }
    suf[k] = smax;
    sufi[k] = sidx;
  }
  const auto nn = static_cast<long long>(n);
#pragma omp parallel
  {
    PairSup local;
#pragma omp for nowait
    for (long long k = 0; k < nn; ++k) {
      const auto i = static_cast<std::size_t>(k);
      const double r = lorentz::kernels::detail::safe_ratio(suf[i], g[i]);
      if (lorentz::kernels::detail::better_pair(r, i, sufi[i], local)) local = {r, i, sufi[i]};
    }
#pragma omp critical
    if (lorentz::kernels::detail::better_pair(local.value, local.i, local.j, best)) best = local;
  }
  return best;
}

template <class F>
PairSup double_loop_sup(std::size_t n, std::size_t m, F&& f) {
  PairSup best;
  detail::ExceptionSlot slot;
  const auto nn = static_cast<long long>(n);
#pragma omp parallel
  {
    PairSup local;
#pragma omp for schedule(dynamic, 4) nowait
    for (long long k = 0; k < nn; ++k) {
      const auto i = static_cast<std::size_t>(k);
      slot.run([&] {
        for (std::size_t j = 0; j < m; ++j) {
          const double v = f(i, j);
          if (lorentz::kernels::detail::better_pair(v, i, j, local)) local = {v, i, j};
        }
      });
    }
#pragma omp critical
    if (lorentz::kernels::detail::better_pair(local.value, local.i, local.j, best)) best = local;
  }
  slot.rethrow();
  return best;
}

template <class R, class F>
std::vector<R> panels(std::span<const double> cuts, F&& f) {
  std::vector<R> out(cuts.size() > 0 ? cuts.size() - 1 : 0);
  detail::ExceptionSlot slot;
  const auto n = static_cast<long long>(out.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long k = 0; k < n; ++k)
    slot.run([&] { out[k] = f(cuts[k], cuts[k + 1]); });
  slot.rethrow();
  return out;
}

template <class R, class F>
std::vector<R> tabulate(std::size_t n, F&& f) {
  std::vector<R> out(n);
  detail::ExceptionSlot slot;
  const auto nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long k = 0; k < nn; ++k) slot.run([&] { out[k] = f(static_cast<std::size_t>(k)); });
  slot.rethrow();
  return out;
}

}  // namespace parallel

}  // namespace lorentz::kernels
