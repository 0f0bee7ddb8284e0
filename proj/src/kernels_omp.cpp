#include <exception>

#include "regmdp/kernels.hpp"

namespace regmdp::kernels::omp {

void bellman_sweep(const BellmanTables& t, std::span<const double> v, std::span<double> v_out,
                   std::span<std::size_t> argmax) {
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    detail::bellman_state(t, v, static_cast<std::size_t>(s), v_out[s], argmax[s]);
  }
}

void map(std::span<const double> xs, std::span<double> out, const std::function<double(double)>& fn) {
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = fn(xs[i]);
    } catch (...) {
#pragma omp critical(regmdp_map_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void episode_returns(const EpisodeTables& t, std::uint64_t seed, std::uint64_t first_episode, std::size_t start,
                     std::size_t horizon, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = detail::episode_return(t, seed, first_episode + static_cast<std::uint64_t>(i), start, horizon);
  }
}

}  // namespace regmdp::kernels::omp
