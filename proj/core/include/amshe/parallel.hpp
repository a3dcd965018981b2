#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace amshe {

/// Evaluates fn(state, i) for i in [0, n) on `workers` threads and returns the
/// results indexed by i. Each thread builds its own state with make_state().
/// Results do not depend on the worker count. The exception of the lowest
/// failing index is rethrown.
template <class MakeState, class Fn>
auto parallel_map(std::size_t n, unsigned workers, MakeState&& make_state, Fn&& fn) {
  using State = decltype(make_state());
  using Result = decltype(fn(std::declval<State&>(), std::size_t{0}));
  std::vector<std::optional<Result>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex setup_mutex;
  std::exception_ptr setup_error;

  auto work = [&] {
    std::optional<State> state;
    try {
      state.emplace(make_state());
    } catch (...) {
      const std::lock_guard lock(setup_mutex);
      if (!setup_error) setup_error = std::current_exception();
      failed = true;
      return;
    }
    while (!failed) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        slots[i].emplace(fn(*state, i));
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };

  const unsigned count = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1)));
  if (count == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (unsigned t = 0; t < count; ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (setup_error) std::rethrow_exception(setup_error);
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace amshe
