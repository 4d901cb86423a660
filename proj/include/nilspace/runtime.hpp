#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace nilspace {

/// Default candidate budget (2^24) unless NILSPACE_LAB_BUDGET overrides it.
std::uint64_t default_budget();
void set_default_budget(std::uint64_t budget);

/// Worker pool cap used by parallel_for. 0 means hardware concurrency.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Counts enumerated candidates against a fixed limit. Shared between
/// workers; charge() throws ResourceLimit once the limit is crossed.
class SearchBudget {
 public:
  explicit SearchBudget(std::uint64_t limit = default_budget()) : limit_(limit) {}
  SearchBudget(const SearchBudget&) = delete;
  SearchBudget& operator=(const SearchBudget&) = delete;

  void charge(std::uint64_t amount, const char* what, int dimension = -1);
  bool would_exceed(std::uint64_t amount) const noexcept {
    return used_.load(std::memory_order_relaxed) + amount > limit_;
  }
  std::uint64_t used() const noexcept { return used_.load(std::memory_order_relaxed); }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::uint64_t limit_;
  std::atomic<std::uint64_t> used_{0};
};

/// Runs body(i) for i in [0, count). Indices are handed out dynamically, so
/// callers must write results into per-index slots and reduce in index order.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Overflow-checked integer power; returns UINT64_MAX on overflow.
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp);

}  // namespace nilspace
