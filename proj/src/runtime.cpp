#include "nilspace/runtime.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "nilspace/error.hpp"

namespace nilspace {
namespace {

std::uint64_t budget_from_env() {
  if (const char* env = std::getenv("NILSPACE_LAB_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::uint64_t{1} << 24;
}

std::atomic<std::uint64_t> g_budget{budget_from_env()};
std::atomic<unsigned> g_threads{1};

}  // namespace

std::uint64_t default_budget() { return g_budget.load(); }

void set_default_budget(std::uint64_t budget) {
  if (budget == 0) throw InvalidArgument("budget must be positive");
  g_budget.store(budget);
}

void set_thread_count(unsigned threads) { g_threads.store(threads); }

unsigned thread_count() {
  const unsigned t = g_threads.load();
  if (t != 0) return t;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void SearchBudget::charge(std::uint64_t amount, const char* what, int dimension) {
  const std::uint64_t before = used_.fetch_add(amount, std::memory_order_relaxed);
  if (before + amount > limit_) {
    throw ResourceLimit(std::string("budget of ") + std::to_string(limit_) +
                            " candidates exhausted during " + what,
                        dimension);
  }
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

}  // namespace nilspace
