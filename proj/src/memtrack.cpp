#include "cyfrob/memtrack.hpp"

#include <malloc.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <new>

#include <gmp.h>

namespace cyfrob::memtrack {

namespace {

// signed: GMP blocks allocated before install() are freed through the counters
std::atomic<long long> g_current{0};
std::atomic<long long> g_peak{0};
std::atomic<bool> g_gmp{false};

void note_alloc(void* ptr) {
  if (!ptr) return;
  const long long n = static_cast<long long>(malloc_usable_size(ptr));
  const long long now = g_current.fetch_add(n, std::memory_order_relaxed) + n;
  long long peak = g_peak.load(std::memory_order_relaxed);
  while (now > peak && !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
  }
}

void note_free(void* ptr) {
  if (ptr) g_current.fetch_sub(static_cast<long long>(malloc_usable_size(ptr)), std::memory_order_relaxed);
}

void* tracked_malloc(std::size_t n) {
  void* ptr = std::malloc(n);
  if (!ptr) throw std::bad_alloc();
  note_alloc(ptr);
  return ptr;
}

void tracked_free(void* ptr) {
  note_free(ptr);
  std::free(ptr);
}

void* gmp_alloc(std::size_t n) { return tracked_malloc(n); }

void* gmp_realloc(void* ptr, std::size_t, std::size_t n) {
  note_free(ptr);
  void* out = std::realloc(ptr, n);
  if (!out) throw std::bad_alloc();
  note_alloc(out);
  return out;
}

void gmp_free(void* ptr, std::size_t) { tracked_free(ptr); }

}  // namespace

void install() {
  bool expected = false;
  if (g_gmp.compare_exchange_strong(expected, true)) mp_set_memory_functions(gmp_alloc, gmp_realloc, gmp_free);
}

bool installed() { return g_gmp.load(); }
std::size_t current_bytes() { return static_cast<std::size_t>(std::max(0LL, g_current.load())); }
std::size_t peak_bytes() { return static_cast<std::size_t>(std::max(0LL, g_peak.load())); }
void reset_peak() { g_peak.store(g_current.load()); }

}  // namespace cyfrob::memtrack

void* operator new(std::size_t n) { return cyfrob::memtrack::tracked_malloc(n ? n : 1); }
void* operator new[](std::size_t n) { return cyfrob::memtrack::tracked_malloc(n ? n : 1); }
void* operator new(std::size_t n, const std::nothrow_t&) noexcept {
  void* ptr = std::malloc(n ? n : 1);
  cyfrob::memtrack::note_alloc(ptr);
  return ptr;
}
void* operator new[](std::size_t n, const std::nothrow_t&) noexcept {
  void* ptr = std::malloc(n ? n : 1);
  cyfrob::memtrack::note_alloc(ptr);
  return ptr;
}
void operator delete(void* ptr) noexcept { cyfrob::memtrack::tracked_free(ptr); }
void operator delete[](void* ptr) noexcept { cyfrob::memtrack::tracked_free(ptr); }
void operator delete(void* ptr, std::size_t) noexcept { cyfrob::memtrack::tracked_free(ptr); }
void operator delete[](void* ptr, std::size_t) noexcept { cyfrob::memtrack::tracked_free(ptr); }
void operator delete(void* ptr, const std::nothrow_t&) noexcept { cyfrob::memtrack::tracked_free(ptr); }
void operator delete[](void* ptr, const std::nothrow_t&) noexcept { cyfrob::memtrack::tracked_free(ptr); }
