// Size-class free lists for GMP limb storage. Exact arithmetic on small
// rationals is dominated by 8-32 byte allocations; recycling them per thread
// roughly halves the cost of the identity suites.

#include <gmp.h>

#include <cstdlib>
#include <cstring>
#include <new>

namespace enlab::detail {

namespace {

constexpr std::size_t kClasses = 8;  // 8, 16, ..., 64 bytes
constexpr std::size_t kSlab = 1 << 16;

struct FreeNode {
  FreeNode* next;
};

struct Pool {
  FreeNode* heads[kClasses] = {};
  char* slab = nullptr;
  std::size_t left = 0;

  void* take(std::size_t cls) {
    if (FreeNode* n = heads[cls]) {
      heads[cls] = n->next;
      return n;
    }
    const std::size_t bytes = (cls + 1) * 8;
    if (left < bytes) {
      slab = static_cast<char*>(std::malloc(kSlab));
      if (!slab) throw std::bad_alloc();
      left = kSlab;
    }
    void* p = slab;
    slab += bytes;
    left -= bytes;
    return p;
  }

  void give(void* p, std::size_t cls) {
    auto* n = static_cast<FreeNode*>(p);
    n->next = heads[cls];
    heads[cls] = n;
  }
};

thread_local Pool pool;

inline std::size_t size_class(std::size_t bytes) { return (bytes + 7) / 8 - 1; }

void* pool_alloc(std::size_t bytes) {
  if (bytes == 0) bytes = 8;
  if (bytes <= kClasses * 8) return pool.take(size_class(bytes));
  void* p = std::malloc(bytes);
  if (!p) throw std::bad_alloc();
  return p;
}

void pool_free(void* p, std::size_t bytes) {
  if (!p) return;
  if (bytes == 0) bytes = 8;
  if (bytes <= kClasses * 8)
    pool.give(p, size_class(bytes));
  else
    std::free(p);
}

void* pool_realloc(void* p, std::size_t old_bytes, std::size_t new_bytes) {
  if (old_bytes > kClasses * 8 && new_bytes > kClasses * 8) {
    void* q = std::realloc(p, new_bytes);
    if (!q) throw std::bad_alloc();
    return q;
  }
  void* q = pool_alloc(new_bytes);
  std::memcpy(q, p, old_bytes < new_bytes ? old_bytes : new_bytes);
  pool_free(p, old_bytes);
  return q;
}

}  // namespace

bool install_gmp_pool() {
  mp_set_memory_functions(pool_alloc, pool_realloc, pool_free);
  return true;
}

}  // namespace enlab::detail
