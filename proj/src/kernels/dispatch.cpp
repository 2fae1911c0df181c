#include "kernels_internal.hpp"

#include <atomic>

namespace mstab::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(MSTAB_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* best_table() noexcept {
  if (const Table* t = avx2_table()) return t;
  if (const Table* t = neon_table()) return t;
  return &scalar_table();
}

std::atomic<const Table*>& current() noexcept {
  static std::atomic<const Table*> table{best_table()};
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const Table* avx2_table() noexcept {
#if defined(MSTAB_BUILD_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::avx2_impl() : nullptr;
#else
  return nullptr;
#endif
}

const Table* neon_table() noexcept {
#if defined(MSTAB_BUILD_NEON)
  return &detail::neon_impl();
#else
  return nullptr;
#endif
}

const Table* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return &scalar_table();
    case Isa::Avx2: return avx2_table();
    case Isa::Neon: return neon_table();
  }
  return nullptr;
}

std::vector<Isa> available() noexcept {
  std::vector<Isa> out{Isa::Scalar};
  if (avx2_table()) out.push_back(Isa::Avx2);
  if (neon_table()) out.push_back(Isa::Neon);
  return out;
}

const Table& active() noexcept { return *current().load(std::memory_order_acquire); }

bool select(Isa isa) noexcept {
  const Table* t = table_for(isa);
  if (!t) return false;
  current().store(t, std::memory_order_release);
  return true;
}

ScopedIsa::ScopedIsa(Isa isa) noexcept : previous_(&active()), ok_(select(isa)) {}

ScopedIsa::~ScopedIsa() { current().store(previous_, std::memory_order_release); }

}  // namespace mstab::kernels
