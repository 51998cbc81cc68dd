#pragma once

#include <cstdint>

// Arithmetic counters for the matrix-free operators. Compiled in only when
// SPCS_COUNT_OPS is defined (the cost test links a separately built copy).
namespace spcs::opcount {

inline thread_local std::uint64_t multiply_adds = 0;

inline void reset() noexcept { multiply_adds = 0; }
inline std::uint64_t value() noexcept { return multiply_adds; }

}  // namespace spcs::opcount

#ifdef SPCS_COUNT_OPS
#define SPCS_COUNT(n) (::spcs::opcount::multiply_adds += static_cast<std::uint64_t>(n))
#else
#define SPCS_COUNT(n) ((void)0)
#endif
