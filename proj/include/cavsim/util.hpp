#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace cavsim {

// Runs fn(i) for i in [0, n).  Work is split into contiguous blocks, one per
// worker; outputs must go to disjoint slots so the result is independent of
// the thread count.  threads == 0 picks CAVSIM/SIM_THREADS env or hardware
// concurrency; threads == 1 runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

int resolve_thread_count(int requested);

// FNV-1a, used to stamp outputs with the config they came from.
std::uint64_t fnv1a(const std::string& text);
std::string hash_hex(std::uint64_t h);

// Fixed 17-significant-digit scientific notation (bit-stable CSV floats).
std::string format_sci(double x);

inline constexpr const char* artifact_version = "0.1.0";

}  // namespace cavsim
