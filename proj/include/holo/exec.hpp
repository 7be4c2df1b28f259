#pragma once

#include <cstddef>

namespace holo {

inline constexpr std::size_t kDefaultChunk = 1024;

// How a kernel is executed. Results depend on `chunk` but never on `threads`.
struct ExecPolicy {
  int threads = 1;
  std::size_t chunk = kDefaultChunk;
};

// Half-open interval [begin, end) over pupil storage (permuted) order.
struct PixelRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
};

}  // namespace holo
