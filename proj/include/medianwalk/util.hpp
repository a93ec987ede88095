#pragma once

// Small shared helpers: word-packed bit rows, deterministic random streams,
// content digests.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace mw {

inline std::size_t bit_words(std::size_t bits) { return (bits + 63) / 64; }

inline bool test_bit(std::span<const std::uint64_t> row, std::size_t i) {
  return (row[i >> 6] >> (i & 63)) & 1u;
}
inline void set_bit(std::span<std::uint64_t> row, std::size_t i) {
  row[i >> 6] |= std::uint64_t{1} << (i & 63);
}

// Dense rows x cols bit matrix.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_(bit_words(cols)), data_(rows * words_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words() const { return words_; }

  std::span<std::uint64_t> row(std::size_t r) { return {data_.data() + r * words_, words_}; }
  std::span<const std::uint64_t> row(std::size_t r) const {
    return {data_.data() + r * words_, words_};
  }
  bool get(std::size_t r, std::size_t c) const { return test_bit(row(r), c); }
  void set(std::size_t r, std::size_t c) { set_bit(row(r), c); }

 private:
  std::size_t rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<std::uint64_t> data_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// All randomness goes through mt19937_64; per-trial substreams are seeded by
// master ^ splitmix64(stream). The draws below avoid the implementation-defined
// std distributions so that sequences are identical across standard libraries.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64/splitmix64-substreams";

inline Rng substream(std::uint64_t master, std::uint64_t stream) {
  return Rng(master ^ splitmix64(stream));
}

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n), n > 0, by rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Splits [0, count) into contiguous blocks, one per worker, and runs
// fn(begin, end, worker) on each. Callers fold per-worker results in worker
// order, so output does not depend on scheduling.
template <class Fn>
void parallel_blocks(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t step = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = std::min(count, w * step), e = std::min(count, b + step);
    pool.emplace_back([&fn, b, e, w] { fn(b, e, w); });
  }
  for (auto& t : pool) t.join();
}

inline std::size_t default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

// Formats with 12 significant digits ("%.12g"); used by every emitter.
std::string format_real(double x);
// Rounds to the value that format_real prints.
double round12(double x);

}  // namespace mw
