#include <atomic>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "quasilat/cutproject.hpp"
#include "quasilat/error.hpp"
#include "quasilat/parallel.hpp"
#include "quasilat/spectral.hpp"

using namespace quasilat;

namespace {

struct ThreadScope {
  std::size_t saved = thread_count();
  explicit ThreadScope(std::size_t n) { set_thread_count(n); }
  ~ThreadScope() { set_thread_count(saved); }
};

}  // namespace

TEST_CASE("chunks cover the range exactly once") {
  for (std::size_t threads : {1u, 3u, 8u}) {
    ThreadScope scope(threads);
    for (std::size_t n : {0u, 1u, 7u, 100u}) {
      std::vector<std::atomic<int>> hits(n);
      std::atomic<std::size_t> chunks{0};
      parallel_chunks(n, [&](std::size_t, std::size_t b, std::size_t e) {
        ++chunks;
        for (std::size_t i = b; i < e; ++i) ++hits[i];
      });
      for (auto& h : hits) CHECK(h.load() == 1);
      CHECK(chunks.load() == chunk_count(n));
      CHECK(chunk_count(n) <= std::max<std::size_t>(threads, 1));
    }
  }
}

TEST_CASE("worker exceptions reach the caller") {
  ThreadScope scope(4);
  CHECK_THROWS_AS(parallel_chunks(16,
                                  [](std::size_t c, std::size_t, std::size_t) {
                                    if (c == 2) throw Error(ErrorKind::kInvalidArgument, "boom");
                                  }),
                  Error);
}

TEST_CASE("parallel and serial results agree") {
  const PointPatch L = heisenberg_integer_lattice(10.0, 100.0);
  const Character xi{{0.3}};
  double serial = 0.0, threaded = 0.0;
  {
    ThreadScope scope(1);
    serial = palm_coefficient(L, xi, 10.0, 100.0);
  }
  {
    ThreadScope scope(4);
    threaded = palm_coefficient(L, xi, 10.0, 100.0);
  }
  CHECK(std::abs(serial - threaded) <= 1e-10);
}
