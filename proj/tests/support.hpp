#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "chaintopo/ingest.hpp"
#include "chaintopo/rng.hpp"
#include "chaintopo/tda.hpp"

namespace chaintopo::fixtures {

// The four-transaction worked example: C(1->3) 0.8 BTC, C(2->2) 4.1 and 2 BTC, C(3->1) 4 BTC.
inline std::vector<TransactionRecord> worked_example(Date day = Date::from_ymd(2017, 1, 1)) {
  return {
      {day, "t1", 1, 3, 80'000'000},
      {day, "t2", 2, 2, 410'000'000},
      {day, "t3", 3, 1, 400'000'000},
      {day, "t4", 2, 2, 200'000'000},
  };
}

// Symmetric, zero diagonal; entries drawn from a small set of values so ties occur.
inline DistanceMatrix random_distance_matrix(Rng& rng, std::size_t n, bool coarse) {
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = coarse ? static_cast<double>(rng.between(1, 6)) : 0.01 + rng.uniform() * 5.0;
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  std::vector<ChainletKey> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({static_cast<int>(i) + 1, 1});
  return DistanceMatrix(std::move(nodes), std::move(d));
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("chaintopo_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& child = "") const { return (path_ / child).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace chaintopo::fixtures
