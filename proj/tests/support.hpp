#pragma once

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "lipeval/error.hpp"
#include "lipeval/synthetic.hpp"

namespace lipeval::testing {

inline Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::Io;
}

inline std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("lipeval-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& body) {
  std::ofstream(p, std::ios::binary) << body;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// train.tsv, test.tsv and transformed.tsv for a planted-marker fixture.
inline synthetic::PlantedFixture write_planted(const std::filesystem::path& dir,
                                              const synthetic::PlantedOptions& options) {
  auto fx = synthetic::make_planted_fixture(options);
  {
    std::ofstream f(dir / "train.tsv", std::ios::binary);
    synthetic::write_corpus_tsv(f, fx.train);
  }
  {
    std::ofstream f(dir / "test.tsv", std::ios::binary);
    synthetic::write_corpus_tsv(f, fx.test);
  }
  {
    std::ofstream f(dir / "transformed.tsv", std::ios::binary);
    synthetic::write_transformed_tsv(f, fx.transformed);
  }
  return fx;
}

}  // namespace lipeval::testing
