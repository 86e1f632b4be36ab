#include "lipeval/atomic_file.hpp"

#include <unistd.h>

#include <fstream>

#include "lipeval/error.hpp"

namespace lipeval {

void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(Errc::Io, "cannot write '" + tmp.string() + "'");
      writer(out);
      out.flush();
      if (!out) throw Error(Errc::Io, "write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

}  // namespace lipeval
