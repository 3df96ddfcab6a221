#include "envpde/csv.hpp"

#include <cstdio>

#include "envpde/errors.hpp"

namespace envpde {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: keep '\n' endings
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

}  // namespace envpde
