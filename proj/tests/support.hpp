#pragma once

#include <array>
#include <cstdio>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "wavepalette/cmf.hpp"

namespace wptest {

inline const wavepalette::CmfTable& table() {
  static const wavepalette::CmfTable t = wavepalette::load_cmf_file(WAVEPALETTE_TEST_CMF);
  return t;
}

// Runs a shell command, capturing stdout. Returns the exit status.
inline int run(const std::string& cmd, std::string& out) {
  out.clear();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

inline std::string cli(const std::string& args) {
  return std::string("'") + WAVEPALETTE_CLI_PATH + "' " + args;
}

}  // namespace wptest
