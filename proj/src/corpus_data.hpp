#pragma once

#include <vector>

namespace gat::embedded {

struct TheoryFile {
  const char* id;
  const char* text;
};

struct GoldenFile {
  const char* dir;
  const char* expected;
  const char* rename;
};

extern const std::vector<TheoryFile> theories;
extern const std::vector<GoldenFile> goldens;

}  // namespace gat::embedded
