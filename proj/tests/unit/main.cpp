#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "qinterf/harness/runtime.hpp"

int main(int argc, char** argv) {
  qinterf::harness::tune_allocator();
  return doctest::Context(argc, argv).run();
}
