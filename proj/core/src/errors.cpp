#include "mpnet/errors.hpp"

#include <cstdio>

namespace mpnet {
namespace {

std::string leak_message(double leak, double budget) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "truncation leak %.3e exceeds budget %.3e", leak, budget);
  return buf;
}

}  // namespace

LeakBudgetExceeded::LeakBudgetExceeded(double leak, double budget)
    : std::runtime_error(leak_message(leak, budget)), leak_(leak), budget_(budget) {}

}  // namespace mpnet
