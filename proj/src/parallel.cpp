#include "genhilbert/parallel.hpp"

namespace genhilbert {

namespace {
std::atomic<int> g_default_jobs{1};
}

void set_default_jobs(int jobs) { g_default_jobs = std::max(1, jobs); }

int default_jobs() { return g_default_jobs; }

}  // namespace genhilbert
