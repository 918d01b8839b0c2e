#ifndef SCRIPTFORGE_PARALLEL_H_
#define SCRIPTFORGE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace scriptforge {

// Process-wide cap on worker threads (the CLI's --jobs). Zero restores the
// default of std::thread::hardware_concurrency().
void SetMaxJobs(unsigned jobs);
unsigned MaxJobs();

// Runs body(i) for i in [0, count). Tasks must write only to their own slot;
// any exception is rethrown on the calling thread after all workers stop.
void ParallelFor(std::size_t count,
                 const std::function<void(std::size_t)>& body);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_PARALLEL_H_
