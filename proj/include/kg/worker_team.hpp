#ifndef KG_WORKER_TEAM_HPP
#define KG_WORKER_TEAM_HPP

#include <barrier>
#include <condition_variable>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace kg {

/// Fixed-size team of worker threads executing collective jobs.
///
/// run(body) invokes body(worker_id) on every worker and returns when all have
/// finished. Inside a body, barrier() synchronizes the team; every worker must
/// reach the same sequence of barriers. A team of one executes inline on the
/// calling thread. Teams are not reentrant: one collective at a time.
class WorkerTeam {
 public:
  explicit WorkerTeam(int size);
  ~WorkerTeam();

  WorkerTeam(const WorkerTeam&) = delete;
  WorkerTeam& operator=(const WorkerTeam&) = delete;

  int size() const noexcept { return size_; }

  void run(const std::function<void(int)>& body);

  /// Valid only inside a body passed to run().
  void barrier();

 private:
  void worker_loop(int id);

  int size_;
  std::vector<std::thread> threads_;
  std::barrier<> phase_barrier_;

  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(int)>* job_ = nullptr;
  std::uint64_t generation_ = 0;
  int remaining_ = 0;
  bool shutting_down_ = false;
  std::exception_ptr first_error_;
};

}  // namespace kg

#endif
