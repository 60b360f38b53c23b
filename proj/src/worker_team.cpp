#include "kg/worker_team.hpp"

#include <stdexcept>

namespace kg {

WorkerTeam::WorkerTeam(int size)
    : size_(size), phase_barrier_(size > 1 ? size : 1) {
  if (size < 1) throw std::invalid_argument("worker team size must be >= 1");
  if (size_ == 1) return;  // size-one teams execute inline
  threads_.reserve(static_cast<size_t>(size_));
  for (int id = 0; id < size_; ++id) {
    threads_.emplace_back([this, id] { worker_loop(id); });
  }
}

WorkerTeam::~WorkerTeam() {
  if (size_ > 1) {
    {
      std::lock_guard lock(mutex_);
      shutting_down_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) t.join();
  }
}

void WorkerTeam::run(const std::function<void(int)>& body) {
  if (size_ == 1) {
    body(0);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    job_ = &body;
    remaining_ = size_;
    first_error_ = nullptr;
    ++generation_;
  }
  start_cv_.notify_all();
  std::unique_lock lock(mutex_);
  done_cv_.wait(lock, [this] { return remaining_ == 0; });
  job_ = nullptr;
  if (first_error_) std::rethrow_exception(first_error_);
}

void WorkerTeam::barrier() {
  if (size_ > 1) phase_barrier_.arrive_and_wait();
}

void WorkerTeam::worker_loop(int id) {
  std::uint64_t seen = 0;
  for (;;) {
    const std::function<void(int)>* job = nullptr;
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock,
                     [&] { return shutting_down_ || generation_ != seen; });
      if (shutting_down_) return;
      seen = generation_;
      job = job_;
    }
    try {
      (*job)(id);
    } catch (...) {
      // Bodies with internal barriers must not throw (the team would
      // deadlock); capture anything else and rethrow on the caller side.
      std::lock_guard lock(mutex_);
      if (!first_error_) first_error_ = std::current_exception();
    }
    {
      std::lock_guard lock(mutex_);
      if (--remaining_ == 0) done_cv_.notify_all();
    }
  }
}

}  // namespace kg
