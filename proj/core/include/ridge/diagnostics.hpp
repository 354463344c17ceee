#pragma once

#include <mutex>
#include <string>
#include <vector>

namespace ridge {

struct Warning {
  std::string code;
  std::string message;
};

// Collects structured warnings raised by numerical routines that can still
// return a usable result. Safe to share between worker threads.
class Diagnostics {
 public:
  void warn(std::string code, std::string message) {
    std::lock_guard lock(mutex_);
    warnings_.push_back({std::move(code), std::move(message)});
  }

  std::vector<Warning> warnings() const {
    std::lock_guard lock(mutex_);
    return warnings_;
  }

  bool has(const std::string& code) const {
    std::lock_guard lock(mutex_);
    for (const auto& w : warnings_) {
      if (w.code == code) return true;
    }
    return false;
  }

 private:
  mutable std::mutex mutex_;
  std::vector<Warning> warnings_;
};

inline void warn(Diagnostics* sink, std::string code, std::string message) {
  if (sink != nullptr) sink->warn(std::move(code), std::move(message));
}

}  // namespace ridge
