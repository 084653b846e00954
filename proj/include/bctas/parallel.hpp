// SPDX-License-Identifier: Apache-2.0
//
// Deterministic trial fan-out: results land in per-trial slots and are
// reduced by the caller in trial order, so worker count never changes the
// numbers.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace bctas::harness {

class CampaignError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Progress sink shared by all workers.
class StatusChannel {
public:
  using Sink = std::function<void(std::string_view label, std::size_t done, std::size_t total)>;

  StatusChannel() = default;
  explicit StatusChannel(Sink sink) : sink_(std::move(sink)) {}

  void begin(std::string label, std::size_t total) {
    std::lock_guard lock(mu_);
    label_ = std::move(label);
    total_ = total;
    done_ = 0;
    failed_ = 0;
    emit_locked();
  }

  void advance(bool failed = false) {
    std::lock_guard lock(mu_);
    ++done_;
    if (failed) ++failed_;
    // Report roughly every 5% to keep the sink quiet.
    const std::size_t step = std::max<std::size_t>(1, total_ / 20);
    if (done_ % step == 0 || done_ == total_) emit_locked();
  }

  std::size_t done() const {
    std::lock_guard lock(mu_);
    return done_;
  }
  std::size_t failed() const {
    std::lock_guard lock(mu_);
    return failed_;
  }

private:
  void emit_locked() {
    if (sink_) sink_(label_, done_, total_);
  }

  mutable std::mutex mu_;
  Sink sink_;
  std::string label_;
  std::size_t total_ = 0;
  std::size_t done_ = 0;
  std::size_t failed_ = 0;
};

struct RunOptions {
  unsigned parallelism = 1;
  StatusChannel* status = nullptr;
};

/// Runs fn(trial) for trial in [0, n). Failed trials come back empty; more
/// than 1% failures raise CampaignError.
template <class R, class Fn>
std::vector<std::optional<R>> run_trials(std::size_t n, const RunOptions& opts, Fn&& fn) {
  std::vector<std::optional<R>> slots(n);
  std::vector<std::string> errors(n);
  const unsigned workers =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(opts.parallelism, n)));
  auto body = [&](unsigned w) {
    for (std::size_t t = w; t < n; t += workers) {
      bool failed = false;
      try {
        slots[t].emplace(fn(t));
      } catch (const std::exception& e) {
        errors[t] = e.what();
        failed = true;
      }
      if (opts.status) opts.status->advance(failed);
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& th : pool) th.join();
  }
  std::size_t failures = 0;
  std::string first;
  for (std::size_t t = 0; t < n; ++t) {
    if (!slots[t]) {
      if (failures++ == 0) first = "trial " + std::to_string(t) + ": " + errors[t];
    }
  }
  if (failures * 100 > n) {
    throw CampaignError(std::to_string(failures) + " of " + std::to_string(n) +
                        " trials failed; first: " + first);
  }
  return slots;
}

}  // namespace bctas::harness
