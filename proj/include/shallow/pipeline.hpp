#pragma once

// Batch scoring over a stream of pairs with a bounded worker pool. Results
// reach the sinks in input order; at most `window()` pairs are held at once.

#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "shallow/manifest.hpp"
#include "shallow/score.hpp"

namespace shallow {

enum class FailurePolicy { kSkip, kAbort };

inline FailurePolicy parse_failure_policy(std::string_view s) {
  if (s == "skip") return FailurePolicy::kSkip;
  if (s == "abort") return FailurePolicy::kAbort;
  throw ConfigError("unknown failure policy '" + std::string(s) + "' (expected skip or abort)");
}

inline std::string_view failure_policy_name(FailurePolicy p) {
  return p == FailurePolicy::kSkip ? "skip" : "abort";
}

struct PipelineOptions {
  ScoringOptions scoring;
  std::size_t parallelism = 1;
  FailurePolicy on_error = FailurePolicy::kAbort;

  std::size_t window() const { return 2 * std::max<std::size_t>(parallelism, 1); }
};

struct PipelineStats {
  std::size_t scored = 0;
  std::size_t failed = 0;
  std::size_t max_in_flight = 0;
};

using PairSource = std::function<std::optional<TranscriptPair>()>;
using RecordSink = std::function<void(const ScoreRecord&)>;
using FailureSink = std::function<void(const FailureRecord&)>;

// Raised under the abort policy. Records before the failing pair have
// already been delivered.
struct PipelineAborted : Error {
  PipelineAborted(FailureRecord f)
      : Error("scoring aborted at pair '" + f.id + "': " + f.message), failure(std::move(f)) {}
  FailureRecord failure;
};

namespace detail {

struct Slot {
  TranscriptPair pair;
  std::optional<ScoreRecord> record;
  std::optional<FailureRecord> failure;
  bool done = false;
};

inline FailureRecord failure_from(const TranscriptPair& p, const std::exception& e) {
  if (const auto* be = dynamic_cast<const BackendError*>(&e))
    return {p.id, std::string(backend_error_kind_name(be->kind)), be->what()};
  return {p.id, "error", e.what()};
}

}  // namespace detail

inline PipelineStats score_stream(const PairSource& source, const Backend& backend,
                                  const PipelineOptions& opt, const RecordSink& on_record,
                                  const FailureSink& on_failure = {}) {
  require_capabilities(backend.descriptor(), opt.scoring.metrics.required_capabilities());

  std::mutex mu;
  std::condition_variable work_cv, done_cv;
  std::deque<std::shared_ptr<detail::Slot>> jobs;
  bool stop = false;

  auto worker = [&] {
    for (;;) {
      std::shared_ptr<detail::Slot> slot;
      {
        std::unique_lock lock(mu);
        work_cv.wait(lock, [&] { return stop || !jobs.empty(); });
        if (jobs.empty()) return;
        slot = std::move(jobs.front());
        jobs.pop_front();
      }
      std::optional<ScoreRecord> rec;
      std::optional<FailureRecord> fail;
      try {
        rec = score_pair(slot->pair, backend, opt.scoring);
      } catch (const std::exception& e) {
        fail = detail::failure_from(slot->pair, e);
      }
      {
        std::lock_guard lock(mu);
        slot->record = std::move(rec);
        slot->failure = std::move(fail);
        slot->done = true;
      }
      done_cv.notify_all();
    }
  };

  const std::size_t n_workers = std::max<std::size_t>(opt.parallelism, 1);
  std::vector<std::jthread> pool;
  pool.reserve(n_workers);
  for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  auto shutdown = [&] {
    {
      std::lock_guard lock(mu);
      stop = true;
      jobs.clear();
    }
    work_cv.notify_all();
    pool.clear();
  };

  PipelineStats stats;
  std::deque<std::shared_ptr<detail::Slot>> window;
  bool exhausted = false;
  try {
    while (!exhausted || !window.empty()) {
      while (!exhausted && window.size() < opt.window()) {
        std::optional<TranscriptPair> p = source();
        if (!p) {
          exhausted = true;
          break;
        }
        auto slot = std::make_shared<detail::Slot>();
        slot->pair = std::move(*p);
        window.push_back(slot);
        {
          std::lock_guard lock(mu);
          jobs.push_back(std::move(slot));
        }
        work_cv.notify_one();
        stats.max_in_flight = std::max(stats.max_in_flight, window.size());
      }
      if (window.empty()) break;

      std::shared_ptr<detail::Slot> head = window.front();
      {
        std::unique_lock lock(mu);
        done_cv.wait(lock, [&] { return head->done; });
      }
      window.pop_front();
      if (head->record) {
        ++stats.scored;
        on_record(*head->record);
      } else {
        ++stats.failed;
        if (opt.on_error == FailurePolicy::kAbort) throw PipelineAborted(*head->failure);
        if (on_failure) on_failure(*head->failure);
      }
    }
  } catch (...) {
    shutdown();
    throw;
  }
  shutdown();
  return stats;
}

struct ScoreAllResult {
  std::vector<ScoreRecord> records;
  std::vector<FailureRecord> failures;
  PipelineStats stats;
};

inline ScoreAllResult score_all(const std::vector<TranscriptPair>& pairs, const Backend& backend,
                                const PipelineOptions& opt = {}) {
  ScoreAllResult out;
  std::size_t i = 0;
  out.stats = score_stream(
      [&]() -> std::optional<TranscriptPair> {
        if (i == pairs.size()) return std::nullopt;
        return pairs[i++];
      },
      backend, opt, [&](const ScoreRecord& r) { out.records.push_back(r); },
      [&](const FailureRecord& f) { out.failures.push_back(f); });
  return out;
}

inline ScoreAllResult score_all(const Manifest& m, const Backend& backend,
                                const PipelineOptions& opt = {}) {
  return score_all(m.pairs, backend, opt);
}

}  // namespace shallow
