#pragma once

#include <atomic>
#include <functional>
#include <limits>
#include <string>
#include <thread>

#include "mentalgen/signal/types.hpp"

namespace mentalgen::ingest {

struct StreamEvent {
  enum class Kind { chunk, end, error };
  Kind kind = Kind::chunk;
  std::size_t index = 0;         // chunk sequence number
  std::size_t start_sample = 0;  // offset of the chunk in the recording
  Matrix data;                   // channels x chunk samples (chunk events only)
  std::string message;           // error events only
};

/// Returns false to reject an event; the stream then stops with an error.
/// Called from a single producer thread.
using StreamSink = std::function<bool(const StreamEvent&)>;

inline constexpr double kBatchSpeed = std::numeric_limits<double>::infinity();

struct ReplayOptions {
  double speed = 1.0;        // > 0; kBatchSpeed delivers without waiting
  double chunk_s = 0.25;
};

/// Samples per chunk for `rec` (at least 1).
std::size_t chunk_samples(double sample_rate, double chunk_s);

/// Runs the replay on the calling thread. Chunk i is delivered at
/// (i + 1) * chunk_s / speed seconds after the start. Returns true when the
/// end event was delivered.
bool replay_blocking(const EegRecording& rec, const ReplayOptions& opts, const StreamSink& sink,
                     std::stop_token stop = {});

/// Background replay. Destruction cancels and joins.
class ReplayStream {
 public:
  ReplayStream(EegRecording rec, ReplayOptions opts, StreamSink sink);
  ReplayStream(const ReplayStream&) = delete;
  ReplayStream& operator=(const ReplayStream&) = delete;
  ~ReplayStream();

  void cancel();
  /// Blocks until the stream finished; true when it ended normally.
  bool wait();

 private:
  std::atomic<bool> ok_{false};
  std::jthread worker_;
};

}  // namespace mentalgen::ingest
