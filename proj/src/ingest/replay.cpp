#include "mentalgen/ingest/replay.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>

namespace mentalgen::ingest {

std::size_t chunk_samples(double sample_rate, double chunk_s) {
  if (!(chunk_s > 0) || !std::isfinite(chunk_s)) throw InvalidArgument("chunk length must be positive");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_rate * chunk_s)));
}

namespace {

void validate_speed(double speed) {
  if (std::isnan(speed) || !(speed > 0)) throw InvalidArgument("replay speed must be > 0");
}

// Sleeps until `deadline` or until stop is requested. Returns false on stop.
bool sleep_until(std::chrono::steady_clock::time_point deadline, std::stop_token stop) {
  std::mutex m;
  std::condition_variable_any cv;
  std::unique_lock lock(m);
  cv.wait_until(lock, stop, deadline, [] { return false; });
  return !stop.stop_requested();
}

}  // namespace

bool replay_blocking(const EegRecording& rec, const ReplayOptions& opts, const StreamSink& sink,
                     std::stop_token stop) {
  validate_speed(opts.speed);
  rec.validate();
  const std::size_t step = chunk_samples(rec.sample_rate, opts.chunk_s);
  const std::size_t n = rec.samples();
  const auto start = std::chrono::steady_clock::now();
  const double period_s = static_cast<double>(step) / rec.sample_rate / opts.speed;

  auto fail = [&](std::string why) {
    StreamEvent ev;
    ev.kind = StreamEvent::Kind::error;
    ev.message = std::move(why);
    sink(ev);
    return false;
  };

  std::size_t index = 0;
  for (std::size_t off = 0; off < n; off += step, ++index) {
    if (std::isfinite(opts.speed)) {
      const auto due = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                   std::chrono::duration<double>(period_s * static_cast<double>(index + 1)));
      if (!sleep_until(due, stop)) return fail("cancelled");
    } else if (stop.stop_requested()) {
      return fail("cancelled");
    }
    const std::size_t len = std::min(step, n - off);
    StreamEvent ev;
    ev.index = index;
    ev.start_sample = off;
    ev.data = Matrix(rec.channels(), len);
    for (std::size_t ch = 0; ch < rec.channels(); ++ch)
      for (std::size_t i = 0; i < len; ++i) ev.data(ch, i) = rec.data(ch, off + i);
    if (!sink(ev)) return fail("sink rejected chunk " + std::to_string(index));
  }
  StreamEvent end;
  end.kind = StreamEvent::Kind::end;
  end.index = index;
  end.start_sample = n;
  return sink(end);
}

ReplayStream::ReplayStream(EegRecording rec, ReplayOptions opts, StreamSink sink) {
  validate_speed(opts.speed);
  rec.validate();
  worker_ = std::jthread([this, rec = std::move(rec), opts, sink = std::move(sink)](std::stop_token st) {
    ok_ = replay_blocking(rec, opts, sink, st);
  });
}

ReplayStream::~ReplayStream() { cancel(); }

void ReplayStream::cancel() {
  if (worker_.joinable()) {
    worker_.request_stop();
    worker_.join();
  }
}

bool ReplayStream::wait() {
  if (worker_.joinable()) worker_.join();
  return ok_;
}

}  // namespace mentalgen::ingest
