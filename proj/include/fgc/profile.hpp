#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

namespace fgc::cli {

// Resident set size of this process in KiB (VmRSS from /proc/self/status).
long current_rss_kb();

// Samples VmRSS every 50 ms on a background thread until stopped.
class RssSampler {
 public:
  RssSampler();
  ~RssSampler();
  RssSampler(const RssSampler&) = delete;
  RssSampler& operator=(const RssSampler&) = delete;

  long stop();  // joins and returns the peak sample in KiB
  long peak_kb() const { return peak_kb_.load(); }

 private:
  std::atomic<bool> done_{false};
  std::atomic<long> peak_kb_{0};
  std::thread worker_;
};

struct ProfileRow {
  std::size_t n = 0;
  std::string mode;     // construction | cluster
  std::string variant;  // dense | memmap | pam_naive | pam_fast | clara
  double wall_seconds = 0.0;
  double peak_rss_mb = 0.0;  // peak RSS growth over the phase baseline
  std::uint64_t bytes = 0;   // matrix storage footprint
  std::string note;          // e.g. skipped rows
};

struct ProfileConfig {
  std::vector<std::size_t> sizes;  // ascending sample counts
  bool construction = true;
  bool cluster = true;
  int k = 8;
  std::size_t trees = 50;  // synthetic leaf matrix width
  std::size_t ram_budget_bytes = 64ull * 1024 * 1024;
  std::uint64_t seed = 0;
  std::string scratch_dir = ".";  // where on-disk matrices are staged
};

// Synthetic-leaf-matrix timing/memory harness: distance construction for
// both backends and the k-medoids variants on the dense matrix. On-disk
// rows that would not fit in the free disk space are skipped with a note.
std::vector<ProfileRow> run_profile(const ProfileConfig& config, int threads);

inline constexpr const char* kProfileCsvHeader =
    "n,mode,variant,wall_seconds,peak_rss_mb,bytes,note";
std::string profile_to_csv(const std::vector<ProfileRow>& rows);

}  // namespace fgc::cli
