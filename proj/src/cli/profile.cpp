#include "fgc/profile.hpp"

#include <sys/statvfs.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "config_util.hpp"
#include "fgc/csv.hpp"
#include "fgc/distance_matrix.hpp"
#include "fgc/errors.hpp"
#include "fgc/kmedoids.hpp"
#include "fgc/leaf_matrix.hpp"
#include "fgc/rand.hpp"

namespace fgc::cli {

long current_rss_kb() {
  std::FILE* f = std::fopen("/proc/self/status", "r");
  if (f == nullptr) return 0;
  char line[256];
  long kb = 0;
  while (std::fgets(line, sizeof(line), f) != nullptr) {
    if (std::strncmp(line, "VmRSS:", 6) == 0) {
      kb = std::atol(line + 6);
      break;
    }
  }
  std::fclose(f);
  return kb;
}

RssSampler::RssSampler() {
  worker_ = std::thread([this] {
    while (!done_.load()) {
      long now = current_rss_kb();
      long prev = peak_kb_.load();
      while (now > prev && !peak_kb_.compare_exchange_weak(prev, now)) {
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });
}

RssSampler::~RssSampler() {
  done_.store(true);
  if (worker_.joinable()) worker_.join();
}

long RssSampler::stop() {
  done_.store(true);
  if (worker_.joinable()) worker_.join();
  // One closing sample so phases shorter than the cadence still register.
  long now = current_rss_kb();
  long prev = peak_kb_.load();
  while (now > prev && !peak_kb_.compare_exchange_weak(prev, now)) {
  }
  return peak_kb_.load();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rss_growth_mb(long baseline_kb, long peak_kb) {
  long delta = peak_kb - baseline_kb;
  if (delta < 0) delta = 0;
  return static_cast<double>(delta) / 1024.0;
}

LeafMatrix synthetic_leaves(std::size_t n, std::size_t trees, std::uint64_t seed) {
  LeafMatrix leaf;
  leaf.n = n;
  leaf.n_trees = trees;
  leaf.leaf_ids.resize(n * trees);
  Rng rng(seed);
  std::uint64_t leaves_per_tree = std::max<std::uint64_t>(2, n / 8);
  for (std::int32_t& id : leaf.leaf_ids) {
    id = static_cast<std::int32_t>(rng.next_below(leaves_per_tree));
  }
  return leaf;
}

std::uint64_t free_disk_bytes(const std::string& dir) {
  struct statvfs fs{};
  std::string probe = dir.empty() ? "." : dir;
  if (statvfs(probe.c_str(), &fs) != 0) return 0;
  return static_cast<std::uint64_t>(fs.f_bavail) * fs.f_frsize;
}

template <typename Fn>
ProfileRow measure(std::size_t n, const char* mode, const char* variant,
                   std::uint64_t bytes, Fn&& fn) {
  ProfileRow row;
  row.n = n;
  row.mode = mode;
  row.variant = variant;
  row.bytes = bytes;
  long baseline = current_rss_kb();
  RssSampler sampler;
  auto start = Clock::now();
  fn();
  row.wall_seconds = seconds_since(start);
  row.peak_rss_mb = rss_growth_mb(baseline, sampler.stop());
  return row;
}

}  // namespace

std::vector<ProfileRow> run_profile(const ProfileConfig& config, int threads) {
  if (threads < 1) throw ValidationError("--threads must be at least 1");
  if (config.sizes.empty()) throw ValidationError("profile needs at least one size");
  for (std::size_t i = 1; i < config.sizes.size(); i++) {
    if (config.sizes[i] <= config.sizes[i - 1]) {
      throw ValidationError("profile sizes must be strictly ascending");
    }
  }
  if (config.k < 2) throw ValidationError("profile k must be at least 2");
  if (config.trees == 0) throw ValidationError("profile needs at least one tree");
  const unsigned th = static_cast<unsigned>(threads);

  std::vector<ProfileRow> rows;
  for (std::size_t n : config.sizes) {
    if (static_cast<std::size_t>(config.k) >= n) {
      throw ValidationError("profile k must be smaller than every size");
    }
    LeafMatrix leaf =
        synthetic_leaves(n, config.trees, derive_seed(config.seed, "profile.leaves", n));
    const std::uint64_t dense_bytes = static_cast<std::uint64_t>(n) * n * sizeof(float);

    if (config.construction) {
      rows.push_back(measure(n, "construction", "dense", dense_bytes, [&] {
        DistanceMatrix dm = DistanceMatrix::dense_from_leaves(leaf, th);
        (void)dm;
      }));

      const std::uint64_t file_bytes = dense_bytes + DistanceMatrix::kHeaderBytes;
      const std::uint64_t slack = 64ull << 20;
      if (free_disk_bytes(config.scratch_dir) < file_bytes + slack) {
        ProfileRow skipped;
        skipped.n = n;
        skipped.mode = "construction";
        skipped.variant = "memmap";
        skipped.bytes = file_bytes;
        skipped.note = "skipped: needs " + std::to_string(file_bytes >> 20) +
                       " MiB of free disk";
        rows.push_back(std::move(skipped));
      } else {
        std::string path = join_path(config.scratch_dir,
                                     "profile_distances_" + std::to_string(n) + ".bin");
        rows.push_back(measure(n, "construction", "memmap", file_bytes, [&] {
          DistanceMatrix dm =
              DistanceMatrix::memmap_from_leaves(leaf, path, th, config.ram_budget_bytes);
          (void)dm;
        }));
        std::error_code ec;
        std::filesystem::remove(path, ec);
      }
    }

    if (config.cluster) {
      DistanceMatrix dm = DistanceMatrix::dense_from_leaves(leaf, th);
      for (auto variant : {KMedoidsConfig::Variant::pam_naive, KMedoidsConfig::Variant::pam_fast}) {
        KMedoidsConfig kc;
        kc.k = config.k;
        kc.variant = variant;
        const char* name =
            variant == KMedoidsConfig::Variant::pam_naive ? "pam_naive" : "pam_fast";
        rows.push_back(measure(n, "cluster", name, dense_bytes, [&] {
          ClusteringResult res = pam(dm, kc);
          (void)res;
        }));
      }
      ClaraConfig cc;
      cc.inner.k = config.k;
      cc.seed = derive_seed(config.seed, "profile.clara", n);
      std::size_t sub = std::min<std::size_t>(
          n, 40 + 2 * static_cast<std::size_t>(config.k) * static_cast<std::size_t>(config.k));
      rows.push_back(measure(n, "cluster", "clara", static_cast<std::uint64_t>(sub) * sub * 4, [&] {
        ClusteringResult res = clara(leaf, cc);
        (void)res;
      }));
    }
  }
  return rows;
}

std::string profile_to_csv(const std::vector<ProfileRow>& rows) {
  std::string out = kProfileCsvHeader;
  out += '\n';
  for (const ProfileRow& row : rows) {
    out += std::to_string(row.n);
    out += ',';
    out += row.mode;
    out += ',';
    out += row.variant;
    out += ',';
    out += format_double(row.wall_seconds);
    out += ',';
    out += format_double(row.peak_rss_mb);
    out += ',';
    out += std::to_string(row.bytes);
    out += ',';
    out += row.note;
    out += '\n';
  }
  return out;
}

}  // namespace fgc::cli
