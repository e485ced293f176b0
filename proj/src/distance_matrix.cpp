#include "fgc/distance_matrix.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <thread>

#include "fgc/hash.hpp"
#include "fgc/kernels.hpp"

namespace fgc {

namespace {

constexpr char kMagic[4] = {'F', 'G', 'D', 'M'};

void check_index(std::size_t i, std::size_t n, const char* what) {
  if (i >= n) {
    throw ValidationError(std::string(what) + " index " + std::to_string(i) +
                          " out of range (n=" + std::to_string(n) + ")");
  }
}

float entry(const LeafMatrix& leaf, const KernelOps& ops, std::size_t i, std::size_t j) {
  std::size_t m = ops.match_count_i32(leaf.row(i), leaf.row(j), leaf.n_trees);
  return 1.0f - static_cast<float>(m) / static_cast<float>(leaf.n_trees);
}

// Fill rows [i0, i1) into `out` (row (i - i0) of the buffer). Rows are split
// across workers; every entry is written once, so output is thread-agnostic.
void compute_rows(const LeafMatrix& leaf, std::size_t i0, std::size_t i1, float* out,
                  unsigned threads) {
  const KernelOps& ops = kernels();
  auto fill = [&](std::size_t a, std::size_t b) {
    for (std::size_t i = a; i < b; ++i) {
      float* row_out = out + (i - i0) * leaf.n;
      for (std::size_t j = 0; j < leaf.n; ++j) row_out[j] = entry(leaf, ops, i, j);
    }
  };
  std::size_t rows = i1 - i0;
  if (threads <= 1 || rows < 2) {
    fill(i0, i1);
    return;
  }
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, rows));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (rows + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t a = i0 + static_cast<std::size_t>(w) * chunk;
    std::size_t b = std::min(i1, a + chunk);
    if (a >= b) break;
    pool.emplace_back(fill, a, b);
  }
  for (auto& t : pool) t.join();
}

void write_all(int fd, const void* data, std::size_t size, const std::string& path) {
  const char* p = static_cast<const char*>(data);
  while (size > 0) {
    ssize_t written = ::write(fd, p, size);
    if (written < 0) {
      if (errno == EINTR) continue;
      throw IoError("write to '" + path + "' failed: " + std::strerror(errno));
    }
    p += written;
    size -= static_cast<std::size_t>(written);
  }
}

void encode_header(char out[DistanceMatrix::kHeaderBytes], std::uint64_t n) {
  std::memcpy(out, kMagic, 4);
  std::uint32_t version = DistanceMatrix::kFormatVersion;
  std::memcpy(out + 4, &version, 4);
  std::memcpy(out + 8, &n, 8);
}

// Closes the fd and removes the file unless disarmed; keeps construction
// failures from leaving partial matrices behind.
struct FileGuard {
  int fd = -1;
  std::string path;
  bool armed = true;
  ~FileGuard() {
    if (!armed) return;
    if (fd >= 0) ::close(fd);
    if (!path.empty()) ::unlink(path.c_str());
  }
};

}  // namespace

double proximity(const LeafMatrix& leaf, std::size_t i, std::size_t j) {
  leaf.validate();
  check_index(i, leaf.n, "sample");
  check_index(j, leaf.n, "sample");
  std::size_t m = kernels().match_count_i32(leaf.row(i), leaf.row(j), leaf.n_trees);
  return static_cast<double>(m) / static_cast<double>(leaf.n_trees);
}

DistanceMatrix::DistanceMatrix(DistanceMatrix&& other) noexcept { *this = std::move(other); }

DistanceMatrix& DistanceMatrix::operator=(DistanceMatrix&& other) noexcept {
  if (this == &other) return *this;
  reset();
  backend_ = other.backend_;
  n_ = other.n_;
  dense_ = std::move(other.dense_);
  data_ = other.data_;
  path_ = std::move(other.path_);
  fd_ = other.fd_;
  map_ = other.map_;
  map_size_ = other.map_size_;
  if (backend_ == Backend::dense) data_ = dense_.data();
  other.fd_ = -1;
  other.map_ = nullptr;
  other.map_size_ = 0;
  other.data_ = nullptr;
  other.n_ = 0;
  return *this;
}

DistanceMatrix::~DistanceMatrix() { reset(); }

void DistanceMatrix::reset() noexcept {
  if (map_ != nullptr) ::munmap(map_, map_size_);
  if (fd_ >= 0) ::close(fd_);
  map_ = nullptr;
  map_size_ = 0;
  fd_ = -1;
  data_ = nullptr;
  dense_.clear();
  n_ = 0;
}

float DistanceMatrix::at(std::size_t i, std::size_t j) const {
  check_index(i, n_, "row");
  check_index(j, n_, "column");
  return data_[i * n_ + j];
}

DistanceMatrix DistanceMatrix::dense_from_leaves(const LeafMatrix& leaf, unsigned threads) {
  leaf.validate();
  if (leaf.n < 2) throw ValidationError("distance matrix needs at least 2 samples");
  DistanceMatrix m;
  m.backend_ = Backend::dense;
  m.n_ = leaf.n;
  m.dense_.resize(leaf.n * leaf.n);
  compute_rows(leaf, 0, leaf.n, m.dense_.data(), threads);
  m.data_ = m.dense_.data();
  return m;
}

DistanceMatrix DistanceMatrix::from_values(std::size_t n, std::vector<float> values) {
  if (n < 2) throw ValidationError("distance matrix needs at least 2 samples");
  if (values.size() != n * n) {
    throw ValidationError("distance matrix values must have n*n entries");
  }
  DistanceMatrix m;
  m.backend_ = Backend::dense;
  m.n_ = n;
  m.dense_ = std::move(values);
  m.data_ = m.dense_.data();
  return m;
}

DistanceMatrix DistanceMatrix::memmap_from_leaves(const LeafMatrix& leaf,
                                                  const std::string& path,
                                                  unsigned threads,
                                                  std::size_t ram_budget_bytes) {
  leaf.validate();
  if (leaf.n < 2) throw ValidationError("distance matrix needs at least 2 samples");
  if (path.empty()) throw ValidationError("memmap backend requires a file path");

  FileGuard guard;
  guard.fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_TRUNC, 0644);
  if (guard.fd < 0) {
    guard.path.clear();  // nothing was created by us
    throw IoError("cannot create '" + path + "': " + std::strerror(errno));
  }
  guard.path = path;
  if (::flock(guard.fd, LOCK_EX | LOCK_NB) != 0) {
    guard.path.clear();  // another process owns it; leave the file alone
    throw IoError("'" + path + "' is locked by another process");
  }

  char header[kHeaderBytes];
  encode_header(header, leaf.n);
  write_all(guard.fd, header, kHeaderBytes, path);

  std::size_t row_bytes = leaf.n * sizeof(float);
  std::size_t rows_per_block = std::max<std::size_t>(1, ram_budget_bytes / row_bytes);
  std::vector<float> block(std::min(rows_per_block, leaf.n) * leaf.n);
  for (std::size_t i0 = 0; i0 < leaf.n; i0 += rows_per_block) {
    std::size_t i1 = std::min(leaf.n, i0 + rows_per_block);
    compute_rows(leaf, i0, i1, block.data(), threads);
    write_all(guard.fd, block.data(), (i1 - i0) * row_bytes, path);
  }
  block.clear();
  block.shrink_to_fit();
  if (::fsync(guard.fd) != 0) {
    throw IoError("fsync of '" + path + "' failed: " + std::strerror(errno));
  }

  std::size_t total = kHeaderBytes + leaf.n * leaf.n * sizeof(float);
  void* map = ::mmap(nullptr, total, PROT_READ, MAP_SHARED, guard.fd, 0);
  if (map == MAP_FAILED) {
    throw IoError("mmap of '" + path + "' failed: " + std::strerror(errno));
  }
  // Keep only a shared (reader) lock for the lifetime of the mapping.
  ::flock(guard.fd, LOCK_SH);

  DistanceMatrix m;
  m.backend_ = Backend::memmap;
  m.n_ = leaf.n;
  m.path_ = path;
  m.fd_ = guard.fd;
  m.map_ = map;
  m.map_size_ = total;
  m.data_ = reinterpret_cast<const float*>(static_cast<const char*>(map) + kHeaderBytes);
  guard.armed = false;
  return m;
}

DistanceMatrix DistanceMatrix::open(const std::string& path) {
  int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  FileGuard guard;
  guard.fd = fd;
  guard.path.clear();  // never unlink a file we did not create
  if (::flock(fd, LOCK_SH | LOCK_NB) != 0) {
    throw IoError("'" + path + "' is locked for writing by another process");
  }

  struct stat st {};
  if (::fstat(fd, &st) != 0) {
    throw IoError("stat of '" + path + "' failed: " + std::strerror(errno));
  }
  if (st.st_size < static_cast<off_t>(kHeaderBytes)) {
    throw ValidationError("'" + path + "' is too small to be a distance matrix");
  }
  char header[kHeaderBytes];
  ssize_t got = ::pread(fd, header, kHeaderBytes, 0);
  if (got != static_cast<ssize_t>(kHeaderBytes)) {
    throw IoError("cannot read header of '" + path + "'");
  }
  if (std::memcmp(header, kMagic, 4) != 0) {
    throw ValidationError("'" + path + "' is not a distance matrix file (bad magic)");
  }
  std::uint32_t version = 0;
  std::uint64_t n = 0;
  std::memcpy(&version, header + 4, 4);
  std::memcpy(&n, header + 8, 8);
  if (version != kFormatVersion) {
    throw ValidationError("'" + path + "' has unsupported format version " +
                          std::to_string(version));
  }
  std::uint64_t expected = kHeaderBytes + n * n * sizeof(float);
  if (static_cast<std::uint64_t>(st.st_size) != expected) {
    throw ValidationError("'" + path + "' size " + std::to_string(st.st_size) +
                          " does not match header (expected " + std::to_string(expected) +
                          " bytes for n=" + std::to_string(n) + ")");
  }

  void* map = ::mmap(nullptr, expected, PROT_READ, MAP_SHARED, fd, 0);
  if (map == MAP_FAILED) {
    throw IoError("mmap of '" + path + "' failed: " + std::strerror(errno));
  }

  DistanceMatrix m;
  m.backend_ = Backend::memmap;
  m.n_ = static_cast<std::size_t>(n);
  m.path_ = path;
  m.fd_ = fd;
  m.map_ = map;
  m.map_size_ = static_cast<std::size_t>(expected);
  m.data_ = reinterpret_cast<const float*>(static_cast<const char*>(map) + kHeaderBytes);
  guard.armed = false;
  return m;
}

DistanceMatrix DistanceMatrix::submatrix(const std::vector<std::size_t>& indices) const {
  for (std::size_t idx : indices) check_index(idx, n_, "submatrix");
  std::size_t m = indices.size();
  if (m < 2) throw ValidationError("submatrix needs at least 2 samples");
  std::vector<float> values(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    const float* src = row(indices[a]);
    for (std::size_t b = 0; b < m; ++b) values[a * m + b] = src[indices[b]];
  }
  return from_values(m, std::move(values));
}

std::vector<float> distance_to_points(const LeafMatrix& leaf,
                                      const std::vector<std::size_t>& targets) {
  leaf.validate();
  if (targets.empty()) throw ValidationError("distance_to_points needs at least one target");
  for (std::size_t t : targets) check_index(t, leaf.n, "target");
  const KernelOps& ops = kernels();
  std::vector<float> out(leaf.n * targets.size());
  for (std::size_t i = 0; i < leaf.n; ++i) {
    float* row_out = out.data() + i * targets.size();
    for (std::size_t t = 0; t < targets.size(); ++t) {
      row_out[t] = entry(leaf, ops, i, targets[t]);
    }
  }
  return out;
}

MatrixFileInfo inspect_matrix_file(const std::string& path) {
  int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  FileGuard guard;
  guard.fd = fd;
  guard.path.clear();

  struct stat st {};
  if (::fstat(fd, &st) != 0) {
    throw IoError("stat of '" + path + "' failed: " + std::strerror(errno));
  }
  MatrixFileInfo info;
  info.file_size = static_cast<std::uint64_t>(st.st_size);

  char header[DistanceMatrix::kHeaderBytes] = {};
  ssize_t got = ::pread(fd, header, sizeof(header), 0);
  if (got >= 4) info.magic_ok = std::memcmp(header, kMagic, 4) == 0;
  if (got == static_cast<ssize_t>(sizeof(header))) {
    std::memcpy(&info.version, header + 4, 4);
    std::memcpy(&info.n, header + 8, 8);
    info.expected_size = DistanceMatrix::kHeaderBytes + info.n * info.n * sizeof(float);
  }

  std::uint64_t checksum = kFnvOffsetBasis;
  std::vector<char> buf(4 * 1024 * 1024);
  off_t offset = 0;
  while (true) {
    ssize_t r = ::pread(fd, buf.data(), buf.size(), offset);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw IoError("read of '" + path + "' failed: " + std::strerror(errno));
    }
    if (r == 0) break;
    checksum = fnv1a64(buf.data(), static_cast<std::size_t>(r), checksum);
    offset += r;
  }
  info.checksum = checksum;
  return info;
}

}  // namespace fgc
