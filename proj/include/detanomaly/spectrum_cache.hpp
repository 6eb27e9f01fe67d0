#pragma once

// On-disk cache of dense spectra, one file per (operator, N):
//
//   detanomaly-spectrum <key> <count> <checksum>
//   <re> <im>            (hexadecimal floats, count lines)
//
// key is the FNV-1a hash of the operator fingerprint, checksum the FNV-1a
// hash of the eigenvalue lines.

#include "detanomaly/anomaly.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace detanomaly {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Exact text form of every parameter that enters compress(op, N).
std::string spectrum_fingerprint(const ModelOperator& op, int N);

class SpectrumCache {
 public:
  struct Stats {
    int hits{0};
    int misses{0};
    int corrupt{0};
    int eigensolves{0};
    double eigensolve_seconds{0};
  };

  explicit SpectrumCache(std::filesystem::path dir);

  std::vector<std::complex<double>> spectrum(const ModelOperator& op, int N);
  SpectrumProvider provider();

  std::filesystem::path entry_path(const ModelOperator& op, int N) const;
  Stats stats() const;
  std::vector<std::string> warnings() const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  Stats stats_;
  std::vector<std::string> warnings_;
  std::map<std::string, std::unique_ptr<std::mutex>> key_locks_;

  std::mutex& key_lock(const std::string& key);
};

std::string format_hexfloat(double x);
/// Writes and reads the file format above; read returns nullopt on any
/// mismatch (header, count, checksum, unparsable line).
void write_spectrum_file(const std::filesystem::path& path, std::uint64_t key,
                         const std::vector<std::complex<double>>& eigs);
std::optional<std::vector<std::complex<double>>> read_spectrum_file(const std::filesystem::path& path,
                                                                    std::uint64_t key);

}  // namespace detanomaly
