#include "detanomaly/spectrum_cache.hpp"

#include "detanomaly/dense.hpp"
#include "detanomaly/errors.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace detanomaly {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void fingerprint_into(std::ostringstream& out, const ModelOperator& op) {
  out << to_string(op.kind) << " dim=" << op.dim << " power=" << format_hexfloat(op.power)
      << " decay=" << format_hexfloat(op.decay) << " amplitude=" << format_hexfloat(op.amplitude)
      << " coupling=" << format_hexfloat(op.coupling) << " u={";
  for (const auto& [mode, c] : op.u) out << mode << ":" << format_hexfloat(c.real()) << "," << format_hexfloat(c.imag()) << ";";
  out << "}";
  for (const auto& child : op.children) {
    out << " (";
    fingerprint_into(out, child);
    out << ")";
  }
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_hexfloat(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

std::string spectrum_fingerprint(const ModelOperator& op, int N) {
  std::ostringstream out;
  fingerprint_into(out, op);
  out << " N=" << N;
  return out.str();
}

void write_spectrum_file(const std::filesystem::path& path, std::uint64_t key,
                         const std::vector<std::complex<double>>& eigs) {
  std::string body;
  for (const auto& l : eigs) body += format_hexfloat(l.real()) + " " + format_hexfloat(l.imag()) + "\n";
  const auto tmp = path.string() + ".tmp" + hex64(fnv1a(body, std::hash<std::string>{}(path.string())));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputationError("cannot write cache file " + tmp);
    out << "detanomaly-spectrum " << hex64(key) << " " << eigs.size() << " " << hex64(fnv1a(body)) << "\n" << body;
    if (!out) throw ComputationError("cannot write cache file " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::optional<std::vector<std::complex<double>>> read_spectrum_file(const std::filesystem::path& path,
                                                                    std::uint64_t key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string header;
  if (!std::getline(in, header)) return std::nullopt;
  std::istringstream hs(header);
  std::string magic, key_text, sum_text;
  std::size_t count = 0;
  if (!(hs >> magic >> key_text >> count >> sum_text) || magic != "detanomaly-spectrum" || key_text != hex64(key))
    return std::nullopt;
  std::ostringstream rest;
  rest << in.rdbuf();
  const std::string body = rest.str();
  if (hex64(fnv1a(body)) != sum_text) return std::nullopt;
  std::vector<std::complex<double>> eigs;
  eigs.reserve(count);
  std::istringstream bs(body);
  std::string line;
  while (std::getline(bs, line)) {
    char* end = nullptr;
    const double re = std::strtod(line.c_str(), &end);
    char* end2 = nullptr;
    const double im = std::strtod(end, &end2);
    if (end == line.c_str() || end2 == end || *end2 != '\0') return std::nullopt;
    eigs.emplace_back(re, im);
  }
  if (eigs.size() != count) return std::nullopt;
  return eigs;
}

SpectrumCache::SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::mutex& SpectrumCache::key_lock(const std::string& key) {
  std::lock_guard<std::mutex> g(mutex_);
  auto& slot = key_locks_[key];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::filesystem::path SpectrumCache::entry_path(const ModelOperator& op, int N) const {
  return dir_ / (hex64(fnv1a(spectrum_fingerprint(op, N))) + ".spec");
}

std::vector<std::complex<double>> SpectrumCache::spectrum(const ModelOperator& op, int N) {
  const std::uint64_t key = fnv1a(spectrum_fingerprint(op, N));
  const auto path = entry_path(op, N);
  std::lock_guard<std::mutex> g(key_lock(path.string()));
  const bool exists = std::filesystem::exists(path);
  if (exists) {
    if (auto eigs = read_spectrum_file(path, key)) {
      std::lock_guard<std::mutex> s(mutex_);
      ++stats_.hits;
      return *eigs;
    }
  }
  const auto start = std::chrono::steady_clock::now();
  auto eigs = spectrum_dense(compress(op, N));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_spectrum_file(path, key, eigs);
  std::lock_guard<std::mutex> s(mutex_);
  ++stats_.misses;
  ++stats_.eigensolves;
  stats_.eigensolve_seconds += secs;
  if (exists) {
    ++stats_.corrupt;
    warnings_.push_back("corrupt cache entry " + path.string() + " recomputed");
  }
  return eigs;
}

SpectrumProvider SpectrumCache::provider() {
  return [this](const ModelOperator& op, int N) { return spectrum(op, N); };
}

SpectrumCache::Stats SpectrumCache::stats() const {
  std::lock_guard<std::mutex> g(mutex_);
  return stats_;
}

std::vector<std::string> SpectrumCache::warnings() const {
  std::lock_guard<std::mutex> g(mutex_);
  return warnings_;
}

}  // namespace detanomaly
