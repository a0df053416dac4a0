#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "cho/solver.hpp"

namespace cho {

/// Persistent table of solved eigenvalues, one record per line:
///
///     name l n_r r_c omega energy
///
/// with every number written to 15 significant digits. The table is a
/// cache: every entry can be re-derived with solve_energy. Reads and
/// writes are serialized, so one cache may be shared by concurrent solves.
class EigenvalueCache {
 public:
  EigenvalueCache() = default;
  /// Loads `path` if it exists; malformed lines raise Error naming the line.
  explicit EigenvalueCache(std::filesystem::path path);

  std::optional<double> lookup(const QuantumState& state) const;
  void store(const QuantumState& state, double energy);

  /// Cached energy, or solve_energy followed by store.
  double energy(const QuantumState& state);

  /// Writes all records, sorted, to the path given at construction.
  void save() const;
  void save(const std::filesystem::path& path) const;
  void clear();

  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

  /// Canonical 15-significant-digit rendering used in keys and files.
  static std::string format_number(double x);

 private:
  static std::string key(const QuantumState& state);

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> records_;  // key -> energy text
};

}  // namespace cho
