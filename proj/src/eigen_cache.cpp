#include "cho/eigen_cache.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cho/error.hpp"

namespace cho {

std::string EigenvalueCache::format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string EigenvalueCache::key(const QuantumState& s) {
  return s.name() + " " + std::to_string(s.l) + " " + std::to_string(s.n_r) + " " +
         format_number(s.r_c) + " " + format_number(s.omega);
}

EigenvalueCache::EigenvalueCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string name;
    int l = 0;
    int n_r = 0;
    double r_c = 0.0;
    double omega = 0.0;
    std::string energy;
    if (!(is >> name >> l >> n_r >> r_c >> omega >> energy)) {
      throw Error("eigenvalue cache " + path_.string() + ":" + std::to_string(lineno) +
                  ": malformed record");
    }
    QuantumState s{n_r, l, 0, r_c, omega};
    if (s.name() != name) {
      throw Error("eigenvalue cache " + path_.string() + ":" + std::to_string(lineno) +
                  ": label does not match quantum numbers");
    }
    records_[key(s)] = energy;
  }
}

std::optional<double> EigenvalueCache::lookup(const QuantumState& state) const {
  std::lock_guard lock(mutex_);
  auto it = records_.find(key(state));
  if (it == records_.end()) return std::nullopt;
  return std::stod(it->second);
}

void EigenvalueCache::store(const QuantumState& state, double energy) {
  std::lock_guard lock(mutex_);
  records_[key(state)] = format_number(energy);
}

double EigenvalueCache::energy(const QuantumState& state) {
  if (auto hit = lookup(state)) return *hit;
  const double e = solve_energy(state);
  store(state, e);
  // Hand back exactly what a later lookup would return.
  return *lookup(state);
}

void EigenvalueCache::save() const {
  if (path_.empty()) throw Error("eigenvalue cache: no path to save to");
  save(path_);
}

void EigenvalueCache::save(const std::filesystem::path& path) const {
  std::lock_guard lock(mutex_);
  std::ofstream out(path);
  if (!out) throw Error("eigenvalue cache: cannot write " + path.string());
  for (const auto& [k, e] : records_) out << k << ' ' << e << '\n';
}

void EigenvalueCache::clear() {
  std::lock_guard lock(mutex_);
  records_.clear();
}

std::size_t EigenvalueCache::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

}  // namespace cho
