#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "bottleneck/exact_gibbs.hpp"

namespace bottleneck {

void write_table_csv(std::ostream& os, const LogWeightTable& table) {
  const int blocks = table.blocks();
  for (int j = 0; j < blocks; ++j) os << "k" << j + 1 << ',';
  for (int j = 0; j < blocks; ++j) os << "m" << j + 1 << ',';
  os << "log_weight,probability\n";
  os << std::setprecision(12);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto p = table.point(i);
    for (int j = 0; j < blocks; ++j) os << p.plus_count(j) << ',';
    for (int j = 0; j < blocks; ++j) os << p.m(j) << ',';
    os << table.log_weights[i] << ',' << table.prob_at(i) << '\n';
  }
}

std::uint64_t spec_hash(const ModelSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_config_text(spec)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

constexpr char kMagic[4] = {'B', 'N', 'G', 'T'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool get(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

}  // namespace

// Layout (host byte order): magic, version u32, hash u64, blocks u32,
// block sizes u32 each, log_partition f64, entry count u64, log-weights f64.
void save_table_cache(const std::string& path, const LogWeightTable& table, std::uint64_t hash) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open table cache for writing: " + path);
  os.write(kMagic, sizeof kMagic);
  put(os, kVersion);
  put(os, hash);
  put(os, static_cast<std::uint32_t>(table.blocks()));
  for (int s : table.block_sizes) put(os, static_cast<std::uint32_t>(s));
  put(os, table.log_partition);
  put(os, static_cast<std::uint64_t>(table.size()));
  os.write(reinterpret_cast<const char*>(table.log_weights.data()),
           static_cast<std::streamsize>(table.size() * sizeof(double)));
  if (!os) throw std::runtime_error("failed writing table cache: " + path);
}

std::optional<LogWeightTable> load_table_cache(const std::string& path, std::uint64_t hash) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[4];
  std::uint32_t version = 0, blocks = 0;
  std::uint64_t stored = 0, count = 0;
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) return std::nullopt;
  if (!get(is, version) || version != kVersion || !get(is, stored) || stored != hash) return std::nullopt;
  if (!get(is, blocks) || blocks == 0 || blocks > static_cast<std::uint32_t>(kMaxBlocks)) return std::nullopt;
  LogWeightTable table;
  std::uint64_t expected = 1;
  for (std::uint32_t j = 0; j < blocks; ++j) {
    std::uint32_t s = 0;
    if (!get(is, s) || s == 0) return std::nullopt;
    table.block_sizes.push_back(static_cast<int>(s));
    expected *= s + 1ULL;
  }
  if (!get(is, table.log_partition) || !get(is, count) || count != expected) return std::nullopt;
  table.log_weights.resize(count);
  if (!is.read(reinterpret_cast<char*>(table.log_weights.data()), static_cast<std::streamsize>(count * sizeof(double))))
    return std::nullopt;
  return table;
}

}  // namespace bottleneck
