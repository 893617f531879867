#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "orf/align.hpp"
#include "orf/textnorm.hpp"

namespace orf::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(ORF_FIXTURE_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << data;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "orf") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / (tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void put_le(std::string& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

/// Canonical 44-byte PCM header followed by `data_bytes` zero bytes
/// (or no payload when `with_payload` is false).
inline std::string make_wav(std::uint32_t sample_rate, std::uint16_t channels, std::uint16_t bits,
                            std::uint32_t data_bytes, bool with_payload = true) {
  std::string w = "RIFF";
  put_le(w, 36 + data_bytes, 4);
  w += "WAVEfmt ";
  put_le(w, 16, 4);
  put_le(w, 1, 2);
  put_le(w, channels, 2);
  put_le(w, sample_rate, 4);
  put_le(w, sample_rate * channels * bits / 8, 4);
  put_le(w, channels * bits / 8, 2);
  put_le(w, bits, 2);
  w += "data";
  put_le(w, data_bytes, 4);
  if (with_payload) w.append(data_bytes, '\0');
  return w;
}

inline TokenSequence toks(std::vector<std::string> words) { return TokenSequence::from_tokens(std::move(words)); }

// ---------------------------------------------------------------------------
// Alignment oracles. Neither shares code with orf::align.

struct Decomposition {
  std::size_t substitutions, insertions, deletions;
  auto operator<=>(const Decomposition&) const = default;
};

/// Enumerates every alignment path (no memoization) and reports the minimal
/// edit cost together with every (S, I, D) split that attains it.
struct BruteForceResult {
  std::size_t min_cost;
  std::vector<Decomposition> minimal;
};

inline BruteForceResult brute_force_alignments(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  BruteForceResult best{SIZE_MAX, {}};
  std::function<void(std::size_t, std::size_t, Decomposition)> walk = [&](std::size_t i, std::size_t j, Decomposition d) {
    if (i == ref.size() && j == hyp.size()) {
      const std::size_t cost = d.substitutions + d.insertions + d.deletions;
      if (cost < best.min_cost) {
        best.min_cost = cost;
        best.minimal.clear();
      }
      if (cost == best.min_cost && std::find(best.minimal.begin(), best.minimal.end(), d) == best.minimal.end())
        best.minimal.push_back(d);
      return;
    }
    if (i < ref.size() && j < hyp.size()) {
      Decomposition next = d;
      if (ref[i] != hyp[j]) ++next.substitutions;
      walk(i + 1, j + 1, next);
    }
    if (i < ref.size()) walk(i + 1, j, {d.substitutions, d.insertions, d.deletions + 1});
    if (j < hyp.size()) walk(i, j + 1, {d.substitutions, d.insertions + 1, d.deletions});
  };
  walk(0, 0, {0, 0, 0});
  return best;
}

/// Cost-only brute force, faster for exhaustive sweeps.
inline std::size_t brute_force_cost(const std::vector<std::string>& ref, const std::vector<std::string>& hyp,
                                    std::size_t i = 0, std::size_t j = 0) {
  if (i == ref.size()) return hyp.size() - j;
  if (j == hyp.size()) return ref.size() - i;
  const std::size_t diag = brute_force_cost(ref, hyp, i + 1, j + 1) + (ref[i] != hyp[j] ? 1 : 0);
  const std::size_t del = brute_force_cost(ref, hyp, i + 1, j) + 1;
  const std::size_t ins = brute_force_cost(ref, hyp, i, j + 1) + 1;
  return std::min({diag, del, ins});
}

/// Top-down memoized edit distance for sequences too long to enumerate.
inline std::size_t memo_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    const std::size_t v = std::min({d(i + 1, j + 1) + (a[i] != b[j] ? 1 : 0), d(i + 1, j) + 1, d(i, j + 1) + 1});
    memo[{i, j}] = v;
    return v;
  };
  return d(0, 0);
}

/// Every sequence over {a, b} with length 0..max_len.
inline std::vector<std::vector<std::string>> all_ab_sequences(std::size_t max_len) {
  std::vector<std::vector<std::string>> out{{}};
  std::vector<std::vector<std::string>> frontier{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& s : frontier)
      for (const char* t : {"a", "b"}) {
        auto e = s;
        e.push_back(t);
        next.push_back(e);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

/// Random lowercase word sequences drawn from a small vocabulary so that
/// repeats and matches are common.
inline std::vector<std::string> random_words(std::mt19937& rng, std::size_t max_len, std::size_t vocab = 6) {
  static const char* kWords[] = {"the", "cool", "breeze", "tim", "liked", "clouds", "sky", "fog", "day", "sunny"};
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, std::min<std::size_t>(vocab, std::size(kWords)) - 1);
  std::vector<std::string> out(len(rng));
  for (auto& w : out) w = kWords[pick(rng)];
  return out;
}

/// Asserts I - D == hyp_len - ref_len and index coverage; returns false on violation.
inline bool alignment_is_well_formed(const Alignment& a) {
  std::size_t next_ref = 0, next_hyp = 0;
  for (const auto& op : a.ops) {
    const bool has_ref = op.kind != OpKind::Insertion;
    const bool has_hyp = op.kind != OpKind::Deletion;
    if (op.ref_index.has_value() != has_ref || op.hyp_index.has_value() != has_hyp) return false;
    if (has_ref && *op.ref_index != next_ref++) return false;
    if (has_hyp && *op.hyp_index != next_hyp++) return false;
  }
  const auto ins = static_cast<long long>(a.count(OpKind::Insertion));
  const auto del = static_cast<long long>(a.count(OpKind::Deletion));
  return next_ref == a.ref_len && next_hyp == a.hyp_len &&
         ins - del == static_cast<long long>(a.hyp_len) - static_cast<long long>(a.ref_len);
}

/// align() wrapped with the unconditional conservation check.
Alignment checked_align(const TokenSequence& ref, const TokenSequence& hyp);

}  // namespace orf::test
