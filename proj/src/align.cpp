#include "orf/align.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string_view>
#include <unordered_map>

#include "orf/error.hpp"

namespace orf {
namespace {

// Maps both sequences onto dense integer ids so the inner loop compares ints.
void intern(const TokenSequence& ref, const TokenSequence& hyp, std::vector<std::uint32_t>& ref_ids,
            std::vector<std::uint32_t>& hyp_ids) {
  std::unordered_map<std::string_view, std::uint32_t> ids;
  ids.reserve(ref.size() + hyp.size());
  auto id_of = [&ids](const std::string& token) {
    return ids.try_emplace(token, static_cast<std::uint32_t>(ids.size())).first->second;
  };
  ref_ids.reserve(ref.size());
  hyp_ids.reserve(hyp.size());
  for (const auto& t : ref) ref_ids.push_back(id_of(t));
  for (const auto& t : hyp) hyp_ids.push_back(id_of(t));
}

}  // namespace

std::size_t Alignment::count(OpKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(ops.begin(), ops.end(), [kind](const AlignmentOp& op) { return op.kind == kind; }));
}

std::size_t Alignment::edit_cost() const {
  return count(OpKind::Substitution) + count(OpKind::Insertion) + count(OpKind::Deletion);
}

namespace {

// Each move adds a packed key: match 0, substitution kStep - 1, insertion and
// deletion kStep, where kStep exceeds any possible substitution count. The
// minimal total key is the minimal edit cost and, among those, the most
// substitutions. Both criteria are symmetric in ref/hyp.
template <typename Key>
Alignment align_ids(const std::vector<std::uint32_t>& ref, const std::vector<std::uint32_t>& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  const Key step = static_cast<Key>(std::min(n, m) + 1);
  const Key sub_step = step - 1;

  // key[i * width + j] covers ref[i..n) against hyp[j..m).
  std::vector<Key> key((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> Key { return key[i * width + j]; };
  for (std::size_t j = 0; j <= m; ++j) key[n * width + j] = static_cast<Key>(m - j) * step;
  for (std::size_t i = n; i-- > 0;) {
    const Key* below = &key[(i + 1) * width];
    Key* row = &key[i * width];
    row[m] = static_cast<Key>(n - i) * step;
    const std::uint32_t r = ref[i];
    for (std::size_t j = m; j-- > 0;) {
      const Key diagonal = below[j + 1] + (r == hyp[j] ? Key{0} : sub_step);
      const Key gap = std::min(below[j], row[j + 1]) + step;
      row[j] = std::min(diagonal, gap);
    }
  }

  Alignment out;
  out.ref_len = n;
  out.hyp_len = m;
  out.ops.reserve(n + m);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    const Key here = at(i, j);
    if (i < n && j < m) {
      const bool same = ref[i] == hyp[j];
      if (same && at(i + 1, j + 1) == here) {
        out.ops.push_back({OpKind::Match, i, j});
        ++i, ++j;
        continue;
      }
      if (!same && at(i + 1, j + 1) + sub_step == here) {
        out.ops.push_back({OpKind::Substitution, i, j});
        ++i, ++j;
        continue;
      }
    }
    if (i < n && at(i + 1, j) + step == here) {
      out.ops.push_back({OpKind::Deletion, i, std::nullopt});
      ++i;
      continue;
    }
    out.ops.push_back({OpKind::Insertion, std::nullopt, j});
    ++j;
  }
  return out;
}

}  // namespace

Alignment align(const TokenSequence& reference, const TokenSequence& hypothesis) {
  std::vector<std::uint32_t> ref;
  std::vector<std::uint32_t> hyp;
  intern(reference, hypothesis, ref, hyp);
  // The largest key is (n + m) * (min(n, m) + 1).
  const std::uint64_t max_key = (std::uint64_t(ref.size()) + hyp.size()) * (std::min(ref.size(), hyp.size()) + 1);
  if (max_key <= std::numeric_limits<std::uint32_t>::max()) return align_ids<std::uint32_t>(ref, hyp);
  return align_ids<std::uint64_t>(ref, hyp);
}

WerBreakdown breakdown(const Alignment& alignment) {
  if (alignment.ref_len == 0) throw EmptyReferenceError("WER is undefined for an empty reference");
  WerBreakdown b;
  for (const auto& op : alignment.ops) {
    switch (op.kind) {
      case OpKind::Match: ++b.matches; break;
      case OpKind::Substitution: ++b.substitutions; break;
      case OpKind::Insertion: ++b.insertions; break;
      case OpKind::Deletion: ++b.deletions; break;
    }
  }
  b.ref_len = alignment.ref_len;
  b.wer_fraction = static_cast<double>(b.errors()) / static_cast<double>(b.ref_len);
  b.wer_percent = b.wer_fraction * 100.0;
  return b;
}

WerBreakdown wer(const TokenSequence& reference, const TokenSequence& hypothesis) {
  if (reference.empty()) throw EmptyReferenceError("WER is undefined for an empty reference");
  return breakdown(align(reference, hypothesis));
}

std::size_t count_reading_errors(const TokenSequence& story, const TokenSequence& spoken) {
  if (story.empty()) throw EmptyReferenceError("cannot count reading errors against an empty story");
  return align(story, spoken).edit_cost();
}

}  // namespace orf
