#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "orf/textnorm.hpp"

namespace orf {

enum class OpKind { Match, Substitution, Insertion, Deletion };

/// One step of a word alignment. Insertions carry only hyp_index,
/// deletions only ref_index, matches and substitutions both.
struct AlignmentOp {
  OpKind kind;
  std::optional<std::size_t> ref_index;
  std::optional<std::size_t> hyp_index;

  bool operator==(const AlignmentOp&) const = default;
};

struct Alignment {
  std::vector<AlignmentOp> ops;
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;

  std::size_t count(OpKind kind) const;
  /// Substitutions + insertions + deletions.
  std::size_t edit_cost() const;

  bool operator==(const Alignment&) const = default;
};

/// Word-level error decomposition. wer_fraction is (I + D + S) / N and is
/// allowed to exceed 1.
struct WerBreakdown {
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
  std::size_t matches = 0;
  std::size_t ref_len = 0;
  double wer_fraction = 0.0;
  double wer_percent = 0.0;

  std::size_t errors() const { return insertions + deletions + substitutions; }
};

/// Minimal unit-cost edit alignment of hypothesis against reference.
///
/// Among minimal-cost alignments the one with the most substitutions is
/// chosen, so the decomposition is the same with the arguments swapped (S
/// equal, I and D exchanged). Remaining ties are broken walking forward from
/// the start of both sequences, taking the first optimal step in the order
/// Match, Substitution, Deletion, Insertion; a repeated word ("the the") thus
/// marks the later copy as the insertion. Time and memory are
/// O(|ref| * |hyp|); 2,000 x 2,000 tokens needs ~16 MB.
Alignment align(const TokenSequence& reference, const TokenSequence& hypothesis);

/// Breakdown of align(reference, hypothesis). Throws EmptyReferenceError when
/// the reference has no tokens.
WerBreakdown wer(const TokenSequence& reference, const TokenSequence& hypothesis);
WerBreakdown breakdown(const Alignment& alignment);

/// I + D + S of the story-vs-spoken alignment, i.e. the number of reading
/// errors a rater would tally. Throws EmptyReferenceError on an empty story.
std::size_t count_reading_errors(const TokenSequence& story, const TokenSequence& spoken);

}  // namespace orf
