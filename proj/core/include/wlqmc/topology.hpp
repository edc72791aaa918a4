#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wlqmc/trajectory.hpp"

namespace wlqmc {

// Letters are signed generator ids: +g is g, -g is its inverse, g >= 1.
using Letter = int;

struct GroupWord {
  std::vector<Letter> letters;

  GroupWord() = default;
  GroupWord(std::initializer_list<Letter> l) : letters(l) {}
  explicit GroupWord(std::vector<Letter> l) : letters(std::move(l)) {}

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  // Run-length view (generator, power).
  std::vector<std::pair<int, int>> runs() const;

  friend bool operator==(const GroupWord&, const GroupWord&) = default;
};

GroupWord free_reduce(const GroupWord& w);
GroupWord cyclic_reduce(const GroupWord& w);
// Cyclically reduced, then the smallest rotation: one word per conjugacy class.
GroupWord conjugacy_representative(const GroupWord& w);
GroupWord inverse(const GroupWord& w);
GroupWord concat(const GroupWord& a, const GroupWord& b);

// Sum of p_i (2^{n-a_i+1} - 1) over run-length pairs. Generators above n
// are folded into their copy (g -> (g-1) % n + 1).
std::int64_t word_weight(const GroupWord& w, int n, int copies = 1);

// For words over two copies of an n-generator alphabet: the largest
// |block weight| among maximal single-copy blocks, per copy.
std::pair<std::int64_t, std::int64_t> doubled_block_weight(const GroupWord& w, int n);

// "a1 A1 b2": letter = generator within its copy, uppercase = inverse,
// digits = copy index. Generators past 'z' are written g27 / G27 and take
// an explicit ':' before the copy digit ("g27:1").
std::string format_word(const GroupWord& w, int copy_size = 0);
GroupWord parse_word(const std::string& s, int copy_size = 0);

enum class PresentationKind {
  free,
  collapsing_chain,
  doubled_chain,
  half_grope,
  half_grope_capped,
  grope_capped,
  custom
};

struct Presentation {
  int n_generators = 0;
  int copy_size = 0;  // generators per copy; 0 when not a multi-copy complex
  std::vector<GroupWord> relations;
  PresentationKind kind = PresentationKind::custom;
};

Presentation free_presentation(int n);
Presentation trivial_presentation();  // <g | g>
Presentation collapsing_chain(int n);
Presentation doubled_chain(int n);
Presentation grope_presentation(int n, PresentationKind kind);
std::string kind_name(PresentationKind kind);
PresentationKind parse_kind(const std::string& name);

// Commutator written a b a^-1 b^-1.
GroupWord commutator(const GroupWord& a, const GroupWord& b);

enum class Orientation { forward, inverse };

// Splice relation `index` (or its inverse) before letter `position`
// (position == size appends), then freely reduce.
GroupWord apply_relation(const GroupWord& w, const Presentation& pres, std::size_t index,
                         std::size_t position, Orientation orientation);

struct Move {
  std::size_t relation = 0;
  std::size_t position = 0;
  Orientation orientation = Orientation::forward;
};

struct MoveSequence {
  std::vector<GroupWord> words;  // words.front() is the start, words.back() the identity
  std::vector<Move> moves;       // moves[i] takes words[i] to words[i+1]

  std::size_t max_length() const;
};

MoveSequence generate_shrink_sequence(const GroupWord& start, const Presentation& pres);
MoveSequence generate_grope_shrink(int n);

// Replays the moves and reports whether every step reproduces the next word.
bool replay(const MoveSequence& seq, const Presentation& pres);

struct WordCount {
  std::uint64_t restricted = 0;
  std::uint64_t total = 0;
};

WordCount count_bounded_weight_words(int length, int n, std::int64_t weight_cap);

// --- sectors ---------------------------------------------------------------

// Circle or subdivided bouquet embedded at `offset` in a configuration space.
// Ring: sites offset..offset+M-1. Skeleton: hub at offset, loop g (0-based)
// site j in 1..M-1 at offset + 1 + g(M-1) + j-1. States listed in
// `splitting` may appear in a trajectory and cut it into intervals.
struct Geometry {
  enum class Kind { none, ring, skeleton };
  Kind kind = Kind::none;
  int M = 0;
  int loops = 0;
  Index offset = 0;
  std::vector<Index> splitting;

  static Geometry ring(int M, Index offset = 0);
  static Geometry skeleton(int loops, int M, Index offset = 0);
  std::size_t states() const;
  bool on_geometry(Index c) const;
  bool is_splitting(Index c) const;
  // Loop position of a skeleton state: (loop, j) with j = 0 for the hub.
  std::pair<int, int> position(Index c) const;
  Index state(int loop, int j) const;
  // Directed census edge of each loop joins positions census() and census()+1.
  int census() const { return M / 2; }
};

struct SectorLabel {
  bool is_winding = false;
  std::int64_t winding = 0;
  GroupWord word;

  std::string str() const;
  friend bool operator==(const SectorLabel&, const SectorLabel&) = default;
};

// One label for a trajectory that stays on the geometry; one label per
// interval otherwise. Closed words are cyclically reduced, interval and
// open words freely reduced.
std::vector<SectorLabel> sector_of_trajectory(const Trajectory& traj, const Geometry& geometry);
std::string sector_string(const std::vector<SectorLabel>& labels);

}  // namespace wlqmc
