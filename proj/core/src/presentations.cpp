#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "wlqmc/topology.hpp"

namespace wlqmc {

namespace {

constexpr int kMaxGropeDepth = 16;

// Relator x E^-1 for the relation x = E.
GroupWord defining_relator(int x, const GroupWord& E) { return concat(GroupWord{x}, inverse(E)); }

}  // namespace

GroupWord commutator(const GroupWord& a, const GroupWord& b) {
  return concat(concat(a, b), concat(inverse(a), inverse(b)));
}

Presentation free_presentation(int n) {
  if (n < 1) throw std::invalid_argument("free presentation needs n >= 1");
  Presentation p;
  p.n_generators = n;
  p.kind = PresentationKind::free;
  return p;
}

Presentation trivial_presentation() {
  Presentation p;
  p.n_generators = 1;
  p.relations = {GroupWord{1}};
  p.kind = PresentationKind::custom;
  return p;
}

Presentation collapsing_chain(int n) {
  if (n < 1) throw std::invalid_argument("collapsing chain needs n >= 1");
  Presentation p;
  p.n_generators = n;
  p.copy_size = n;
  p.kind = PresentationKind::collapsing_chain;
  for (int a = 1; a < n; ++a) p.relations.push_back(GroupWord{a, -(a + 1), -(a + 1)});
  p.relations.push_back(GroupWord{n});
  return p;
}

Presentation doubled_chain(int n) {
  Presentation one = collapsing_chain(n);
  Presentation p;
  p.n_generators = 2 * n;
  p.copy_size = n;
  p.kind = PresentationKind::doubled_chain;
  p.relations = one.relations;
  for (const auto& r : one.relations) {
    GroupWord s;
    for (Letter l : r.letters) s.letters.push_back(l > 0 ? l + n : l - n);
    p.relations.push_back(s);
  }
  return p;
}

Presentation grope_presentation(int n, PresentationKind kind) {
  if (n < 1) throw std::invalid_argument("grope presentation needs n >= 1");
  if (n > kMaxGropeDepth) throw std::invalid_argument("grope depth above generator cap");
  Presentation p;
  p.kind = kind;
  switch (kind) {
    case PresentationKind::half_grope:
    case PresentationKind::half_grope_capped:
      p.n_generators = 2 * n;
      for (int k = 1; k < n; ++k) {
        const int x = 2 * k - 1;
        p.relations.push_back(defining_relator(x, commutator(GroupWord{x + 2}, GroupWord{x + 3})));
      }
      if (kind == PresentationKind::half_grope_capped) p.relations.push_back(GroupWord{2 * n - 1});
      return p;
    case PresentationKind::grope_capped: {
      // Binary string s of length L and value v has id 2^L - 1 + v.
      auto id = [](int L, int v) { return (1 << L) - 1 + v; };
      p.n_generators = (1 << (n + 1)) - 2;
      for (int L = 1; L < n; ++L)
        for (int v = 0; v < (1 << L); ++v)
          p.relations.push_back(defining_relator(
              id(L, v), commutator(GroupWord{id(L + 1, 2 * v)}, GroupWord{id(L + 1, 2 * v + 1)})));
      for (int v = 0; v < (1 << n); ++v) p.relations.push_back(GroupWord{id(n, v)});
      return p;
    }
    default:
      throw std::invalid_argument("not a grope kind: " + kind_name(kind));
  }
}

std::string kind_name(PresentationKind kind) {
  switch (kind) {
    case PresentationKind::free: return "free";
    case PresentationKind::collapsing_chain: return "collapsing-chain";
    case PresentationKind::doubled_chain: return "doubled-chain";
    case PresentationKind::half_grope: return "half-grope";
    case PresentationKind::half_grope_capped: return "half-grope-capped";
    case PresentationKind::grope_capped: return "grope-capped";
    case PresentationKind::custom: return "custom";
  }
  return "custom";
}

PresentationKind parse_kind(const std::string& name) {
  for (auto k : {PresentationKind::free, PresentationKind::collapsing_chain,
                 PresentationKind::doubled_chain, PresentationKind::half_grope,
                 PresentationKind::half_grope_capped, PresentationKind::grope_capped,
                 PresentationKind::custom})
    if (kind_name(k) == name) return k;
  throw std::invalid_argument("unknown presentation kind: " + name);
}

GroupWord apply_relation(const GroupWord& w, const Presentation& pres, std::size_t index,
                         std::size_t position, Orientation orientation) {
  if (index >= pres.relations.size()) throw std::out_of_range("relation index out of range");
  if (position > w.size()) throw std::out_of_range("insertion position out of range");
  const GroupWord& r = pres.relations[index];
  const GroupWord ins = orientation == Orientation::forward ? r : inverse(r);
  GroupWord out;
  out.letters.reserve(w.size() + ins.size());
  out.letters.insert(out.letters.end(), w.letters.begin(),
                     w.letters.begin() + static_cast<std::ptrdiff_t>(position));
  out.letters.insert(out.letters.end(), ins.letters.begin(), ins.letters.end());
  out.letters.insert(out.letters.end(), w.letters.begin() + static_cast<std::ptrdiff_t>(position),
                     w.letters.end());
  return free_reduce(out);
}

std::size_t MoveSequence::max_length() const {
  std::size_t m = 0;
  for (const auto& w : words) m = std::max(m, w.size());
  return m;
}

namespace {

// Rewrites letter x^{+-1} at `pos` through relation `rel` = x E^-1 into
// E^{+-1}.
Move rewrite_move(Letter l, std::size_t pos, std::size_t rel) {
  if (l > 0) return {rel, pos, Orientation::inverse};
  return {rel, pos + 1, Orientation::forward};
}

}  // namespace

MoveSequence generate_shrink_sequence(const GroupWord& start, const Presentation& pres) {
  if (pres.kind != PresentationKind::collapsing_chain &&
      pres.kind != PresentationKind::doubled_chain)
    throw std::invalid_argument("shrink sequences need a collapsing-chain presentation");
  const int n = pres.copy_size;
  for (Letter l : start.letters)
    if (l == 0 || std::abs(l) > pres.n_generators)
      throw std::out_of_range("start word uses an undeclared generator");

  MoveSequence seq;
  seq.words.push_back(free_reduce(start));
  while (!seq.words.back().empty()) {
    const GroupWord& w = seq.words.back();
    const std::size_t pos = w.size() - 1;
    const Letter l = w.letters[pos];
    const int g = std::abs(l);
    const std::size_t rel = static_cast<std::size_t>((g - 1) / n * n + (g - 1) % n);
    const Move mv = rewrite_move(l, pos, rel);
    GroupWord next = apply_relation(w, pres, mv.relation, mv.position, mv.orientation);
    seq.moves.push_back(mv);
    seq.words.push_back(std::move(next));
  }
  return seq;
}

MoveSequence generate_grope_shrink(int n) {
  const Presentation pres = grope_presentation(n, PresentationKind::half_grope_capped);
  const int cap = 2 * n - 1;
  MoveSequence seq;
  seq.words.push_back(commutator(GroupWord{1}, GroupWord{2}));
  while (!seq.words.back().empty()) {
    const GroupWord& w = seq.words.back();
    std::size_t pos = w.size();
    for (std::size_t i = 0; i < w.size(); ++i)
      if (std::abs(w.letters[i]) % 2 == 1) {
        pos = i;
        break;
      }
    if (pos == w.size()) throw std::logic_error("grope shrink stalled without odd letters");
    const Letter l = w.letters[pos];
    const int x = std::abs(l);
    const std::size_t rel = x == cap ? static_cast<std::size_t>(n - 1)
                                     : static_cast<std::size_t>((x - 1) / 2);
    const Move mv = rewrite_move(l, pos, rel);
    GroupWord next = apply_relation(w, pres, mv.relation, mv.position, mv.orientation);
    seq.moves.push_back(mv);
    seq.words.push_back(std::move(next));
  }
  return seq;
}

bool replay(const MoveSequence& seq, const Presentation& pres) {
  if (seq.words.size() != seq.moves.size() + 1) return false;
  for (std::size_t i = 0; i < seq.moves.size(); ++i) {
    const auto& m = seq.moves[i];
    if (m.relation >= pres.relations.size() || m.position > seq.words[i].size()) return false;
    if (apply_relation(seq.words[i], pres, m.relation, m.position, m.orientation) !=
        seq.words[i + 1])
      return false;
  }
  return true;
}

WordCount count_bounded_weight_words(int length, int n, std::int64_t weight_cap) {
  if (length < 0 || n < 1) throw std::invalid_argument("bad word-count arguments");
  const double size = std::pow(4.0 * n, length);
  if (size > 1e8) throw std::invalid_argument("word count infeasible: (4n)^l > 1e8");

  std::vector<std::int64_t> weight(static_cast<std::size_t>(n) + 1);
  for (int a = 1; a <= n; ++a) weight[static_cast<std::size_t>(a)] = (std::int64_t{1} << (n - a + 1)) - 1;

  WordCount wc;
  // Odometer over all (4n)^l words; letter index k -> copy k/(2n), generator
  // (k % 2n)/2 + 1, sign by parity.
  const int alpha = 4 * n;
  std::vector<int> digits(static_cast<std::size_t>(length), 0);
  while (true) {
    ++wc.total;
    bool ok = true;
    int copy = -1;
    std::int64_t block = 0;
    for (int k : digits) {
      const int c = k / (2 * n);
      const int a = (k % (2 * n)) / 2 + 1;
      const std::int64_t s = (k % 2 == 0 ? 1 : -1) * weight[static_cast<std::size_t>(a)];
      if (c != copy) {
        if (copy >= 0 && std::llabs(block) > weight_cap) ok = false;
        copy = c;
        block = 0;
      }
      block += s;
    }
    if (copy >= 0 && std::llabs(block) > weight_cap) ok = false;
    if (ok) ++wc.restricted;

    int i = length - 1;
    while (i >= 0 && ++digits[static_cast<std::size_t>(i)] == alpha) digits[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return wc;
}

}  // namespace wlqmc
