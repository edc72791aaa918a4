#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "wlqmc/topology.hpp"

namespace wlqmc {

std::vector<std::pair<int, int>> GroupWord::runs() const {
  std::vector<std::pair<int, int>> out;
  for (Letter l : letters) {
    const int g = std::abs(l);
    const int s = l > 0 ? 1 : -1;
    if (!out.empty() && out.back().first == g)
      out.back().second += s;
    else
      out.emplace_back(g, s);
  }
  return out;
}

GroupWord free_reduce(const GroupWord& w) {
  std::vector<Letter> st;
  st.reserve(w.size());
  for (Letter l : w.letters) {
    if (l == 0) throw std::invalid_argument("letter 0 is not a generator");
    if (!st.empty() && st.back() == -l)
      st.pop_back();
    else
      st.push_back(l);
  }
  return GroupWord(std::move(st));
}

GroupWord cyclic_reduce(const GroupWord& w) {
  GroupWord r = free_reduce(w);
  std::size_t b = 0, e = r.size();
  while (e - b >= 2 && r.letters[b] == -r.letters[e - 1]) {
    ++b;
    --e;
  }
  return GroupWord(std::vector<Letter>(r.letters.begin() + static_cast<std::ptrdiff_t>(b),
                                       r.letters.begin() + static_cast<std::ptrdiff_t>(e)));
}

GroupWord conjugacy_representative(const GroupWord& w) {
  const GroupWord r = cyclic_reduce(w);
  std::vector<Letter> best = r.letters, rot = r.letters;
  for (std::size_t k = 1; k < r.size(); ++k) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return GroupWord(std::move(best));
}

GroupWord inverse(const GroupWord& w) {
  GroupWord out;
  out.letters.reserve(w.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out.letters.push_back(-*it);
  return out;
}

GroupWord concat(const GroupWord& a, const GroupWord& b) {
  GroupWord out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

namespace {

std::int64_t letter_weight(int local, int n) {
  if (local < 1 || local > n) throw std::out_of_range("generator outside 1..n");
  if (n - local + 1 > 62) throw std::overflow_error("weight exceeds 64 bits");
  return (std::int64_t{1} << (n - local + 1)) - 1;
}

}  // namespace

std::int64_t word_weight(const GroupWord& w, int n, int copies) {
  if (n < 1 || copies < 1) throw std::invalid_argument("word_weight needs n >= 1");
  std::int64_t total = 0;
  for (Letter l : w.letters) {
    const int g = std::abs(l);
    if (g > n * copies) throw std::out_of_range("generator outside the alphabet");
    const int local = (g - 1) % n + 1;
    total += (l > 0 ? 1 : -1) * letter_weight(local, n);
  }
  return total;
}

std::pair<std::int64_t, std::int64_t> doubled_block_weight(const GroupWord& w, int n) {
  std::int64_t best[2] = {0, 0};
  int copy = -1;
  std::int64_t block = 0;
  auto flush = [&] {
    if (copy >= 0) best[copy] = std::max(best[copy], block < 0 ? -block : block);
  };
  for (Letter l : w.letters) {
    const int g = std::abs(l);
    if (g < 1 || g > 2 * n) throw std::out_of_range("generator outside the doubled alphabet");
    const int c = (g - 1) / n;
    if (c != copy) {
      flush();
      copy = c;
      block = 0;
    }
    block += (l > 0 ? 1 : -1) * letter_weight((g - 1) % n + 1, n);
  }
  flush();
  return {best[0], best[1]};
}

std::string format_word(const GroupWord& w, int copy_size) {
  std::string out;
  for (Letter l : w.letters) {
    const int g = std::abs(l);
    const int copy = copy_size > 0 ? (g - 1) / copy_size + 1 : 1;
    const int local = copy_size > 0 ? (g - 1) % copy_size + 1 : g;
    if (!out.empty()) out += ' ';
    if (local <= 26) {
      char ch = static_cast<char>('a' + local - 1);
      out += l > 0 ? ch : static_cast<char>(std::toupper(ch));
      out += std::to_string(copy);
    } else {
      out += l > 0 ? 'g' : 'G';
      out += std::to_string(local) + ':' + std::to_string(copy);
    }
  }
  return out;
}

GroupWord parse_word(const std::string& s, int copy_size) {
  std::istringstream in(s);
  std::string tok;
  GroupWord w;
  while (in >> tok) {
    if (tok == "e") continue;
    const char head = tok[0];
    if (!std::isalpha(static_cast<unsigned char>(head)))
      throw std::invalid_argument("bad word token: " + tok);
    const bool inv = std::isupper(static_cast<unsigned char>(head));
    int local = 0;
    std::string copy_str;
    if ((head == 'g' || head == 'G') && tok.find(':') != std::string::npos) {
      const auto colon = tok.find(':');
      local = std::stoi(tok.substr(1, colon - 1));
      copy_str = tok.substr(colon + 1);
    } else {
      local = std::tolower(static_cast<unsigned char>(head)) - 'a' + 1;
      copy_str = tok.substr(1);
    }
    const int copy = copy_str.empty() ? 1 : std::stoi(copy_str);
    if (copy < 1 || (copy_size == 0 && copy != 1))
      throw std::invalid_argument("bad copy index in token: " + tok);
    const int g = copy_size > 0 ? (copy - 1) * copy_size + local : local;
    w.letters.push_back(inv ? -g : g);
  }
  return w;
}

}  // namespace wlqmc
