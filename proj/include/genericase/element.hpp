#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "genericase/common.hpp"

namespace genericase {

/// A word over a finite alphabet of single characters. Inverse generators,
/// where the alphabet has them, are the upper-case letters ('A' == inverse
/// of 'a').
struct Word {
  std::string letters;
  bool operator==(const Word&) const = default;
};

/// A freely reduced word over signed generators a..z / A..Z.
struct ReducedWord {
  std::string letters;
  bool operator==(const ReducedWord&) const = default;
};

/// A simple graph on vertex set {1..vertex_count}; edges are sorted pairs
/// (u, v) with u < v, no duplicates, no loops.
struct Graph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;
  bool operator==(const Graph&) const = default;
};

/// A permutation of {1..n} given by its image sequence (1-based).
struct Permutation {
  std::vector<int> images;
  bool operator==(const Permutation&) const = default;
};

/// A tagged input value. The `aux` flag marks auxiliary configurations
/// produced mid-construction by growth processes; auxiliary elements never
/// satisfy domain membership, and their payload may be a partial object
/// (e.g. a permutation with only some images picked).
class Element {
 public:
  using Payload = std::variant<Word, ReducedWord, Graph, Permutation>;
  enum class Kind { Word, ReducedWord, Graph, Permutation };

  static Element word(std::string letters) {
    return Element(Word{std::move(letters)});
  }
  static Element reduced_word(std::string letters) {
    return Element(ReducedWord{std::move(letters)});
  }
  static Element graph(int vertex_count, std::vector<std::pair<int, int>> edges) {
    std::sort(edges.begin(), edges.end());
    return Element(Graph{vertex_count, std::move(edges)});
  }
  static Element permutation(std::vector<int> images) {
    return Element(Permutation{std::move(images)});
  }

  /// Copy of this element carrying the auxiliary flag.
  Element as_aux() const {
    Element e(*this);
    e.aux_ = true;
    return e;
  }

  bool is_aux() const { return aux_; }

  Kind kind() const { return static_cast<Kind>(value_.index()); }

  template <typename T>
  const T& get() const {
    return std::get<T>(value_);
  }
  template <typename T>
  bool holds() const {
    return std::holds_alternative<T>(value_);
  }

  bool operator==(const Element&) const = default;

 private:
  explicit Element(Payload value) : value_(std::move(value)) {}

  Payload value_;
  bool aux_ = false;
};

inline char inverse_letter(char c) {
  return static_cast<char>(std::isupper(static_cast<unsigned char>(c))
                               ? std::tolower(static_cast<unsigned char>(c))
                               : std::toupper(static_cast<unsigned char>(c)));
}

inline bool is_freely_reduced(const std::string& letters) {
  for (std::size_t i = 1; i < letters.size(); ++i) {
    if (letters[i] == inverse_letter(letters[i - 1])) return false;
  }
  return true;
}

/// Structural invariants of the payload. Auxiliary elements are only
/// shape-checked (a partial permutation need not be a bijection yet).
inline bool well_formed(const Element& e) {
  switch (e.kind()) {
    case Element::Kind::Word:
      return true;
    case Element::Kind::ReducedWord:
      return e.is_aux() || is_freely_reduced(e.get<ReducedWord>().letters);
    case Element::Kind::Graph: {
      const Graph& g = e.get<Graph>();
      if (g.vertex_count < (e.is_aux() ? 0 : 1)) return false;
      for (std::size_t i = 0; i < g.edges.size(); ++i) {
        auto [u, v] = g.edges[i];
        if (u < 1 || v <= u || v > g.vertex_count) return false;
        if (i > 0 && !(g.edges[i - 1] < g.edges[i])) return false;
      }
      return true;
    }
    case Element::Kind::Permutation: {
      const Permutation& p = e.get<Permutation>();
      const int n = static_cast<int>(p.images.size());
      std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
      for (int v : p.images) {
        if (e.is_aux()) {
          if (v < 1) return false;
          continue;
        }
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
      }
      if (e.is_aux()) {
        auto sorted = p.images;
        std::sort(sorted.begin(), sorted.end());
        return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
      }
      return true;
    }
  }
  return false;
}

/// Canonical text form, used in CSV outputs and config literals:
/// words as letter strings, graphs as "n;u-v,u-v,...", permutations as
/// comma-separated images. Auxiliary elements get an "aux:" prefix.
inline std::string canonical_text(const Element& e) {
  std::string out;
  if (e.is_aux()) out += "aux:";
  switch (e.kind()) {
    case Element::Kind::Word:
      out += e.get<Word>().letters;
      break;
    case Element::Kind::ReducedWord:
      out += e.get<ReducedWord>().letters;
      break;
    case Element::Kind::Graph: {
      const Graph& g = e.get<Graph>();
      out += std::to_string(g.vertex_count);
      out += ';';
      for (std::size_t i = 0; i < g.edges.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(g.edges[i].first);
        out += '-';
        out += std::to_string(g.edges[i].second);
      }
      break;
    }
    case Element::Kind::Permutation: {
      const Permutation& p = e.get<Permutation>();
      for (std::size_t i = 0; i < p.images.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(p.images[i]);
      }
      break;
    }
  }
  return out;
}

}  // namespace genericase
