#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "genericase/common.hpp"
#include "genericase/element.hpp"

namespace genericase {

/// Enumeration requests for spheres larger than this are refused with a
/// ResourceLimitError instead of degrading.
inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("integer overflow in 64-bit multiplication");
  return r;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("integer overflow in 64-bit addition");
  return r;
}

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace detail

/// Number of words of length at most n over an alphabet with m letters,
/// i.e. (m^(n+1) - 1) / (m - 1), in exact integer arithmetic. Overflow of
/// the 64-bit width raises OverflowError, never a silent wraparound.
inline std::uint64_t ball_cardinality(std::uint64_t m, std::uint64_t n) {
  if (m < 2) throw std::invalid_argument("ball_cardinality: alphabet size must be >= 2");
  std::uint64_t total = 0;
  for (std::uint64_t k = 0; k <= n; ++k)
    total = detail::checked_add(detail::checked_mul(total, m), 1);
  return total;
}

/// An input set with a size function and, where feasible, finite sphere
/// enumeration. Spheres S(n) hold the elements of size exactly n; the ball
/// B(n) is the union of spheres 0..n. All operations are pure and reentrant.
class Domain {
 public:
  explicit Domain(std::string name) : name_(std::move(name)) {}
  virtual ~Domain() = default;

  const std::string& name() const { return name_; }

  /// Membership in the input set. Auxiliary elements are never members.
  virtual bool contains(const Element& e) const = 0;

  /// Size of a member element; DomainMismatchError for auxiliary or foreign
  /// elements.
  virtual std::uint64_t size_of(const Element& e) const = 0;

  virtual bool enumerable() const { return false; }

  /// Exact |S(n)|; OverflowError if it exceeds 64 bits.
  virtual std::uint64_t sphere_cardinality(std::uint64_t n) const {
    (void)n;
    throw Error("domain " + name_ + " has no sphere enumerator");
  }

  /// Visits every element of S(n) in a fixed documented order. Refuses with
  /// ResourceLimitError when |S(n)| exceeds `cap`.
  virtual void for_each_in_sphere(std::uint64_t n,
                                  const std::function<void(const Element&)>& fn,
                                  std::uint64_t cap = kDefaultEnumerationCap) const {
    (void)n;
    (void)fn;
    (void)cap;
    throw Error("domain " + name_ + " has no sphere enumerator");
  }

  std::vector<Element> enumerate_sphere(std::uint64_t n,
                                        std::uint64_t cap = kDefaultEnumerationCap) const {
    std::vector<Element> out;
    out.reserve(static_cast<std::size_t>(sphere_cardinality(n)));
    for_each_in_sphere(n, [&out](const Element& e) { out.push_back(e); }, cap);
    return out;
  }

 protected:
  void check_cap(std::uint64_t n, std::uint64_t cap) const {
    std::uint64_t count = sphere_cardinality(n);
    if (count > cap) {
      throw ResourceLimitError("sphere S(" + std::to_string(n) + ") of domain " + name_ +
                               " has " + std::to_string(count) +
                               " elements, exceeding the enumeration cap of " +
                               std::to_string(cap));
    }
  }

  std::uint64_t require_member_size(const Element& e, bool member,
                                    std::uint64_t size) const {
    if (e.is_aux())
      throw DomainMismatchError("auxiliary element has no size in domain " + name_);
    if (!member)
      throw DomainMismatchError("element '" + canonical_text(e) +
                                "' does not belong to domain " + name_);
    return size;
  }

 private:
  std::string name_;
};

/// All words over a fixed character alphabet; size = word length. The empty
/// word has size 0 and is the sole element of sphere 0. Enumeration order is
/// lexicographic by alphabet position.
class WordDomain : public Domain {
 public:
  WordDomain(std::string name, std::string alphabet)
      : Domain(std::move(name)), alphabet_(std::move(alphabet)) {}

  const std::string& alphabet() const { return alphabet_; }

  bool contains(const Element& e) const override {
    if (e.is_aux() || !e.holds<Word>()) return false;
    const std::string& w = e.get<Word>().letters;
    return w.find_first_not_of(alphabet_) == std::string::npos;
  }

  std::uint64_t size_of(const Element& e) const override {
    return require_member_size(e, contains(e),
                               e.holds<Word>() ? e.get<Word>().letters.size() : 0);
  }

  bool enumerable() const override { return true; }

  std::uint64_t sphere_cardinality(std::uint64_t n) const override {
    return detail::checked_pow(alphabet_.size(), n);
  }

  void for_each_in_sphere(std::uint64_t n, const std::function<void(const Element&)>& fn,
                          std::uint64_t cap = kDefaultEnumerationCap) const override {
    check_cap(n, cap);
    const std::size_t m = alphabet_.size();
    std::string buf(static_cast<std::size_t>(n), alphabet_[0]);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      fn(Element::word(buf));
      std::size_t pos = idx.size();
      while (pos > 0) {
        --pos;
        if (++idx[pos] < m) {
          buf[pos] = alphabet_[idx[pos]];
          break;
        }
        idx[pos] = 0;
        buf[pos] = alphabet_[0];
        if (pos == 0) return;
      }
      if (idx.empty()) return;
    }
  }

 private:
  std::string alphabet_;
};

/// Freely reduced words over m signed generators a..  / A.. ; size = length.
/// Enumeration order is lexicographic over the letter order a < A < b < B ...
class ReducedWordDomain : public Domain {
 public:
  explicit ReducedWordDomain(int generators)
      : Domain("reduced-word(m=" + std::to_string(generators) + ")"),
        generators_(generators) {
    if (generators < 2 || generators > 26)
      throw std::invalid_argument("reduced-word: generator count must be in [2, 26]");
    for (int i = 0; i < generators; ++i) {
      letters_ += static_cast<char>('a' + i);
      letters_ += static_cast<char>('A' + i);
    }
  }

  int generators() const { return generators_; }
  const std::string& letters() const { return letters_; }

  bool contains(const Element& e) const override {
    if (e.is_aux() || !e.holds<ReducedWord>()) return false;
    const std::string& w = e.get<ReducedWord>().letters;
    if (w.find_first_not_of(letters_) != std::string::npos) return false;
    return is_freely_reduced(w);
  }

  std::uint64_t size_of(const Element& e) const override {
    return require_member_size(
        e, contains(e), e.holds<ReducedWord>() ? e.get<ReducedWord>().letters.size() : 0);
  }

  bool enumerable() const override { return true; }

  std::uint64_t sphere_cardinality(std::uint64_t n) const override {
    if (n == 0) return 1;
    const std::uint64_t k = static_cast<std::uint64_t>(2 * generators_);
    return detail::checked_mul(k, detail::checked_pow(k - 1, n - 1));
  }

  void for_each_in_sphere(std::uint64_t n, const std::function<void(const Element&)>& fn,
                          std::uint64_t cap = kDefaultEnumerationCap) const override {
    check_cap(n, cap);
    std::string buf;
    buf.reserve(static_cast<std::size_t>(n));
    visit_suffixes(n, buf, fn);
  }

 private:
  void visit_suffixes(std::uint64_t remaining, std::string& buf,
                      const std::function<void(const Element&)>& fn) const {
    if (remaining == 0) {
      fn(Element::reduced_word(buf));
      return;
    }
    const char banned = buf.empty() ? '\0' : inverse_letter(buf.back());
    for (char c : letters_) {
      if (c == banned) continue;
      buf.push_back(c);
      visit_suffixes(remaining - 1, buf, fn);
      buf.pop_back();
    }
  }

  int generators_;
  std::string letters_;
};

/// Simple graphs on {1..n}; size = vertex count. Sphere n is enumerated by
/// the 2^(n(n-1)/2) edge subsets, bit k of the mask governing the k-th pair
/// in the order (1,2), (1,3), (2,3), (1,4), ...
class GraphDomain : public Domain {
 public:
  GraphDomain() : Domain("graph") {}

  bool contains(const Element& e) const override {
    return !e.is_aux() && e.holds<Graph>() && e.get<Graph>().vertex_count >= 1 &&
           well_formed(e);
  }

  std::uint64_t size_of(const Element& e) const override {
    return require_member_size(
        e, contains(e),
        e.holds<Graph>() ? static_cast<std::uint64_t>(e.get<Graph>().vertex_count) : 0);
  }

  bool enumerable() const override { return true; }

  std::uint64_t sphere_cardinality(std::uint64_t n) const override {
    if (n == 0) return 0;
    const std::uint64_t pairs = n * (n - 1) / 2;
    if (pairs >= 64) throw OverflowError("graph sphere count exceeds 64 bits");
    return std::uint64_t{1} << pairs;
  }

  void for_each_in_sphere(std::uint64_t n, const std::function<void(const Element&)>& fn,
                          std::uint64_t cap = kDefaultEnumerationCap) const override {
    if (n == 0) return;
    check_cap(n, cap);
    std::vector<std::pair<int, int>> pair_order;
    for (int v = 2; v <= static_cast<int>(n); ++v)
      for (int u = 1; u < v; ++u) pair_order.emplace_back(u, v);
    const std::uint64_t total = sphere_cardinality(n);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      std::vector<std::pair<int, int>> edges;
      for (std::size_t k = 0; k < pair_order.size(); ++k)
        if (mask & (std::uint64_t{1} << k)) edges.push_back(pair_order[k]);
      fn(Element::graph(static_cast<int>(n), std::move(edges)));
    }
  }
};

/// Permutations of {1..n}; size = n. Sphere n is enumerated in lexicographic
/// image order.
class PermutationDomain : public Domain {
 public:
  PermutationDomain() : Domain("permutation") {}

  bool contains(const Element& e) const override {
    return !e.is_aux() && e.holds<Permutation>() &&
           !e.get<Permutation>().images.empty() && well_formed(e);
  }

  std::uint64_t size_of(const Element& e) const override {
    return require_member_size(
        e, contains(e),
        e.holds<Permutation>() ? e.get<Permutation>().images.size() : 0);
  }

  bool enumerable() const override { return true; }

  std::uint64_t sphere_cardinality(std::uint64_t n) const override {
    if (n == 0) return 0;
    std::uint64_t f = 1;
    for (std::uint64_t k = 2; k <= n; ++k) f = detail::checked_mul(f, k);
    return f;
  }

  void for_each_in_sphere(std::uint64_t n, const std::function<void(const Element&)>& fn,
                          std::uint64_t cap = kDefaultEnumerationCap) const override {
    if (n == 0) return;
    check_cap(n, cap);
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 1);
    do {
      fn(Element::permutation(images));
    } while (std::next_permutation(images.begin(), images.end()));
  }
};

/// A named decidable predicate over a domain's elements. Predicates must be
/// total: they return a boolean for every member element and never diverge.
struct SubsetSpec {
  std::string name;
  std::function<bool(const Element&)> predicate;
};

inline std::string plain_alphabet(int m) {
  if (m < 2 || m > 26)
    throw std::invalid_argument("word: alphabet size must be in [2, 26]");
  return std::string("abcdefghijklmnopqrstuvwxyz").substr(0, static_cast<std::size_t>(m));
}

/// Alphabet for words over {t, b_1..b_m}^{+-1}: stable letter pair first,
/// then m generator pairs from 'b' on. Order: t, T, b, B, c, C, ...
inline std::string stable_letter_alphabet(int m) {
  if (m < 1 || m > 18)
    throw std::invalid_argument("hnn-word: generator count must be in [1, 18]");
  std::string a = "tT";
  for (int i = 0; i < m; ++i) {
    a += static_cast<char>('b' + i);
    a += static_cast<char>('B' + i);
  }
  return a;
}

inline std::shared_ptr<const WordDomain> make_word_domain(int m) {
  return std::make_shared<WordDomain>("word(m=" + std::to_string(m) + ")",
                                      plain_alphabet(m));
}

inline std::shared_ptr<const WordDomain> make_hnn_word_domain(int m) {
  return std::make_shared<WordDomain>("hnn-word(m=" + std::to_string(m) + ")",
                                      stable_letter_alphabet(m));
}

}  // namespace genericase
