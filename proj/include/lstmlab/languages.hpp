#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lstmlab {

/// The three studied languages: a^n b^n (context-free), a^n b^n c^n and
/// a^n b^n c^n d^n (strictly context-sensitive).
enum class LanguageId : std::uint8_t { AnBn, AnBnCn, AnBnCnDn };

/// Alphabet. End is the termination symbol and never appears in inputs.
enum class Symbol : std::uint8_t { A = 0, B = 1, C = 2, D = 3, End = 4 };

constexpr int kSymbolCount = 5;

/// Subset of the output vocabulary, stored as a bitmask in canonical
/// symbol order (a, b, c, d, End).
class SymbolSet {
 public:
  constexpr SymbolSet() = default;
  constexpr SymbolSet(std::initializer_list<Symbol> symbols) {
    for (Symbol s : symbols) insert(s);
  }

  constexpr void insert(Symbol s) { bits_ |= mask(s); }
  constexpr bool contains(Symbol s) const { return (bits_ & mask(s)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const {
    int n = 0;
    for (int i = 0; i < kSymbolCount; ++i) n += (bits_ >> i) & 1;
    return n;
  }
  constexpr bool operator==(const SymbolSet&) const = default;

  /// Members in canonical order.
  std::vector<Symbol> members() const;

 private:
  static constexpr std::uint8_t mask(Symbol s) {
    return static_cast<std::uint8_t>(1u << static_cast<std::uint8_t>(s));
  }
  std::uint8_t bits_ = 0;
};

/// One generated string with its per-position sets of legal next symbols.
struct Sample {
  LanguageId language = LanguageId::AnBn;
  int n = 0;
  std::vector<Symbol> input;
  std::vector<SymbolSet> targets;
};

/// Input vocabulary in canonical order: (a, b), (a, b, c) or (a, b, c, d).
std::vector<Symbol> input_vocab(LanguageId lang);

/// Input vocabulary followed by the termination symbol.
std::vector<Symbol> output_vocab(LanguageId lang);

/// Input vocabulary size d: 2, 3 or 4.
int input_dim(LanguageId lang);

/// Output vocabulary size d + 1.
int output_dim(LanguageId lang);

/// Language whose input vocabulary has the given size. Rejects sizes
/// outside {2, 3, 4}.
LanguageId language_for_input_dim(int d);

/// Characters consumed by the parameter-n member: 2n, 3n or 4n.
int sequence_length(LanguageId lang, int n);

/// Builds the input string a^n b^n [c^n [d^n]] together with the
/// deterministic target scheme
///   (a/b)^n b^{n-1} ⊣            for a^n b^n
///   (a/b)^n b^{n-1} c^n ⊣        for a^n b^n c^n
///   (a/b)^n b^{n-1} c^n d^n ⊣    for a^n b^n c^n d^n
/// Rejects n < 1.
Sample generate_sample(LanguageId lang, int n);

std::string to_string(LanguageId lang);
std::string to_string(Symbol s);

/// Slash-joined rendering in canonical order: {a,b} -> "a/b"; the empty
/// set renders as "{}".
std::string to_string(const SymbolSet& set);

/// Parses the names used on the command line: anbn, anbncn, anbncndn.
LanguageId parse_language(const std::string& name);

/// One-line dump: input characters, a tab, then space-separated target
/// sets (Table-style notation, e.g. "aabb\ta/b a/b b ⊣").
std::string dump_sample(const Sample& sample);

}  // namespace lstmlab
