#include <doctest.h>

#include <stdexcept>

#include "lstmlab/languages.hpp"
#include "support/oracle.hpp"

using namespace lstmlab;

TEST_CASE("input vocabularies are a, b[, c[, d]]") {
  CHECK(input_vocab(LanguageId::AnBn) == std::vector<Symbol>{Symbol::A, Symbol::B});
  CHECK(input_vocab(LanguageId::AnBnCn) ==
        std::vector<Symbol>{Symbol::A, Symbol::B, Symbol::C});
  CHECK(input_vocab(LanguageId::AnBnCnDn) ==
        std::vector<Symbol>{Symbol::A, Symbol::B, Symbol::C, Symbol::D});
}

TEST_CASE("output vocabulary appends the terminator") {
  CHECK(output_vocab(LanguageId::AnBn) ==
        std::vector<Symbol>{Symbol::A, Symbol::B, Symbol::End});
  CHECK(output_vocab(LanguageId::AnBnCn) ==
        std::vector<Symbol>{Symbol::A, Symbol::B, Symbol::C, Symbol::End});
  CHECK(output_vocab(LanguageId::AnBnCnDn) ==
        std::vector<Symbol>{Symbol::A, Symbol::B, Symbol::C, Symbol::D, Symbol::End});
  CHECK(output_dim(LanguageId::AnBn) == 3);
  CHECK(output_dim(LanguageId::AnBnCnDn) == 5);
}

TEST_CASE("sequence lengths are 2n, 3n, 4n") {
  CHECK(sequence_length(LanguageId::AnBn, 5) == 10);
  CHECK(sequence_length(LanguageId::AnBnCn, 5) == 15);
  CHECK(sequence_length(LanguageId::AnBnCnDn, 5) == 20);
}

TEST_CASE("tabular examples for n = 2") {
  const Sample anbn = generate_sample(LanguageId::AnBn, 2);
  CHECK(anbn.input == std::vector<Symbol>{Symbol::A, Symbol::A, Symbol::B, Symbol::B});
  CHECK(anbn.targets == std::vector<SymbolSet>{SymbolSet{Symbol::A, Symbol::B},
                                               SymbolSet{Symbol::A, Symbol::B},
                                               SymbolSet{Symbol::B},
                                               SymbolSet{Symbol::End}});

  const Sample anbncn = generate_sample(LanguageId::AnBnCn, 2);
  CHECK(anbncn.input == std::vector<Symbol>{Symbol::A, Symbol::A, Symbol::B, Symbol::B,
                                            Symbol::C, Symbol::C});
  CHECK(anbncn.targets == std::vector<SymbolSet>{SymbolSet{Symbol::A, Symbol::B},
                                                 SymbolSet{Symbol::A, Symbol::B},
                                                 SymbolSet{Symbol::B},
                                                 SymbolSet{Symbol::C},
                                                 SymbolSet{Symbol::C},
                                                 SymbolSet{Symbol::End}});
}

TEST_CASE("n = 1 keeps the a/b first position and drops the lone-b run") {
  const Sample s = generate_sample(LanguageId::AnBn, 1);
  CHECK(s.input == std::vector<Symbol>{Symbol::A, Symbol::B});
  CHECK(s.targets ==
        std::vector<SymbolSet>{SymbolSet{Symbol::A, Symbol::B}, SymbolSet{Symbol::End}});
}

TEST_CASE("generate_sample rejects n < 1") {
  CHECK_THROWS_AS(generate_sample(LanguageId::AnBn, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_sample(LanguageId::AnBnCn, -3), std::invalid_argument);
}

TEST_CASE("generate_sample is deterministic") {
  const Sample a = generate_sample(LanguageId::AnBnCnDn, 7);
  const Sample b = generate_sample(LanguageId::AnBnCnDn, 7);
  CHECK(a.input == b.input);
  CHECK(a.targets == b.targets);
}

TEST_CASE("targets equal the brute-force legal-continuation oracle for n <= 25") {
  for (LanguageId lang : {LanguageId::AnBn, LanguageId::AnBnCn, LanguageId::AnBnCnDn}) {
    for (int n = 1; n <= 25; ++n) {
      const Sample sample = generate_sample(lang, n);
      const std::vector<SymbolSet> expected = testing::oracle_targets(lang, n);
      REQUIRE(sample.targets.size() == expected.size());
      CHECK(sample.targets == expected);
    }
  }
}

TEST_CASE("only n >= 2 produces a position whose target is exactly {b}") {
  const SymbolSet lone_b{Symbol::B};
  for (LanguageId lang : {LanguageId::AnBn, LanguageId::AnBnCn, LanguageId::AnBnCnDn}) {
    for (int n = 1; n <= 6; ++n) {
      const Sample sample = generate_sample(lang, n);
      int count = 0;
      for (const SymbolSet& t : sample.targets)
        if (t == lone_b) ++count;
      if (n == 1) CHECK(count == 0);
      else CHECK(count == n - 1);
    }
  }
}

TEST_CASE("sample dump uses tab plus slash-joined sets") {
  CHECK(dump_sample(generate_sample(LanguageId::AnBn, 2)) ==
        "aabb\ta/b a/b b ⊣");
  CHECK(dump_sample(generate_sample(LanguageId::AnBnCn, 2)) ==
        "aabbcc\ta/b a/b b c c ⊣");
}

TEST_CASE("symbol set rendering") {
  CHECK(to_string(SymbolSet{}) == "{}");
  CHECK(to_string(SymbolSet{Symbol::B, Symbol::A}) == "a/b");
  CHECK(to_string(SymbolSet{Symbol::End}) == "⊣");
  CHECK(SymbolSet{Symbol::A, Symbol::B}.size() == 2);
  CHECK(SymbolSet{}.empty());
}

TEST_CASE("language name parsing") {
  CHECK(parse_language("anbncndn") == LanguageId::AnBnCnDn);
  CHECK_THROWS_AS(parse_language("abc"), std::invalid_argument);
  CHECK(language_for_input_dim(3) == LanguageId::AnBnCn);
  CHECK_THROWS_AS(language_for_input_dim(5), std::invalid_argument);
}
