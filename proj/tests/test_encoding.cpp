#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "lstmlab/encoding.hpp"

using namespace lstmlab;

TEST_CASE("input encoding is one-hot in canonical order") {
  CHECK(encode_input(LanguageId::AnBn, Symbol::A) == Vector{1.0, 0.0});
  CHECK(encode_input(LanguageId::AnBnCn, Symbol::C) == Vector{0.0, 0.0, 1.0});
  CHECK_THROWS_AS(encode_input(LanguageId::AnBn, Symbol::End), std::invalid_argument);
  CHECK_THROWS_AS(encode_input(LanguageId::AnBn, Symbol::C), std::invalid_argument);
}

TEST_CASE("target encoding is k-hot") {
  CHECK(encode_target(LanguageId::AnBn, SymbolSet{Symbol::A, Symbol::B}) ==
        Vector{1.0, 1.0, 0.0});
  CHECK(encode_target(LanguageId::AnBn, SymbolSet{Symbol::End}) == Vector{0.0, 0.0, 1.0});
  CHECK(encode_target(LanguageId::AnBnCnDn, SymbolSet{Symbol::D}) ==
        Vector{0.0, 0.0, 0.0, 1.0, 0.0});
  CHECK_THROWS_AS(encode_target(LanguageId::AnBn, SymbolSet{}), std::invalid_argument);
  CHECK_THROWS_AS(encode_target(LanguageId::AnBn, SymbolSet{Symbol::C}),
                  std::invalid_argument);
}

TEST_CASE("decoding thresholds strictly at 0.5") {
  CHECK(decode_prediction(LanguageId::AnBn, {0.6, 0.4, 0.7}) ==
        SymbolSet{Symbol::A, Symbol::End});
  CHECK(decode_prediction(LanguageId::AnBn, {0.5, 0.5, 0.5}) == SymbolSet{});
  CHECK(decode_prediction(LanguageId::AnBnCn, {0.9, 0.8, 0.1, 0.2}) ==
        SymbolSet{Symbol::A, Symbol::B});
  CHECK_THROWS_AS(decode_prediction(LanguageId::AnBn, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("encode/decode round trip over every non-empty output set") {
  for (LanguageId lang : {LanguageId::AnBn, LanguageId::AnBnCn, LanguageId::AnBnCnDn}) {
    const std::vector<Symbol> vocab = output_vocab(lang);
    const int subsets = 1 << vocab.size();
    for (int mask = 1; mask < subsets; ++mask) {
      SymbolSet set;
      for (std::size_t i = 0; i < vocab.size(); ++i)
        if (mask & (1 << i)) set.insert(vocab[i]);
      CHECK(decode_prediction(lang, encode_target(lang, set)) == set);
    }
  }
}

TEST_CASE("input vectors are orthonormal") {
  for (LanguageId lang : {LanguageId::AnBn, LanguageId::AnBnCn, LanguageId::AnBnCnDn}) {
    const std::vector<Symbol> vocab = input_vocab(lang);
    for (Symbol a : vocab) {
      for (Symbol b : vocab) {
        const Vector va = encode_input(lang, a);
        const Vector vb = encode_input(lang, b);
        double dot = 0.0;
        for (std::size_t i = 0; i < va.size(); ++i) dot += va[i] * vb[i];
        CHECK(dot == (a == b ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("acceptance requires per-position set equality") {
  const Sample sample = generate_sample(LanguageId::AnBn, 3);
  CHECK(sample_accepted(sample.targets, sample.targets));

  std::vector<SymbolSet> missing = sample.targets;
  missing[0] = SymbolSet{Symbol::A};  // target is {a, b}
  CHECK_FALSE(sample_accepted(missing, sample.targets));

  std::vector<SymbolSet> superset = sample.targets;
  superset[1].insert(Symbol::End);
  CHECK_FALSE(sample_accepted(superset, sample.targets));

  std::vector<SymbolSet> short_seq(sample.targets.begin(), sample.targets.end() - 1);
  CHECK_THROWS_AS(sample_accepted(short_seq, sample.targets), std::invalid_argument);
}
