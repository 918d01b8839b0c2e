#ifndef SCRIPTFORGE_TESTS_TEST_UTIL_H_
#define SCRIPTFORGE_TESTS_TEST_UTIL_H_

#include <optional>
#include <string>
#include <vector>

#include "scriptforge/corpus.h"
#include "scriptforge/errors.h"
#include "scriptforge/random.h"

namespace scriptforge::testing {

// Character-scheme corpus from raw word strings, one inner list per sentence.
inline Corpus MakeCorpus(const std::vector<std::vector<std::string>>& sentences,
                         const std::string& name = "test") {
  CorpusBuilder builder(name, Tokenization::kCharacter);
  for (const auto& s : sentences) builder.AddRawSentence(s, nullptr);
  return std::move(builder).Build();
}

// Random corpus over the first `symbols` lowercase letters.
inline Corpus RandomCorpus(Rng& rng, int sentences, int max_words,
                           int max_len, int symbols) {
  std::vector<std::vector<std::string>> out;
  for (int s = 0; s < sentences; ++s) {
    std::vector<std::string> words;
    const int n = 1 + static_cast<int>(rng.UniformIndex(static_cast<std::size_t>(max_words)));
    for (int w = 0; w < n; ++w) {
      std::string word;
      const int len = 1 + static_cast<int>(rng.UniformIndex(static_cast<std::size_t>(max_len)));
      for (int i = 0; i < len; ++i) {
        word.push_back(static_cast<char>('a' + rng.UniformIndex(static_cast<std::size_t>(symbols))));
      }
      words.push_back(word);
    }
    out.push_back(words);
  }
  return MakeCorpus(out);
}

inline std::vector<std::string> Spell(const Corpus& c, const Sentence& s) {
  std::vector<std::string> out;
  for (const auto& w : s) out.push_back(c.Spell(w));
  return out;
}

// Code of the scriptforge::Error thrown by `fn`, or nullopt if none.
template <typename Fn>
std::optional<ErrorCode> ErrorOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace scriptforge::testing

#endif  // SCRIPTFORGE_TESTS_TEST_UTIL_H_
