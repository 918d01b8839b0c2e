#ifndef SCRIPTFORGE_CORPUS_H_
#define SCRIPTFORGE_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace scriptforge {

// Interned grapheme id; spellings live in the corpus Alphabet.
using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;
using Sentence = std::vector<Word>;

// Grapheme spelling table. Spellings are non-empty and whitespace-free.
class Alphabet {
 public:
  Symbol Intern(std::string_view grapheme);
  std::optional<Symbol> Find(std::string_view grapheme) const;
  const std::string& Spelling(Symbol symbol) const {
    return spellings_.at(symbol);
  }
  std::size_t size() const { return spellings_.size(); }

 private:
  std::vector<std::string> spellings_;
  std::unordered_map<std::string, Symbol> index_;
};

enum class StorageOrder { kLogicalLtr, kLogicalRtl };
enum class Tokenization { kEvaLongestMatch, kCharacter };

std::string_view StorageOrderName(StorageOrder order);
std::string_view TokenizationName(Tokenization scheme);

// Immutable once built; transforms return new corpora sharing the alphabet.
struct Corpus {
  std::string name;
  std::shared_ptr<const Alphabet> alphabet;
  std::vector<Sentence> sentences;
  StorageOrder storage_order = StorageOrder::kLogicalLtr;
  Tokenization tokenization = Tokenization::kCharacter;

  std::size_t WordCount() const;
  std::size_t TransitionCount() const;
  // Spelling of a word with graphemes concatenated.
  std::string Spell(const Word& word) const;
};

class GraphemeInventory {
 public:
  explicit GraphemeInventory(std::vector<std::string> entries);

  // One grapheme per line; '#' starts a comment; blank lines are ignored.
  static GraphemeInventory Load(const std::filesystem::path& path);

  bool Contains(std::string_view entry) const {
    return entries_.contains(std::string(entry));
  }
  const std::unordered_set<std::string>& entries() const { return entries_; }
  // Longest entry, in code points.
  std::size_t max_len() const { return max_len_; }
  std::size_t max_bytes() const { return max_bytes_; }

 private:
  std::unordered_set<std::string> entries_;
  std::size_t max_len_ = 0;
  std::size_t max_bytes_ = 0;
};

// Greedy longest-match segmentation. Throws TokenizationFailure.
std::vector<std::string> TokenizeEva(std::string_view raw_word,
                                     const GraphemeInventory& inventory);

// One grapheme per Unicode code point. Throws Error(kInvalidUtf8).
std::vector<std::string> TokenizeChars(std::string_view raw_word);

// Removes Hebrew points and Arabic harakat so vocalized and unvocalized
// spellings share graphemes.
std::string StripSemiticMarks(std::string_view text);

// Incremental construction with interning. Words given as grapheme lists.
class CorpusBuilder {
 public:
  CorpusBuilder(std::string name, Tokenization scheme,
                StorageOrder order = StorageOrder::kLogicalLtr);

  void AddSentence(const std::vector<std::vector<std::string>>& words);
  // Tokenizes raw words with the inventory (EVA) or per code point; words
  // that fail tokenization are dropped and counted.
  void AddRawSentence(const std::vector<std::string>& raw_words,
                      const GraphemeInventory* inventory);

  std::size_t dropped_words() const { return dropped_words_; }
  std::size_t sentence_count() const { return sentences_.size(); }
  // Throws Error(kEmptyCorpus) when no sentence was added.
  Corpus Build() &&;

 private:
  std::string name_;
  Tokenization scheme_;
  StorageOrder order_;
  std::shared_ptr<Alphabet> alphabet_;
  std::vector<Sentence> sentences_;
  std::size_t dropped_words_ = 0;
};

struct LoadOptions {
  Tokenization scheme = Tokenization::kCharacter;
  StorageOrder storage_order = StorageOrder::kLogicalLtr;
  const GraphemeInventory* inventory = nullptr;  // required for EVA
  bool strip_semitic_marks = true;               // character scheme only
  std::string name;                              // defaults to file stem
};

struct LoadResult {
  Corpus corpus;
  std::size_t dropped_words = 0;
};

// One sentence per line, words separated by ASCII whitespace.
LoadResult LoadCorpus(const std::filesystem::path& path,
                      const LoadOptions& options);
LoadResult ParseCorpus(std::string_view text, const LoadOptions& options);

// Writes the loader's format: graphemes concatenated, one sentence per line.
std::string FormatCorpus(const Corpus& corpus);

// Reverses word order for corpora stored in logical RTL order and marks the
// result LTR. Throws Error(kWrongStorageOrder) for LTR input.
Corpus VisualTransform(const Corpus& corpus);

// Uniform within-sentence permutation of words, seeded.
Corpus ShuffleWords(const Corpus& corpus, std::uint64_t seed);

// Word order reversed within each sentence; word internals untouched.
Corpus ReverseWords(const Corpus& corpus);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_CORPUS_H_
