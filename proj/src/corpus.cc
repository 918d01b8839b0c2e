#include "scriptforge/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "scriptforge/errors.h"
#include "scriptforge/random.h"

namespace scriptforge {
namespace {

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Length in bytes of the UTF-8 sequence starting at text[pos], or 0 when the
// bytes there are not a well-formed sequence.
std::size_t Utf8SequenceLength(std::string_view text, std::size_t pos,
                               char32_t* code_point) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  std::size_t len;
  char32_t cp;
  if (lead < 0x80) {
    *code_point = lead;
    return 1;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return 0;
  }
  if (pos + len > text.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    if ((byte(pos + i) & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (byte(pos + i) & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return 0;
  }
  *code_point = cp;
  return len;
}

std::size_t CodePointCount(std::string_view text) {
  std::size_t count = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++count;
  }
  return count;
}

bool IsSemiticMark(char32_t cp) {
  return (cp >= 0x0591 && cp <= 0x05BD) || cp == 0x05BF ||
         (cp >= 0x05C1 && cp <= 0x05C2) || (cp >= 0x05C4 && cp <= 0x05C5) ||
         cp == 0x05C7 || (cp >= 0x0610 && cp <= 0x061A) ||
         (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670 ||
         (cp >= 0x06D6 && cp <= 0x06DC) || (cp >= 0x06DF && cp <= 0x06E4) ||
         (cp >= 0x06E7 && cp <= 0x06E8) || (cp >= 0x06EA && cp <= 0x06ED);
}

std::vector<std::string> SplitWords(std::string_view line) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsAsciiSpace(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !IsAsciiSpace(line[i])) ++i;
    if (i > start) words.emplace_back(line.substr(start, i - start));
  }
  return words;
}

}  // namespace

Symbol Alphabet::Intern(std::string_view grapheme) {
  if (grapheme.empty() ||
      std::any_of(grapheme.begin(), grapheme.end(), IsAsciiSpace)) {
    throw Error(ErrorCode::kInvalidArgument,
                "grapheme must be non-empty and whitespace-free");
  }
  auto it = index_.find(std::string(grapheme));
  if (it != index_.end()) return it->second;
  const auto symbol = static_cast<Symbol>(spellings_.size());
  spellings_.emplace_back(grapheme);
  index_.emplace(spellings_.back(), symbol);
  return symbol;
}

std::optional<Symbol> Alphabet::Find(std::string_view grapheme) const {
  auto it = index_.find(std::string(grapheme));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string_view StorageOrderName(StorageOrder order) {
  return order == StorageOrder::kLogicalLtr ? "logical-LTR" : "logical-RTL";
}

std::string_view TokenizationName(Tokenization scheme) {
  return scheme == Tokenization::kEvaLongestMatch ? "eva-longest-match"
                                                  : "character";
}

std::size_t Corpus::WordCount() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

std::size_t Corpus::TransitionCount() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size() - 1;
  return n;
}

std::string Corpus::Spell(const Word& word) const {
  std::string out;
  for (Symbol g : word) out += alphabet->Spelling(g);
  return out;
}

GraphemeInventory::GraphemeInventory(std::vector<std::string> entries) {
  for (auto& e : entries) {
    if (e.empty() || std::any_of(e.begin(), e.end(), IsAsciiSpace)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "inventory entries must be non-empty and whitespace-free");
    }
    max_len_ = std::max(max_len_, CodePointCount(e));
    max_bytes_ = std::max(max_bytes_, e.size());
    entries_.insert(std::move(e));
  }
  if (entries_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "inventory is empty");
  }
}

GraphemeInventory GraphemeInventory::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoFailure,
                "cannot open inventory " + path.string());
  }
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    for (auto& w : SplitWords(line)) entries.push_back(std::move(w));
  }
  return GraphemeInventory(std::move(entries));
}

std::vector<std::string> TokenizeEva(std::string_view raw_word,
                                     const GraphemeInventory& inventory) {
  if (raw_word.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot tokenize an empty word");
  }
  std::vector<std::string> graphemes;
  std::size_t pos = 0;
  std::string candidate;
  while (pos < raw_word.size()) {
    std::size_t take = 0;
    const std::size_t longest =
        std::min(inventory.max_bytes(), raw_word.size() - pos);
    for (std::size_t len = longest; len > 0; --len) {
      candidate.assign(raw_word.substr(pos, len));
      if (inventory.Contains(candidate)) {
        take = len;
        break;
      }
    }
    if (take == 0) {
      throw TokenizationFailure(std::string(raw_word),
                                CodePointCount(raw_word.substr(0, pos)));
    }
    graphemes.emplace_back(raw_word.substr(pos, take));
    pos += take;
  }
  return graphemes;
}

std::vector<std::string> TokenizeChars(std::string_view raw_word) {
  std::vector<std::string> graphemes;
  std::size_t pos = 0;
  while (pos < raw_word.size()) {
    char32_t cp;
    const std::size_t len = Utf8SequenceLength(raw_word, pos, &cp);
    if (len == 0) {
      throw Error(ErrorCode::kInvalidUtf8,
                  "malformed UTF-8 in \"" + std::string(raw_word) + "\"");
    }
    graphemes.emplace_back(raw_word.substr(pos, len));
    pos += len;
  }
  return graphemes;
}

std::string StripSemiticMarks(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp;
    std::size_t len = Utf8SequenceLength(text, pos, &cp);
    if (len == 0) {
      len = 1;
      cp = 0;
    }
    if (!IsSemiticMark(cp)) out.append(text.substr(pos, len));
    pos += len;
  }
  return out;
}

CorpusBuilder::CorpusBuilder(std::string name, Tokenization scheme,
                             StorageOrder order)
    : name_(std::move(name)),
      scheme_(scheme),
      order_(order),
      alphabet_(std::make_shared<Alphabet>()) {}

void CorpusBuilder::AddSentence(
    const std::vector<std::vector<std::string>>& words) {
  Sentence sentence;
  sentence.reserve(words.size());
  for (const auto& graphemes : words) {
    if (graphemes.empty()) continue;
    Word word;
    word.reserve(graphemes.size());
    for (const auto& g : graphemes) word.push_back(alphabet_->Intern(g));
    sentence.push_back(std::move(word));
  }
  if (!sentence.empty()) sentences_.push_back(std::move(sentence));
}

void CorpusBuilder::AddRawSentence(const std::vector<std::string>& raw_words,
                                   const GraphemeInventory* inventory) {
  std::vector<std::vector<std::string>> words;
  words.reserve(raw_words.size());
  for (const auto& raw : raw_words) {
    if (raw.empty()) continue;
    if (scheme_ == Tokenization::kEvaLongestMatch) {
      if (inventory == nullptr) {
        throw Error(ErrorCode::kInvalidArgument,
                    "EVA tokenization requires an inventory");
      }
      try {
        words.push_back(TokenizeEva(raw, *inventory));
      } catch (const TokenizationFailure&) {
        ++dropped_words_;
      }
    } else {
      words.push_back(TokenizeChars(raw));
    }
  }
  AddSentence(words);
}

Corpus CorpusBuilder::Build() && {
  if (sentences_.empty()) {
    throw Error(ErrorCode::kEmptyCorpus,
                "corpus \"" + name_ + "\" has no sentences");
  }
  Corpus corpus;
  corpus.name = std::move(name_);
  corpus.alphabet = std::move(alphabet_);
  corpus.sentences = std::move(sentences_);
  corpus.storage_order = order_;
  corpus.tokenization = scheme_;
  return corpus;
}

LoadResult ParseCorpus(std::string_view text, const LoadOptions& options) {
  CorpusBuilder builder(options.name, options.scheme, options.storage_order);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    std::vector<std::string> words;
    if (options.scheme == Tokenization::kCharacter &&
        options.strip_semitic_marks) {
      words = SplitWords(StripSemiticMarks(line));
    } else {
      words = SplitWords(line);
    }
    if (!words.empty()) builder.AddRawSentence(words, options.inventory);
    pos = end + 1;
  }
  LoadResult result{.corpus = {}, .dropped_words = builder.dropped_words()};
  result.corpus = std::move(builder).Build();
  return result;
}

LoadResult LoadCorpus(const std::filesystem::path& path,
                      const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open corpus " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::kIoFailure, "cannot read corpus " + path.string());
  }
  LoadOptions named = options;
  if (named.name.empty()) named.name = path.stem().string();
  return ParseCorpus(buffer.str(), named);
}

std::string FormatCorpus(const Corpus& corpus) {
  std::string out;
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i > 0) out += ' ';
      out += corpus.Spell(sentence[i]);
    }
    out += '\n';
  }
  return out;
}

Corpus VisualTransform(const Corpus& corpus) {
  if (corpus.storage_order != StorageOrder::kLogicalRtl) {
    throw Error(ErrorCode::kWrongStorageOrder,
                "visual transform applies to logical-RTL corpora only");
  }
  Corpus out = ReverseWords(corpus);
  out.storage_order = StorageOrder::kLogicalLtr;
  return out;
}

Corpus ShuffleWords(const Corpus& corpus, std::uint64_t seed) {
  Corpus out = corpus;
  Rng rng(seed);
  for (auto& sentence : out.sentences) {
    rng.Shuffle(std::span<Word>(sentence));
  }
  return out;
}

Corpus ReverseWords(const Corpus& corpus) {
  Corpus out = corpus;
  for (auto& sentence : out.sentences) {
    std::reverse(sentence.begin(), sentence.end());
  }
  return out;
}

}  // namespace scriptforge
