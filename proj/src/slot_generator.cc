#include "scriptforge/slot_generator.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_set>

#include "scriptforge/errors.h"
#include "scriptforge/random.h"

namespace scriptforge {
namespace {

constexpr std::pair<SlotAblation, std::string_view> kAblationNames[] = {
    {SlotAblation::kBaseline, "baseline"},
    {SlotAblation::kNoBridge, "no_bridge"},
    {SlotAblation::kWideBridge, "wide_bridge"},
    {SlotAblation::kRandomOrder, "random_order"},
    {SlotAblation::kSinglePool, "single_pool"},
    {SlotAblation::kOverlappingPool, "overlapping_pool"},
    {SlotAblation::kNoBoundaryPairs, "no_boundary_pairs"},
    {SlotAblation::kDenseMarkov, "dense_markov"},
    {SlotAblation::kUniformZipf, "uniform_zipf"},
    {SlotAblation::kNearMiss, "near_miss"},
    {SlotAblation::kAgglutinativeMimic, "agglutinative_mimic"},
    {SlotAblation::kTemplaticMimic, "templatic_mimic"},
};

std::vector<std::string> Union(
    std::initializer_list<const std::vector<std::string>*> pools) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto* pool : pools) {
    for (const auto& g : *pool) {
      if (seen.insert(g).second) out.push_back(g);
    }
  }
  return out;
}

// Slot pools after bridge insertion and overlap, in rank order.
std::vector<std::vector<std::string>> ResolveSlots(const SlotConfig& config) {
  std::vector<std::vector<std::string>> slots;
  for (const auto& pool : config.prefix_slots) slots.push_back(pool);
  for (const auto& pool : config.suffix_slots) slots.push_back(pool);
  if (slots.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "slot generator needs at least one slot");
  }
  for (const auto& pool : slots) {
    if (pool.empty()) throw Error(ErrorCode::kInvalidConfig, "empty slot pool");
  }
  if (config.prefix_slots.empty() || config.suffix_slots.empty()) return slots;

  auto& initial = slots.front();
  auto& final = slots.back();
  const auto own_initial = initial;
  const auto own_final = final;

  auto append_from = [](std::vector<std::string>& pool,
                        const std::vector<std::string>& source,
                        std::size_t count) {
    for (std::size_t i = 0; i < count && i < source.size(); ++i) {
      if (std::find(pool.begin(), pool.end(), source[i]) == pool.end()) {
        pool.push_back(source[i]);
      }
    }
  };
  const double f = config.pool_overlap;
  append_from(final, own_initial,
              static_cast<std::size_t>(std::lround(f * own_initial.size())));
  append_from(initial, own_final,
              static_cast<std::size_t>(std::lround(f * own_final.size())));

  const std::size_t bridge = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(config.bridge_zone, 0)),
      config.bridge_pool.size());
  auto insert_bridge = [&](std::vector<std::string>& pool) {
    std::size_t at = static_cast<std::size_t>(std::max(config.bridge_rank, 1) - 1);
    for (std::size_t i = 0; i < bridge; ++i) {
      const auto& g = config.bridge_pool[i];
      if (std::find(pool.begin(), pool.end(), g) != pool.end()) continue;
      pool.insert(pool.begin() + static_cast<std::ptrdiff_t>(std::min(at, pool.size())), g);
      ++at;
    }
  };
  insert_bridge(initial);
  insert_bridge(final);
  return slots;
}

// Preferred (final, initial) pairs: cycles through the final pool in rank
// order, pairing each with a seed-permuted initial grapheme. Bridge graphemes
// are excluded, so preferences favour end-class to start-class transitions.
std::set<std::pair<std::string, std::string>> PreferredPairs(
    const SlotConfig& config, const std::vector<std::string>& initial,
    const std::vector<std::string>& final, std::uint64_t seed) {
  std::set<std::string> bridge(config.bridge_pool.begin(),
                               config.bridge_pool.begin() +
                                   std::min<std::ptrdiff_t>(
                                       std::max(config.bridge_zone, 0),
                                       static_cast<std::ptrdiff_t>(config.bridge_pool.size())));
  std::vector<std::string> finals, initials;
  for (const auto& g : final) {
    if (!bridge.contains(g)) finals.push_back(g);
  }
  for (const auto& g : initial) {
    if (!bridge.contains(g)) initials.push_back(g);
  }
  std::set<std::pair<std::string, std::string>> pairs;
  if (finals.empty() || initials.empty() || config.preferred_pairs <= 0) {
    return pairs;
  }
  Rng rng(DeriveSeed(seed, 0x7a11));
  std::vector<std::size_t> perm(initials.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  rng.Shuffle(std::span<std::size_t>(perm));
  const std::size_t limit = std::min<std::size_t>(
      static_cast<std::size_t>(config.preferred_pairs),
      finals.size() * initials.size());
  for (std::size_t i = 0; pairs.size() < limit; ++i) {
    const std::size_t round = i / finals.size();
    const std::size_t j = (perm[i % initials.size()] + round) % initials.size();
    pairs.emplace(finals[i % finals.size()], initials[j]);
  }
  return pairs;
}

struct Lexicon {
  SlotLexicon words;
  std::vector<std::string> spellings;
};

double StandardNormal(Rng& rng) {
  const double u1 = 1.0 - rng.Uniform01();
  const double u2 = rng.Uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Lexicon BuildLexicon(const SlotConfig& config,
                     const std::vector<std::vector<std::string>>& slots,
                     std::uint64_t seed) {
  if (config.vocab_size < 1) {
    throw Error(ErrorCode::kInvalidConfig, "vocab_size must be at least 1");
  }
  if (config.zipf_alpha < 0 || config.word_zipf_alpha < 0) {
    throw Error(ErrorCode::kInvalidConfig, "Zipf exponents must be non-negative");
  }
  const auto vocab = static_cast<std::size_t>(config.vocab_size);
  double combinations = 1.0;
  for (const auto& pool : slots) combinations *= static_cast<double>(pool.size());
  if (combinations < static_cast<double>(vocab)) {
    throw Error(ErrorCode::kPoolExhausted,
                "slot pools allow " + FormatNumber(combinations) +
                    " words, " + std::to_string(vocab) + " requested");
  }

  std::vector<DiscreteSampler> samplers;
  Rng jitter(DeriveSeed(seed, 0x717e));
  for (const auto& pool : slots) {
    auto w = ZipfWeights(pool.size(), config.zipf_alpha);
    if (config.slot_weight_jitter > 0) {
      for (double& x : w) x *= std::exp(config.slot_weight_jitter * StandardNormal(jitter));
    }
    samplers.emplace_back(w);
  }
  Rng rng(DeriveSeed(seed, 0x1e81));
  Lexicon lex;
  std::unordered_set<std::string> seen;
  const std::size_t max_attempts = 2000 * vocab + 100000;
  struct Drawn {
    std::string spelling;
    std::vector<std::string> word;
  };
  std::vector<Drawn> drawn;
  for (std::size_t attempt = 0; drawn.size() < vocab; ++attempt) {
    if (attempt == max_attempts) {
      throw Error(ErrorCode::kPoolExhausted,
                  "could not draw " + std::to_string(vocab) +
                      " distinct words from the slot pools");
    }
    std::vector<std::string> word;
    std::string spelling;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const std::size_t rank = samplers[s].Sample(rng);
      word.push_back(slots[s][rank]);
      spelling += word.back();
    }
    if (!seen.insert(spelling).second) continue;
    drawn.push_back({std::move(spelling), std::move(word)});
  }
  // Word ranks follow draw order.
  for (auto& d : drawn) {
    lex.words.words.push_back(std::move(d.word));
    lex.spellings.push_back(std::move(d.spelling));
  }
  lex.words.weights = ZipfWeights(vocab, config.word_zipf_alpha);
  return lex;
}

// Sparse successor table: each word keeps markov_top_k successors drawn
// without replacement in proportion to weight times pair preference.
struct SuccessorTable {
  std::vector<std::vector<std::size_t>> next;
  std::vector<DiscreteSampler> samplers;
};

SuccessorTable BuildSuccessors(const SlotConfig& config, const SlotLexicon& lex,
                               const std::set<std::pair<std::string, std::string>>& pairs,
                               std::uint64_t seed) {
  if (config.markov_top_k < 1) {
    throw Error(ErrorCode::kInvalidConfig, "markov_top_k must be at least 1");
  }
  const std::size_t n = lex.words.size();
  const std::size_t k = std::min<std::size_t>(
      static_cast<std::size_t>(config.markov_top_k), n);
  SuccessorTable table;
  table.next.resize(n);
  table.samplers.resize(n);
  Rng rng(DeriveSeed(seed, 0x5acc));
  std::vector<double> affinity(n);
  for (std::size_t w = 0; w < n; ++w) {
    const auto& last = lex.words[w].back();
    for (std::size_t v = 0; v < n; ++v) {
      const bool preferred = pairs.contains({last, lex.words[v].front()});
      affinity[v] = lex.weights[v] * (preferred ? config.boundary_pair_strength : 1.0);
    }
    std::vector<std::size_t> chosen;
    if (k == n) {
      chosen.resize(n);
      for (std::size_t v = 0; v < n; ++v) chosen[v] = v;
    } else {
      // Efraimidis-Spirakis keys give weighted sampling without replacement.
      std::vector<std::pair<double, std::size_t>> keys;
      keys.reserve(n);
      for (std::size_t v = 0; v < n; ++v) {
        const double u = std::max(rng.Uniform01(), 1e-300);
        keys.emplace_back(std::log(u) / affinity[v], v);
      }
      std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(k),
                        keys.end(), std::greater<>());
      for (std::size_t i = 0; i < k; ++i) chosen.push_back(keys[i].second);
      std::sort(chosen.begin(), chosen.end());
    }
    std::vector<double> weights(chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) weights[i] = affinity[chosen[i]];
    table.next[w] = std::move(chosen);
    table.samplers[w] = DiscreteSampler(weights);
  }
  return table;
}

}  // namespace

std::string_view SlotAblationName(SlotAblation ablation) {
  for (const auto& [value, name] : kAblationNames) {
    if (value == ablation) return name;
  }
  return "unknown";
}

SlotAblation ParseSlotAblation(std::string_view name) {
  for (const auto& [value, text] : kAblationNames) {
    if (text == name) return value;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown slot ablation '" + std::string(name) + "'");
}

std::vector<SlotAblation> AllSlotAblations() {
  std::vector<SlotAblation> out;
  for (const auto& [value, name] : kAblationNames) out.push_back(value);
  return out;
}

SlotConfig DefaultSlotConfig() {
  SlotConfig config;
  const auto prefix = LoadGraphemeList(DataPath("pools/prefix.txt"));
  const auto suffix = LoadGraphemeList(DataPath("pools/suffix.txt"));
  const auto medial = LoadGraphemeList(DataPath("pools/medial.txt"));
  config.prefix_slots = {prefix, medial};
  config.suffix_slots = {medial, suffix};
  config.bridge_pool = LoadGraphemeList(DataPath("pools/shared.txt"));
  return config;
}

SlotConfig WithAblation(SlotConfig base, SlotAblation ablation) {
  base.ablation = ablation;
  auto& p = base.prefix_slots;
  auto& s = base.suffix_slots;
  switch (ablation) {
    case SlotAblation::kBaseline:
    case SlotAblation::kRandomOrder:
      break;
    case SlotAblation::kNoBridge:
      base.bridge_zone = 0;
      break;
    case SlotAblation::kWideBridge:
      base.bridge_zone = 4;
      break;
    case SlotAblation::kSinglePool: {
      std::vector<const std::vector<std::string>*> all;
      for (const auto& pool : p) all.push_back(&pool);
      for (const auto& pool : s) all.push_back(&pool);
      std::vector<std::string> merged;
      std::set<std::string> seen;
      for (const auto* pool : all) {
        for (const auto& g : *pool) {
          if (seen.insert(g).second) merged.push_back(g);
        }
      }
      for (auto& pool : p) pool = merged;
      for (auto& pool : s) pool = merged;
      base.bridge_zone = 0;
      break;
    }
    case SlotAblation::kOverlappingPool:
      base.pool_overlap = 0.5;
      break;
    case SlotAblation::kNoBoundaryPairs:
      base.boundary_pair_strength = 1.0;
      break;
    case SlotAblation::kDenseMarkov:
      base.markov_top_k = base.vocab_size;
      break;
    case SlotAblation::kUniformZipf:
      base.zipf_alpha = 0.0;
      break;
    case SlotAblation::kNearMiss:
      base.zipf_alpha = 2.0;
      break;
    case SlotAblation::kAgglutinativeMimic:
      // Free stem drawn from every terminal grapheme, then a suffix chain.
      if (!p.empty() && !s.empty()) {
        const auto stem = Union({&p.front(), &s.back(), &base.bridge_pool});
        const auto medial = p.size() > 1 ? p[1] : s.front();
        const auto suffix = s.back();
        p = {stem};
        s = {medial, suffix, suffix};
        base.bridge_zone = 0;
      }
      break;
    case SlotAblation::kTemplaticMimic:
      // Root consonants from one pool at both edges, vocalic pattern inside.
      if (!p.empty() && !s.empty()) {
        const auto root = Union({&p.front(), &s.back()});
        const auto vowels = p.size() > 1 ? p[1] : s.front();
        p = {root, vowels};
        s = {root};
        base.bridge_zone = 0;
      }
      break;
  }
  return base;
}

SlotConfig SlotConfigFromFile(const ConfigFile& file) {
  std::set<std::string> known = {
      "generator",      "ablation",         "bridge_pool",
      "bridge_zone",    "bridge_rank",      "zipf_alpha",
      "word_zipf_alpha", "slot_weight_jitter",
      "vocab_size",     "markov_top_k",     "boundary_pair_strength",
      "preferred_pairs", "pool_overlap",    "n_prefix_slots",
      "n_suffix_slots", "medial_pool"};
  for (const auto& [key, value] : file.Entries()) {
    if (key.starts_with("prefix_slot_") || key.starts_with("suffix_slot_")) {
      known.insert(key);
    }
  }
  file.RequireKnown(known);

  SlotConfig config = DefaultSlotConfig();
  if (file.Has("bridge_pool")) config.bridge_pool = file.GetList("bridge_pool");
  const auto medial = file.Has("medial_pool")
                          ? file.GetList("medial_pool")
                          : LoadGraphemeList(DataPath("pools/medial.txt"));
  const auto n_prefix = file.GetInt("n_prefix_slots",
                                    static_cast<long long>(config.prefix_slots.size()));
  const auto n_suffix = file.GetInt("n_suffix_slots",
                                    static_cast<long long>(config.suffix_slots.size()));
  if (n_prefix < 1 || n_suffix < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                file.source() + ": slot counts must be at least 1");
  }
  // Extra slots are word-internal and draw from the medial pool.
  const auto initial = config.prefix_slots.front();
  const auto final = config.suffix_slots.back();
  config.prefix_slots.assign(static_cast<std::size_t>(n_prefix), medial);
  config.prefix_slots.front() = initial;
  config.suffix_slots.assign(static_cast<std::size_t>(n_suffix), medial);
  config.suffix_slots.back() = final;

  config = WithAblation(std::move(config),
                        ParseSlotAblation(file.GetString("ablation", "baseline")));

  for (std::size_t i = 0; i < config.prefix_slots.size(); ++i) {
    const auto key = "prefix_slot_" + std::to_string(i + 1);
    if (file.Has(key)) config.prefix_slots[i] = file.GetList(key);
  }
  for (std::size_t i = 0; i < config.suffix_slots.size(); ++i) {
    const auto key = "suffix_slot_" + std::to_string(i + 1);
    if (file.Has(key)) config.suffix_slots[i] = file.GetList(key);
  }
  config.bridge_zone = static_cast<int>(file.GetInt("bridge_zone", config.bridge_zone));
  config.bridge_rank = static_cast<int>(file.GetInt("bridge_rank", config.bridge_rank));
  config.zipf_alpha = file.GetDouble("zipf_alpha", config.zipf_alpha);
  config.word_zipf_alpha = file.GetDouble("word_zipf_alpha", config.word_zipf_alpha);
  config.slot_weight_jitter =
      file.GetDouble("slot_weight_jitter", config.slot_weight_jitter);
  config.vocab_size = static_cast<int>(file.GetInt("vocab_size", config.vocab_size));
  config.markov_top_k = static_cast<int>(file.GetInt("markov_top_k", config.markov_top_k));
  config.boundary_pair_strength =
      file.GetDouble("boundary_pair_strength", config.boundary_pair_strength);
  config.preferred_pairs =
      static_cast<int>(file.GetInt("preferred_pairs", config.preferred_pairs));
  config.pool_overlap = file.GetDouble("pool_overlap", config.pool_overlap);
  if (config.vocab_size < 1 || config.zipf_alpha < 0 || config.word_zipf_alpha < 0 || config.markov_top_k < 1 ||
      config.pool_overlap < 0 || config.pool_overlap > 1 ||
      config.slot_weight_jitter < 0 ||
      config.boundary_pair_strength <= 0) {
    throw Error(ErrorCode::kInvalidConfig,
                file.source() + ": slot parameter out of range");
  }
  return config;
}

std::map<std::string, std::string> DescribeSlotConfig(const SlotConfig& config) {
  std::map<std::string, std::string> out;
  out["generator"] = "slot";
  out["ablation"] = std::string(SlotAblationName(config.ablation));
  out["n_prefix_slots"] = std::to_string(config.prefix_slots.size());
  out["n_suffix_slots"] = std::to_string(config.suffix_slots.size());
  for (std::size_t i = 0; i < config.prefix_slots.size(); ++i) {
    out["prefix_slot_" + std::to_string(i + 1)] = JoinList(config.prefix_slots[i]);
  }
  for (std::size_t i = 0; i < config.suffix_slots.size(); ++i) {
    out["suffix_slot_" + std::to_string(i + 1)] = JoinList(config.suffix_slots[i]);
  }
  out["bridge_pool"] = JoinList(config.bridge_pool);
  out["bridge_zone"] = std::to_string(config.bridge_zone);
  out["bridge_rank"] = std::to_string(config.bridge_rank);
  out["zipf_alpha"] = FormatNumber(config.zipf_alpha);
  out["word_zipf_alpha"] = FormatNumber(config.word_zipf_alpha);
  out["slot_weight_jitter"] = FormatNumber(config.slot_weight_jitter);
  out["vocab_size"] = std::to_string(config.vocab_size);
  out["markov_top_k"] = std::to_string(config.markov_top_k);
  out["boundary_pair_strength"] = FormatNumber(config.boundary_pair_strength);
  out["preferred_pairs"] = std::to_string(config.preferred_pairs);
  out["pool_overlap"] = FormatNumber(config.pool_overlap);
  return out;
}

SlotLexicon BuildSlotLexicon(const SlotConfig& config, std::uint64_t seed) {
  return BuildLexicon(config, ResolveSlots(config), seed).words;
}

GeneratedCorpus GenerateSlotCorpus(const SlotConfig& config,
                                   std::size_t n_words, std::uint64_t seed,
                                   const LengthModel& lengths,
                                   const GraphemeInventory& inventory) {
  if (n_words == 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_words must be positive");
  }
  const auto slots = ResolveSlots(config);
  const auto lex = BuildLexicon(config, slots, seed);
  const auto pairs = PreferredPairs(config, slots.front(), slots.back(), seed);
  const auto successors = BuildSuccessors(config, lex.words, pairs, seed);

  // Each sentence opens with a fresh draw from the word weights and then
  // follows the successor chain; this keeps the chain from settling into a
  // few closed cycles over a long run.
  Rng rng(DeriveSeed(seed, 0x9e4));
  const DiscreteSampler start(lex.words.weights);
  std::vector<std::vector<std::string>> sentences;
  std::size_t produced = 0;
  while (produced < n_words) {
    const std::size_t length = std::min(lengths.Sample(rng), n_words - produced);
    std::vector<std::string> sentence;
    std::size_t current = start.Sample(rng);
    for (std::size_t i = 0; i < length; ++i) {
      if (i > 0) {
        current = successors.next[current][successors.samplers[current].Sample(rng)];
      }
      sentence.push_back(lex.spellings[current]);
    }
    produced += length;
    sentences.push_back(std::move(sentence));
  }
  if (config.ablation == SlotAblation::kRandomOrder) {
    std::vector<std::string*> slots;
    std::vector<std::string> words;
    for (auto& sentence : sentences) {
      for (auto& word : sentence) {
        slots.push_back(&word);
        words.push_back(word);
      }
    }
    rng.Shuffle(std::span<std::string>(words));
    for (std::size_t i = 0; i < words.size(); ++i) *slots[i] = std::move(words[i]);
  }
  return AssembleGenerated(sentences, inventory, "slot",
                           DescribeSlotConfig(config), seed);
}

}  // namespace scriptforge
