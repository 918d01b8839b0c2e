#ifndef SCRIPTFORGE_GENERATOR_H_
#define SCRIPTFORGE_GENERATOR_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "scriptforge/config_file.h"
#include "scriptforge/generated.h"

namespace scriptforge {

// A generator selected by the `generator` key of a config file.
struct GeneratorSpec {
  std::string kind;  // slot | grille | naibbe
  // Effective configuration; feeding it back through LoadGenerator rebuilds
  // the same generator.
  std::map<std::string, std::string> config;
  std::function<GeneratedCorpus(std::size_t n_words, std::uint64_t seed)> generate;
};

// Relative paths inside the file resolve against `base_dir`. Naibbe configs
// also take `plaintext` (a text file, or `synthetic`), `plaintext_letters`
// and `plaintext_seed`. Throws Error(kInvalidConfig) for an unknown kind.
GeneratorSpec LoadGenerator(const ConfigFile& file,
                            const std::filesystem::path& base_dir = {});

}  // namespace scriptforge

#endif  // SCRIPTFORGE_GENERATOR_H_
