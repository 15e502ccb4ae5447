// JSON serialization for datasets and character configs, plus atomic file
// writes. Serialization is deterministic (sorted keys, fixed indentation) so
// identical in-memory objects produce byte-identical files.
#pragma once

#include "reciplab/compsys.hpp"
#include "reciplab/hecke.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace reciplab {

using Json = nlohmann::json;

// Checked conversions: coordinates and norms live in int64 range on disk.
Json int_to_json(const Int& v);
Int json_to_int(const Json& j, const char* what);

Json dataset_to_json(const CompatibleSystemDataset& ds);
CompatibleSystemDataset dataset_from_json(const Json& j);
std::string serialize_dataset(const CompatibleSystemDataset& ds);
CompatibleSystemDataset parse_dataset(const std::string& text);

// Character config:
// {"version":1, "K":{"N":…, "units":[[…],…]?}, "L":{"N":…},
//  "characters":[{"modulus":[[…],…], "infinity_type":{"a":m_a,…},
//                 "finite_part":[{"p":…,"g":…,"t":…,"k":…},…],
//                 "special_two_part": k?}, …]}
// modulus[i] pairs with finite_part[i]; the two-power factor, when present,
// appears only as special_two_part.
struct CharacterConfig {
    FieldPtr K, L;
    std::vector<HeckeCharacter> characters;
};

Json character_to_json(const HeckeCharacter& chi);
HeckeCharacter character_from_json(const Json& j, const FieldPtr& K, const FieldPtr& L);
Json character_config_to_json(const CharacterConfig& cfg);
CharacterConfig character_config_from_json(const Json& j);
std::string serialize_character_config(const CharacterConfig& cfg);
CharacterConfig parse_character_config(const std::string& text);

std::string read_text_file(const std::string& path);
// Writes via a temp file in the same directory and renames over the target.
void atomic_write_text(const std::string& path, const std::string& content);

CompatibleSystemDataset load_dataset(const std::string& path);
void save_dataset(const CompatibleSystemDataset& ds, const std::string& path);
CharacterConfig load_character_config(const std::string& path);
void save_character_config(const CharacterConfig& cfg, const std::string& path);

}  // namespace reciplab
