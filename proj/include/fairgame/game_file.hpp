#pragma once

#include <optional>
#include <string>

#include "fairgame/fairness.hpp"
#include "fairgame/game.hpp"

namespace fairgame {

// Declarative text format for games. Sections, '#' comments, 'key = value'
// entries:
//
//   [players]            one entry per player, in order: name = action labels
//   [events]             alphabets per component: e0 (manager), e1..eN; a
//                        missing section means every alphabet is the
//                        singleton "-"
//   [pmf]                either sparse joint entries "label tuple = prob"
//                        (unlisted joint events get 0) or product form
//                        "eK = p0 p1 ..." per component (components omitted
//                        in product form must be singletons); a missing
//                        section requires singleton alphabets and puts mass 1
//                        on the single event
//   [caps]               optional declared utility caps: name = value
//   [utilities <name>]   "default = v" fill plus entries
//                        "action tuple | event tuple = value"; the event part
//                        may be omitted when all alphabets are singletons
//   [fairness]           optional: kind = weighted-log|linear|min-with-cap,
//                        weights = w1 .. wN (log/linear), cap = c (min form)
struct GameFileData {
  GameSpec game;
  std::optional<FairnessFunction> fairness;
};

// Diagnostics carry "name:line:" prefixes. ParseError for format problems,
// ValidationError propagated from GameSpec::validate.
GameFileData parse_game_text(const std::string& text, const std::string& name = "<input>");
GameFileData parse_game_file(const std::string& path);

// Canonical serialization (sparse pmf, dense utilities at 17 significant
// digits); parse_game_text(serialize_game_file(d)) reproduces an equal
// GameSpec and fairness.
std::string serialize_game_file(const GameFileData& data);

}  // namespace fairgame
