#include "fairgame/game_file.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "fairgame/errors.hpp"

namespace fairgame {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct Line {
  int number;
  std::string text;
};

struct Cursor {
  std::string name;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(name + ":" + std::to_string(line) + ": " + msg);
  }
};

double parse_number(const Cursor& at, const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) at.fail("bad number '" + tok + "'");
  return v;
}

int label_index(const Cursor& at, const std::vector<std::string>& labels,
                const std::string& tok, const std::string& what) {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == tok) return static_cast<int>(k);
  at.fail("unknown " + what + " label '" + tok + "'");
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

GameFileData parse_game_text(const std::string& text, const std::string& name) {
  // First pass: group non-empty lines under their section headers.
  std::map<std::string, std::vector<Line>> sections;
  std::vector<std::string> section_order;
  std::string current;
  {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      const std::size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ParseError(name + ":" + std::to_string(lineno) + ": unterminated section header");
        current = trim(line.substr(1, line.size() - 2));
        if (current.empty())
          throw ParseError(name + ":" + std::to_string(lineno) + ": empty section name");
        if (!sections.count(current)) section_order.push_back(current);
        sections[current];
        continue;
      }
      if (current.empty())
        throw ParseError(name + ":" + std::to_string(lineno) + ": content before any section");
      sections[current].push_back({lineno, line});
    }
  }
  for (const auto& sec : section_order) {
    if (sec == "players" || sec == "events" || sec == "pmf" || sec == "caps" ||
        sec == "fairness" || sec.rfind("utilities ", 0) == 0)
      continue;
    throw ParseError(name + ": unknown section [" + sec + "]");
  }

  auto entry = [&](const Line& l) -> std::pair<std::string, std::string> {
    const std::size_t eq = l.text.find('=');
    if (eq == std::string::npos)
      throw ParseError(name + ":" + std::to_string(l.number) + ": expected 'key = value'");
    return {trim(l.text.substr(0, eq)), trim(l.text.substr(eq + 1))};
  };

  GameDef def;
  std::vector<std::string> player_names;

  if (!sections.count("players") || sections["players"].empty())
    throw ParseError(name + ": missing [players] section");
  for (const Line& l : sections["players"]) {
    Cursor at{name, l.number};
    auto [key, value] = entry(l);
    for (const auto& p : player_names)
      if (p == key) at.fail("player '" + key + "' repeats");
    const auto labels = split_tokens(value);
    if (labels.empty()) at.fail("player '" + key + "' has no actions");
    player_names.push_back(key);
    def.actions.push_back(labels);
  }
  const int n = static_cast<int>(player_names.size());

  def.events.assign(n + 1, {"-"});
  if (sections.count("events")) {
    for (const Line& l : sections["events"]) {
      Cursor at{name, l.number};
      auto [key, value] = entry(l);
      if (key.size() < 2 || key[0] != 'e') at.fail("event component key must be e0..eN");
      char* end = nullptr;
      const long k = std::strtol(key.c_str() + 1, &end, 10);
      if (*end || k < 0 || k > n) at.fail("event component '" + key + "' out of range");
      const auto labels = split_tokens(value);
      if (labels.empty()) at.fail("event component '" + key + "' has no values");
      def.events[k] = labels;
    }
  }

  MixedRadix event_radix = [&] {
    std::vector<int> sizes(n + 1);
    for (int k = 0; k <= n; ++k) sizes[k] = static_cast<int>(def.events[k].size());
    return MixedRadix(sizes);
  }();
  const std::int64_t W = event_radix.size();

  def.event_pmf.assign(W, 0.0);
  if (!sections.count("pmf")) {
    if (W != 1)
      throw ParseError(name +
                       ": [pmf] section required when event alphabets are not singletons");
    def.event_pmf[0] = 1.0;
  } else {
    bool product = false, sparse = false;
    std::vector<std::vector<double>> comp(n + 1);
    for (int k = 0; k <= n; ++k) comp[k].assign(def.events[k].size(), def.events[k].size() == 1 ? 1.0 : 0.0);
    std::vector<bool> comp_given(n + 1, false);
    for (const Line& l : sections["pmf"]) {
      Cursor at{name, l.number};
      auto [key, value] = entry(l);
      const auto key_toks = split_tokens(key);
      if (key_toks.size() == 1 && key[0] == 'e' && key.size() >= 2 &&
          std::isdigit(static_cast<unsigned char>(key[1]))) {
        product = true;
        char* end = nullptr;
        const long k = std::strtol(key.c_str() + 1, &end, 10);
        if (*end || k < 0 || k > n) at.fail("event component '" + key + "' out of range");
        const auto probs = split_tokens(value);
        if (probs.size() != def.events[k].size())
          at.fail("component pmf for '" + key + "' needs " +
                  std::to_string(def.events[k].size()) + " entries");
        for (std::size_t v = 0; v < probs.size(); ++v)
          comp[k][v] = parse_number(at, probs[v]);
        comp_given[k] = true;
      } else {
        sparse = true;
        if (static_cast<int>(key_toks.size()) != n + 1)
          at.fail("joint event needs " + std::to_string(n + 1) + " labels");
        std::vector<int> digits(n + 1);
        for (int k = 0; k <= n; ++k)
          digits[k] = label_index(at, def.events[k], key_toks[k],
                                  "event component " + std::to_string(k));
        def.event_pmf[event_radix.encode(digits)] += parse_number(at, value);
      }
      if (product && sparse) at.fail("[pmf] mixes product and sparse joint entries");
    }
    if (product) {
      for (int k = 0; k <= n; ++k)
        if (!comp_given[k] && def.events[k].size() > 1)
          throw ParseError(name + ": product pmf missing component e" + std::to_string(k));
      for (std::int64_t w = 0; w < W; ++w) {
        double p = 1;
        for (int k = 0; k <= n; ++k) p *= comp[k][event_radix.digit(w, k)];
        def.event_pmf[w] = p;
      }
    }
  }

  const MixedRadix action_radix = [&] {
    std::vector<int> sizes(n);
    for (int i = 0; i < n; ++i) sizes[i] = static_cast<int>(def.actions[i].size());
    return MixedRadix(sizes);
  }();
  const std::int64_t A = action_radix.size();

  def.utilities.assign(n, {});
  for (int i = 0; i < n; ++i) {
    const std::string sec = "utilities " + player_names[i];
    if (!sections.count(sec))
      throw ParseError(name + ": missing [" + sec + "] section");
    double fill = 0.0;
    std::vector<std::pair<std::int64_t, double>> entries;  // (a*W+w, value)
    for (const Line& l : sections[sec]) {
      Cursor at{name, l.number};
      auto [key, value] = entry(l);
      if (key == "default") {
        fill = parse_number(at, value);
        continue;
      }
      std::string apart = key, wpart;
      const std::size_t bar = key.find('|');
      if (bar != std::string::npos) {
        apart = trim(key.substr(0, bar));
        wpart = trim(key.substr(bar + 1));
      }
      const auto atoks = split_tokens(apart);
      if (static_cast<int>(atoks.size()) != n)
        at.fail("action tuple needs " + std::to_string(n) + " labels");
      std::vector<int> adig(n);
      for (int p = 0; p < n; ++p)
        adig[p] = label_index(at, def.actions[p], atoks[p], "player " + player_names[p]);
      std::int64_t widx = 0;
      if (!wpart.empty()) {
        const auto wtoks = split_tokens(wpart);
        if (static_cast<int>(wtoks.size()) != n + 1)
          at.fail("event tuple needs " + std::to_string(n + 1) + " labels");
        std::vector<int> wdig(n + 1);
        for (int k = 0; k <= n; ++k)
          wdig[k] = label_index(at, def.events[k], wtoks[k],
                                "event component " + std::to_string(k));
        widx = event_radix.encode(wdig);
      } else if (W != 1) {
        at.fail("utility entry must name the event ('actions | events = value')");
      }
      entries.push_back({action_radix.encode(adig) * W + widx, parse_number(at, value)});
    }
    def.utilities[i].assign(A * W, fill);
    for (const auto& [idx, v] : entries) def.utilities[i][idx] = v;
  }

  if (sections.count("caps")) {
    def.utility_caps.assign(n, 0.0);
    std::vector<bool> seen(n, false);
    for (const Line& l : sections["caps"]) {
      Cursor at{name, l.number};
      auto [key, value] = entry(l);
      int idx = -1;
      for (int i = 0; i < n; ++i)
        if (player_names[i] == key) idx = i;
      if (idx < 0) at.fail("unknown player '" + key + "' in [caps]");
      def.utility_caps[idx] = parse_number(at, value);
      seen[idx] = true;
    }
    for (int i = 0; i < n; ++i)
      if (!seen[i])
        throw ParseError(name + ": [caps] must list every player or be omitted");
  }

  GameFileData data;
  data.game = GameSpec::validate(std::move(def));

  if (sections.count("fairness")) {
    std::string kind;
    std::vector<double> weights;
    double cap = 0;
    bool has_cap = false;
    for (const Line& l : sections["fairness"]) {
      Cursor at{name, l.number};
      auto [key, value] = entry(l);
      if (key == "kind") {
        kind = value;
      } else if (key == "weights") {
        for (const auto& tok : split_tokens(value)) weights.push_back(parse_number(at, tok));
      } else if (key == "cap") {
        cap = parse_number(at, value);
        has_cap = true;
      } else {
        at.fail("unknown fairness key '" + key + "'");
      }
    }
    if (kind == "weighted-log" || kind == "linear") {
      if (static_cast<int>(weights.size()) != n)
        throw ParseError(name + ": fairness weights must list every player");
      data.fairness = kind == "linear" ? FairnessFunction::linear(weights)
                                       : FairnessFunction::weighted_log(weights);
    } else if (kind == "min-with-cap") {
      if (!has_cap) throw ParseError(name + ": min-with-cap fairness needs 'cap'");
      data.fairness = FairnessFunction::min_with_cap(n, cap);
    } else {
      throw ParseError(name + ": fairness kind must be weighted-log, linear or min-with-cap");
    }
  }
  return data;
}

GameFileData parse_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open game file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_text(buf.str(), path);
}

std::string serialize_game_file(const GameFileData& data) {
  const GameSpec& g = data.game;
  const int n = g.num_players();
  std::ostringstream out;

  out << "[players]\n";
  for (int i = 0; i < n; ++i) {
    out << "p" << i + 1 << " =";
    for (int a = 0; a < g.num_actions(i); ++a) out << " " << g.action_label(i, a);
    out << "\n";
  }

  out << "\n[events]\n";
  for (int k = 0; k <= n; ++k) {
    out << "e" << k << " =";
    for (int v = 0; v < g.event_component_size(k); ++v) out << " " << g.event_label(k, v);
    out << "\n";
  }

  out << "\n[pmf]\n";
  for (std::int64_t w = 0; w < g.num_joint_events(); ++w) {
    if (g.event_prob(w) == 0.0) continue;
    for (int k = 0; k <= n; ++k) {
      if (k) out << " ";
      out << g.event_label(k, g.event_space().digit(w, k));
    }
    out << " = " << fmt(g.event_prob(w)) << "\n";
  }

  out << "\n[caps]\n";
  for (int i = 0; i < n; ++i) out << "p" << i + 1 << " = " << fmt(g.utility_cap(i)) << "\n";

  for (int i = 0; i < n; ++i) {
    out << "\n[utilities p" << i + 1 << "]\n";
    out << "default = 0\n";
    for (std::int64_t a = 0; a < g.num_joint_actions(); ++a) {
      for (std::int64_t w = 0; w < g.num_joint_events(); ++w) {
        const double u = g.utility(i, a, w);
        if (u == 0.0) continue;
        for (int p = 0; p < n; ++p) {
          if (p) out << " ";
          out << g.action_label(p, g.action_space().digit(a, p));
        }
        out << " | ";
        for (int k = 0; k <= n; ++k) {
          if (k) out << " ";
          out << g.event_label(k, g.event_space().digit(w, k));
        }
        out << " = " << fmt(u) << "\n";
      }
    }
  }

  if (data.fairness) {
    out << "\n[fairness]\n";
    switch (data.fairness->kind()) {
      case FairnessFunction::Kind::WeightedLog:
        out << "kind = weighted-log\nweights =";
        for (double w : data.fairness->weights()) out << " " << fmt(w);
        out << "\n";
        break;
      case FairnessFunction::Kind::Linear:
        out << "kind = linear\nweights =";
        for (double w : data.fairness->weights()) out << " " << fmt(w);
        out << "\n";
        break;
      case FairnessFunction::Kind::MinWithCap:
        out << "kind = min-with-cap\ncap = " << fmt(data.fairness->cap()) << "\n";
        break;
    }
  }
  return out.str();
}

}  // namespace fairgame
