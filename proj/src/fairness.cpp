#include "fairgame/fairness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "fairgame/errors.hpp"

namespace fairgame {
namespace {

void check_weights(const std::vector<double>& w) {
  for (double wi : w) {
    if (!(wi >= 0) || !std::isfinite(wi))
      throw ValidationError("fairness weights must be finite and nonnegative");
  }
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Trims an exactly-representable weight like 10 to "10" rather than "10.000...".
std::string format_weight(double x) {
  if (x == static_cast<double>(static_cast<long long>(x)) && std::abs(x) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(x));
    return buf;
  }
  return format_number(x);
}

}  // namespace

FairnessFunction FairnessFunction::weighted_log(std::vector<double> weights) {
  check_weights(weights);
  if (weights.empty()) throw ValidationError("fairness needs at least one player");
  int n = static_cast<int>(weights.size());
  return FairnessFunction(Kind::WeightedLog, n, std::move(weights), 0);
}

FairnessFunction FairnessFunction::linear(std::vector<double> weights) {
  check_weights(weights);
  if (weights.empty()) throw ValidationError("fairness needs at least one player");
  int n = static_cast<int>(weights.size());
  return FairnessFunction(Kind::Linear, n, std::move(weights), 0);
}

FairnessFunction FairnessFunction::min_with_cap(int num_players, double cap) {
  if (num_players <= 0) throw ValidationError("fairness needs at least one player");
  if (!(cap > 0) || !std::isfinite(cap))
    throw ValidationError("min_with_cap requires a positive finite cap");
  return FairnessFunction(Kind::MinWithCap, num_players, {}, cap);
}

double FairnessFunction::value(std::span<const double> u) const {
  switch (kind_) {
    case Kind::WeightedLog: {
      double s = 0;
      for (int i = 0; i < num_players_; ++i) s += weights_[i] * std::log1p(u[i]);
      return s;
    }
    case Kind::Linear: {
      double s = 0;
      for (int i = 0; i < num_players_; ++i) s += weights_[i] * u[i];
      return s;
    }
    case Kind::MinWithCap: {
      double m = cap_;
      for (int i = 0; i < num_players_; ++i) m = std::min(m, u[i]);
      return m;
    }
  }
  return 0;
}

std::vector<double> FairnessFunction::supergradient(std::span<const double> u) const {
  std::vector<double> g(num_players_, 0.0);
  switch (kind_) {
    case Kind::WeightedLog:
      for (int i = 0; i < num_players_; ++i) g[i] = weights_[i] / (1.0 + u[i]);
      break;
    case Kind::Linear:
      for (int i = 0; i < num_players_; ++i) g[i] = weights_[i];
      break;
    case Kind::MinWithCap: {
      int arg = -1;
      double m = cap_;
      for (int i = 0; i < num_players_; ++i) {
        if (u[i] < m) {
          m = u[i];
          arg = i;
        }
      }
      if (arg >= 0) g[arg] = 1.0;  // cap binding => zero supergradient
      break;
    }
  }
  return g;
}

double FairnessFunction::max_over_box(std::span<const double> box) const {
  return value(box);
}

std::string FairnessFunction::to_string() const {
  std::string out;
  switch (kind_) {
    case Kind::WeightedLog:
    case Kind::Linear:
      for (int i = 0; i < num_players_; ++i) {
        if (!out.empty()) out += "+";
        if (weights_[i] != 1.0) out += format_weight(weights_[i]) + "*";
        if (kind_ == Kind::WeightedLog)
          out += "log(1+u" + std::to_string(i + 1) + ")";
        else
          out += "u" + std::to_string(i + 1);
      }
      return out;
    case Kind::MinWithCap:
      out = "min(";
      for (int i = 0; i < num_players_; ++i) out += "u" + std::to_string(i + 1) + ",";
      out += format_weight(cap_) + ")";
      return out;
  }
  return out;
}

namespace {

struct Term {
  double weight;
  bool is_log;
  int player;  // 1-based
};

// One summand: [w*]log(1+uI) or [w*]uI or a bare uI.
Term parse_term(const std::string& t) {
  std::size_t pos = 0;
  double w = 1.0;
  if (!t.empty() && (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.')) {
    char* end = nullptr;
    w = std::strtod(t.c_str(), &end);
    pos = end - t.c_str();
    if (pos >= t.size() || t[pos] != '*')
      throw ParseError("fairness term '" + t + "': expected '*' after weight");
    ++pos;
  }
  bool is_log = false;
  if (t.compare(pos, 6, "log(1+") == 0) {
    is_log = true;
    pos += 6;
  }
  if (pos >= t.size() || t[pos] != 'u')
    throw ParseError("fairness term '" + t + "': expected player utility uI");
  ++pos;
  char* end = nullptr;
  long player = std::strtol(t.c_str() + pos, &end, 10);
  pos = end - t.c_str();
  if (player < 1) throw ParseError("fairness term '" + t + "': bad player index");
  if (is_log) {
    if (pos >= t.size() || t[pos] != ')')
      throw ParseError("fairness term '" + t + "': missing ')'");
    ++pos;
  }
  if (pos != t.size()) throw ParseError("fairness term '" + t + "': trailing characters");
  return {w, is_log, static_cast<int>(player)};
}

}  // namespace

FairnessFunction FairnessFunction::parse(const std::string& text, int num_players) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError("empty fairness expression");

  if (s.compare(0, 4, "min(") == 0) {
    if (s.back() != ')') throw ParseError("fairness min(...): missing ')'");
    std::string body = s.substr(4, s.size() - 5);
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
      if (i == body.size() || body[i] == ',') {
        parts.push_back(body.substr(start, i - start));
        start = i + 1;
      }
    }
    if (static_cast<int>(parts.size()) != num_players + 1)
      throw ParseError("fairness min(...) must list u1..uN then the cap");
    for (int i = 0; i < num_players; ++i) {
      if (parts[i] != "u" + std::to_string(i + 1))
        throw ParseError("fairness min(...) must list u1..uN in order");
    }
    char* end = nullptr;
    double cap = std::strtod(parts.back().c_str(), &end);
    if (end != parts.back().c_str() + parts.back().size())
      throw ParseError("fairness min(...): bad cap '" + parts.back() + "'");
    return min_with_cap(num_players, cap);
  }

  // Sum of terms; '+' at paren depth 0 separates them.
  std::vector<std::string> terms;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == '+' && depth == 0)) {
      terms.push_back(s.substr(start, i - start));
      start = i + 1;
    } else if (s[i] == '(') {
      ++depth;
    } else if (s[i] == ')') {
      --depth;
    }
  }
  std::vector<double> weights(num_players, 0.0);
  int num_log = 0;
  for (const auto& t : terms) {
    Term term = parse_term(t);
    if (term.player > num_players)
      throw ParseError("fairness term references player " + std::to_string(term.player) +
                       " but the game has " + std::to_string(num_players));
    weights[term.player - 1] += term.weight;
    num_log += term.is_log ? 1 : 0;
  }
  if (num_log != 0 && num_log != static_cast<int>(terms.size()))
    throw ParseError("fairness expression mixes log and linear terms");
  return num_log ? weighted_log(std::move(weights)) : linear(std::move(weights));
}

}  // namespace fairgame
