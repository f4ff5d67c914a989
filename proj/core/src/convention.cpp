// Copyright 2026 The cookplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cookplan/convention.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <sstream>

#include <fmt/format.h>

namespace cookplan {

namespace {

#define COORD R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))"

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Line {
  std::size_t offset;
  std::string text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(start, end - start);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    lines.push_back({start, std::string(l)});
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

GridPos coord_of(const std::smatch& m, std::size_t group) {
  try {
    return {std::stoi(m.str(group)), std::stoi(m.str(group + 1))};
  } catch (const std::out_of_range&) {
    throw ParseError(static_cast<std::size_t>(m.position(group)), "coordinate");
  }
}

std::string spaced(GridPos p) { return fmt::format("({}, {})", p.row, p.col); }

std::string_view plural(Ingredient i) { return i == Ingredient::Onion ? "onions" : "tomatoes"; }

bool is_item_line(const std::string& line, std::string* body) {
  static const std::regex item_re(R"(^\s*\(\d+\)\s*(.*)$)");
  std::smatch m;
  if (!std::regex_match(line, m, item_re)) return false;
  if (body) *body = m.str(1);
  return true;
}

bool says_none(std::string_view s) {
  static const std::regex none_re(R"(\bnone\b)", std::regex::icase);
  std::string str(s);
  return std::regex_search(str, none_re);
}

std::size_t rfind_icase(std::string_view haystack, std::string_view needle) {
  return lower(haystack).rfind(lower(needle));
}

}  // namespace

// --- Selectors and constraints --------------------------------------------

std::string describe(const PotDescriptor& d) {
  switch (d.kind) {
    case PotDescriptor::Kind::Left: return "the pot on the left";
    case PotDescriptor::Kind::Middle: return "the middle pot";
    case PotDescriptor::Kind::Right: return "the pot on the right";
    case PotDescriptor::Kind::Below: return "the pot below";
    case PotDescriptor::Kind::Above: return "the pot above";
    case PotDescriptor::Kind::Coord: return "the pot at " + to_string(d.coord);
  }
  return "?";
}

PotSelector PotSelector::of(std::vector<PotDescriptor> pots) {
  if (pots.empty()) throw std::invalid_argument("named pot selector needs at least one pot");
  return {Kind::Named, std::move(pots)};
}

std::string describe(const PotSelector& s) {
  switch (s.kind) {
    case PotSelector::Kind::All: return "All pots";
    case PotSelector::Kind::NotMentioned: return "Not mentioned";
    case PotSelector::Kind::Named: break;
  }
  std::string out;
  for (const auto& d : s.named) {
    if (!out.empty()) out += " + ";
    out += describe(d);
  }
  return out;
}

PotSelector parse_pot_selector(std::string_view text) {
  std::string t = trim(text);
  while (!t.empty() && (t.back() == '.' || t.back() == ';')) t.pop_back();
  t = trim(t);
  const std::string l = lower(t);
  if (l == "all pots" || l == "all" || l == "all the pots") return PotSelector::all();
  if (l == "not mentioned" || l == "none") return PotSelector::not_mentioned();

  static const std::regex sep_re(R"(\s*(?:\+|\band\b)\s*)", std::regex::icase);
  static const std::regex coord_re(COORD);
  std::vector<PotDescriptor> named;
  std::sregex_token_iterator it(l.begin(), l.end(), sep_re, -1);
  std::size_t offset = 0;
  for (; it != std::sregex_token_iterator(); ++it) {
    const std::string piece = trim(it->str());
    if (piece.empty()) continue;
    PotDescriptor d;
    std::smatch m;
    if (std::regex_search(piece, m, coord_re)) {
      d = PotDescriptor::at(coord_of(m, 1));
    } else if (piece.find("middle") != std::string::npos ||
               piece.find("center") != std::string::npos) {
      d.kind = PotDescriptor::Kind::Middle;
    } else if (piece.find("left") != std::string::npos) {
      d.kind = PotDescriptor::Kind::Left;
    } else if (piece.find("right") != std::string::npos) {
      d.kind = PotDescriptor::Kind::Right;
    } else if (piece.find("below") != std::string::npos ||
               piece.find("bottom") != std::string::npos ||
               piece.find("lower") != std::string::npos) {
      d.kind = PotDescriptor::Kind::Below;
    } else if (piece.find("above") != std::string::npos ||
               piece.find("top") != std::string::npos ||
               piece.find("upper") != std::string::npos) {
      d.kind = PotDescriptor::Kind::Above;
    } else {
      throw ParseError(offset, "pot descriptor");
    }
    if (std::find(named.begin(), named.end(), d) == named.end()) named.push_back(d);
    offset += piece.size();
  }
  if (named.empty()) throw ParseError(0, "pot selector");
  return PotSelector::of(std::move(named));
}

SourceItem source_item(Ingredient i) {
  return i == Ingredient::Onion ? SourceItem::Onion : SourceItem::Tomato;
}

namespace {

std::string_view source_nouns(SourceItem item) {
  switch (item) {
    case SourceItem::Onion: return "onions";
    case SourceItem::Tomato: return "tomatoes";
    case SourceItem::Dish: return "plates";
  }
  return "?";
}

std::string_view where_phrase(SourceDescriptor d) {
  switch (d) {
    case SourceDescriptor::Below: return "below";
    case SourceDescriptor::Above: return "above";
    case SourceDescriptor::Left: return "on the left";
    case SourceDescriptor::Right: return "on the right";
  }
  return "?";
}

}  // namespace

std::string describe_sources(SourceItem item, SourceDescriptor where) {
  std::string_view tiles = item == SourceItem::Onion    ? "onion dots"
                           : item == SourceItem::Tomato ? "tomato dots"
                                                        : "plate spots";
  return fmt::format("the {} {}", tiles, where_phrase(where));
}

std::string describe(const SourceConstraint& c) {
  return fmt::format("{} {} from {}",
                     c.restriction == SourceConstraint::Restriction::OnlyFrom ? "only take"
                                                                              : "do not take",
                     source_nouns(c.item), describe_sources(c.item, c.where));
}

std::vector<SourceConstraint> parse_constraints(std::string_view text) {
  static const std::regex re(
      R"((?:\b(do not|don't|don’t|never|not)\s+|\b(only)\s+)?take\s+(?:the\s+)?)"
      R"((onions?|tomato(?:es)?|plates?|dish(?:es)?)\s+from\s+(?:the\s+)?(?:\w+\s+)?)"
      R"((?:dots?|spots?|dispensers?|sources?|piles?|boxes?)\s+)"
      R"((below|above|on\s+the\s+left|on\s+the\s+right))",
      std::regex::icase);
  std::vector<SourceConstraint> out;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
    const std::smatch& m = *it;
    SourceConstraint c;
    c.restriction = m[1].matched ? SourceConstraint::Restriction::Forbidden
                                 : SourceConstraint::Restriction::OnlyFrom;
    const char item = static_cast<char>(std::tolower(static_cast<unsigned char>(m.str(3)[0])));
    c.item = item == 'o' ? SourceItem::Onion : item == 't' ? SourceItem::Tomato : SourceItem::Dish;
    const std::string where = lower(m.str(4));
    if (where == "below") {
      c.where = SourceDescriptor::Below;
    } else if (where == "above") {
      c.where = SourceDescriptor::Above;
    } else if (where.find("left") != std::string::npos) {
      c.where = SourceDescriptor::Left;
    } else {
      c.where = SourceDescriptor::Right;
    }
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

// --- Key information -------------------------------------------------------

KeyInfo parse_key_info(std::string_view text) {
  static const std::regex objective_re(R"(cooking\s+objectives?\s*:\s*(onion|tomato))",
                                       std::regex::icase);
  static const std::regex fetch_re(R"((?:fetching|picking\s+up)\s+vegetables\s*:\s*([^\n]*))",
                                   std::regex::icase);
  static const std::regex deliver_re(R"(delivering\s+food\s*:\s*([^\n]*))", std::regex::icase);
  static const std::regex restrict_re(R"(restrictions\s*:\s*([^\n]*))", std::regex::icase);

  const std::string s(text);
  KeyInfo info;
  std::smatch m;
  if (!std::regex_search(s, m, objective_re)) throw ParseError(0, "objective");
  info.objective = lower(m.str(1)) == "onion" ? Ingredient::Onion : Ingredient::Tomato;

  auto selector = [&](const std::regex& re, const char* field) {
    std::smatch f;
    if (!std::regex_search(s, f, re)) throw ParseError(0, field);
    try {
      return parse_pot_selector(f.str(1));
    } catch (const ParseError& e) {
      throw ParseError(static_cast<std::size_t>(f.position(1)) + e.position(), field);
    }
  };
  info.ai_fetch = selector(fetch_re, "fetching vegetables");
  info.ai_deliver = selector(deliver_re, "delivering food");
  if (std::regex_search(s, m, restrict_re)) info.constraints = parse_constraints(m.str(1));
  return info;
}

std::string render_key_info(const KeyInfo& info) {
  std::string out = fmt::format(
      "Cooking objectives: {} soup\nAI’s jobs:\nFetching vegetables: {}.\nDelivering food: {}.",
      to_string(info.objective), describe(info.ai_fetch), describe(info.ai_deliver));
  if (!info.constraints.empty()) {
    std::string parts;
    for (const auto& c : info.constraints) {
      if (!parts.empty()) parts += "; ";
      parts += describe(c);
    }
    out += "\nRestrictions: " + parts + ".";
  }
  return out;
}

std::string render_key_info_query(const KeyInfo& info) {
  return fmt::format(
      "Cooking objectives: {} soup\nAI’s jobs:\n(1) Fetching vegetables: {}.\n(2) Delivering food: "
      "{}.",
      to_string(info.objective), describe(info.ai_fetch), describe(info.ai_deliver));
}

// --- Rough items -------------------------------------------------------------

std::string render_rough_item(const RoughWorkItem& item, Ingredient objective) {
  if (item.kind == WorkKind::Fetch) {
    return fmt::format("Fetch {} for pot at {}", plural(objective), to_string(item.pot));
  }
  return fmt::format("Deliver {} soup for pot {}", to_string(objective), to_string(item.pot));
}

RoughWorkItem parse_rough_item(std::string_view text, PlayerId agent) {
  static const std::regex fetch_re(
      R"(^\s*(?:fetch|pick\s+up|picking\s+up|fetching)\s+(?:the\s+)?(?:onions?|tomato(?:es)?)\s+)"
      R"(for\s+(?:the\s+)?pot\s+(?:at\s+|to\s+)?)" COORD R"((?:\s*,\s*(\d+)\s+steps?)?)",
      std::regex::icase);
  static const std::regex deliver_re(
      R"(^\s*(?:deliver|delivering|delivery\s+on|delivery\s+of)\s+(?:the\s+)?(?:onion\s+|tomato\s+)?)"
      R"(soup\s+for\s+(?:the\s+)?pot\s+(?:at\s+|to\s+)?)" COORD R"((?:\s*,\s*(\d+)\s+steps?)?)",
      std::regex::icase);
  const std::string s(text);
  std::smatch m;
  RoughWorkItem item;
  item.agent = agent;
  if (std::regex_search(s, m, fetch_re)) {
    item.kind = WorkKind::Fetch;
  } else if (std::regex_search(s, m, deliver_re)) {
    item.kind = WorkKind::Deliver;
  } else {
    throw ParseError(0, "work item");
  }
  item.pot = coord_of(m, 1);
  if (m[3].matched) item.est_steps = std::stoi(m.str(3));
  return item;
}

RoughPlan parse_rough_plan(std::string_view text) {
  static const std::regex ai_head(R"(rough\s+work\s+contents?\b.*\bAI\b)", std::regex::icase);
  static const std::regex human_head(R"(\bhumans?\b.*\b(?:rough|tasks?|work)\b|\b(?:rough|tasks?|work)\b.*\bhumans?\b)",
                                     std::regex::icase);
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && !std::regex_search(lines[i].text, ai_head)) ++i;
  if (i == lines.size()) throw ParseError(0, "AI work heading");

  RoughPlan plan;
  auto read_section = [&](std::size_t head, std::vector<RoughWorkItem>& out, PlayerId agent,
                          const std::regex* stop) {
    std::size_t j = head + 1;
    const std::string& h = lines[head].text;
    const std::size_t colon = h.rfind(':');
    const bool inline_none = colon != std::string::npos && says_none(h.substr(colon + 1));
    for (; j < lines.size(); ++j) {
      if (stop && std::regex_search(lines[j].text, *stop)) break;
      std::string body;
      if (!is_item_line(lines[j].text, &body)) continue;
      if (inline_none) continue;
      try {
        auto item = parse_rough_item(body, agent);
        item.est_steps.reset();
        out.push_back(item);
      } catch (const ParseError&) {
        throw ParseError(lines[j].offset, "work item line");
      }
    }
    return j;
  };
  const std::size_t human_at = read_section(i, plan.ai, PlayerId::AI, &human_head);
  if (human_at >= lines.size()) throw ParseError(text.size(), "human work heading");
  read_section(human_at, plan.human, PlayerId::Human, nullptr);
  return plan;
}

std::string render_rough_plan(const RoughPlan& plan, Ingredient objective,
                              const std::vector<std::string>& preamble) {
  std::string out;
  for (const auto& l : preamble) out += l + "\n";
  auto section = [&](const std::vector<RoughWorkItem>& items) {
    if (items.empty()) {
      out += "None\n";
      return;
    }
    for (std::size_t k = 0; k < items.size(); ++k) {
      out += fmt::format("({}) {}\n", k + 1, render_rough_item(items[k], objective));
    }
  };
  out += "So, the rough work contents that AI need to do are:\n";
  section(plan.ai);
  out += "Correspondingly, the rough tasks that humans need to complete are:\n";
  section(plan.human);
  out.pop_back();
  return out;
}

// --- Refined items ---------------------------------------------------------

GridPos pot_of(const RefinedWorkItem& item) {
  return std::visit([](const auto& p) { return p.pot; }, item);
}

std::string render_refined(const RefinedWorkItem& item, Ingredient objective) {
  if (const auto* f = std::get_if<FetchPlan>(&item)) {
    return fmt::format("Take the {} from position {} and place it in the pot {}.",
                       to_string(objective), to_string(f->source), to_string(f->pot));
  }
  const auto& d = std::get<DeliverPlan>(item);
  return fmt::format(
      "Take the plate from {}, then take the food from the pot {}, and finally deliver it to the "
      "delivery port {}.",
      spaced(d.dish_source), spaced(d.pot), spaced(d.port));
}

RefinedWorkItem parse_refined(std::string_view text) {
  static const std::regex fetch_re(
      R"(take\s+(?:the\s+|an?\s+)?(?:onions?|tomato(?:es)?)\s+from\s+(?:the\s+)?(?:position\s+)?)" COORD
      R"(\s*,?\s*and\s+(?:place|put)\s+(?:it|them)\s+(?:in|into)\s+the\s+pot\s+(?:at\s+)?)" COORD,
      std::regex::icase);
  static const std::regex deliver_re(
      R"(take\s+(?:the\s+|a\s+)?(?:plate|dish)\s+from\s+(?:position\s+)?)" COORD
      R"(\s*,\s*then\s+take\s+the\s+food\s+from\s+the\s+pot\s+)" COORD
      R"(\s*,?\s*and\s+finally\s+deliver\s+it\s+to\s+the\s+delivery\s+port\s+)" COORD,
      std::regex::icase);

  std::string s(text);
  const std::size_t anchor = rfind_icase(s, "refined work content is:");
  std::size_t base = 0;
  if (anchor != std::string::npos) {
    base = anchor;
    s = s.substr(anchor);
  }

  std::optional<RefinedWorkItem> best;
  std::ptrdiff_t best_pos = -1;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), fetch_re); it != std::sregex_iterator();
       ++it) {
    if (it->position(0) > best_pos) {
      best_pos = it->position(0);
      best = FetchPlan{coord_of(*it, 1), coord_of(*it, 3)};
    }
  }
  for (auto it = std::sregex_iterator(s.begin(), s.end(), deliver_re);
       it != std::sregex_iterator(); ++it) {
    if (it->position(0) > best_pos) {
      best_pos = it->position(0);
      best = DeliverPlan{coord_of(*it, 1), coord_of(*it, 3), coord_of(*it, 5)};
    }
  }
  if (!best) throw ParseError(base, "refined work template");
  return *best;
}

int parse_time(std::string_view text) {
  const std::string s(text);
  const std::size_t anchor = rfind_icase(s, "approximate time is");
  if (anchor == std::string::npos) throw ParseError(0, "approximate time");
  std::size_t end = s.find('\n', anchor);
  std::string line = s.substr(anchor, end == std::string::npos ? std::string::npos : end - anchor);
  const std::size_t steps = lower(line).find("step");
  if (steps != std::string::npos) line = line.substr(0, steps);
  static const std::regex int_re(R"(\d+)");
  std::optional<int> last;
  for (auto it = std::sregex_iterator(line.begin(), line.end(), int_re);
       it != std::sregex_iterator(); ++it) {
    try {
      last = std::stoi(it->str());
    } catch (const std::out_of_range&) {
      throw ParseError(anchor + static_cast<std::size_t>(it->position()), "step count");
    }
  }
  if (!last) throw ParseError(anchor, "step count");
  return *last;
}

std::vector<RoughWorkItem> parse_schedule(std::string_view text, PlayerId agent) {
  const std::size_t anchor = rfind_icase(text, "adjusted to:");
  if (anchor == std::string::npos) throw ParseError(0, "adjusted to:");
  const std::size_t skip = anchor + std::string_view("adjusted to:").size();
  const auto lines = split_lines(text.substr(skip));
  std::vector<RoughWorkItem> out;
  for (const auto& l : lines) {
    std::string body;
    if (!is_item_line(l.text, &body)) {
      if (out.empty() && trim(l.text).empty()) continue;
      if (out.empty()) continue;
      break;
    }
    try {
      out.push_back(parse_rough_item(body, agent));
    } catch (const ParseError&) {
      throw ParseError(skip + l.offset, "work item line");
    }
  }
  if (out.empty()) throw ParseError(skip, "numbered work items");
  return out;
}

std::string render_timed_items(const std::vector<RoughWorkItem>& items, Ingredient objective) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += "\n";
    out += fmt::format("({}) {}", k + 1, render_rough_item(items[k], objective));
    if (items[k].est_steps) out += fmt::format(", {} steps", *items[k].est_steps);
  }
  return out;
}

std::string render_schedule(const std::vector<RoughWorkItem>& items, Ingredient objective) {
  return "Therefore, the work sequence should be adjusted to:\n" +
         render_timed_items(items, objective);
}

// --- Convention ----------------------------------------------------------

bool plan_feasible(const std::vector<RoughWorkItem>& plan) {
  std::map<GridPos, bool> delivered;
  for (const auto& item : plan) {
    if (item.kind == WorkKind::Deliver) {
      delivered[item.pot] = true;
    } else if (delivered[item.pot]) {
      return false;
    }
  }
  return true;
}

Convention Convention::make(Ingredient objective, std::vector<ConventionEntry> ai,
                            std::vector<ConventionEntry> human,
                            std::vector<std::string> transcript_ids) {
  auto check = [](const std::vector<ConventionEntry>& plan, std::string_view who) {
    std::vector<RoughWorkItem> rough;
    for (const auto& e : plan) {
      if (e.rough.pot != pot_of(e.refined)) {
        throw InfeasiblePlan(fmt::format("{} item for pot {} refines a different pot", who,
                                         to_string(e.rough.pot)));
      }
      if ((e.rough.kind == WorkKind::Fetch) != std::holds_alternative<FetchPlan>(e.refined)) {
        throw InfeasiblePlan(fmt::format("{} item kind does not match its refinement", who));
      }
      rough.push_back(e.rough);
    }
    if (!plan_feasible(rough)) {
      throw InfeasiblePlan(fmt::format("{} plan delivers a pot before filling it", who));
    }
  };
  check(ai, "AI");
  check(human, "Human");
  return Convention{objective, std::move(ai), std::move(human), std::move(transcript_ids)};
}

bool same_plan(const Convention& a, const Convention& b) {
  return a.objective == b.objective && a.ai_plan == b.ai_plan && a.human_plan == b.human_plan;
}

std::string render_convention(const Convention& c) {
  std::string out;
  auto section = [&](const std::vector<ConventionEntry>& plan, std::string_view who) {
    out += fmt::format("The work content and execution sequence of {}:\n", who);
    if (plan.empty()) {
      out += "None\n";
      return;
    }
    for (std::size_t k = 0; k < plan.size(); ++k) {
      out += fmt::format("({}) {}, {} steps: {}\n", k + 1,
                         render_rough_item(plan[k].rough, c.objective), plan[k].est_steps,
                         render_refined(plan[k].refined, c.objective));
    }
  };
  section(c.ai_plan, "AI");
  section(c.human_plan, "Human");
  out.pop_back();
  return out;
}

Convention parse_convention(std::string_view text) {
  static const std::regex head_re(R"(execution\s+sequence\s+of\s+(AI|Human)\s*:?)",
                                  std::regex::icase);
  static const std::regex tomato_re(R"(\btomato)", std::regex::icase);
  const auto lines = split_lines(text);
  std::vector<ConventionEntry> ai;
  std::vector<ConventionEntry> human;
  std::vector<ConventionEntry>* current = nullptr;
  bool saw_ai = false;
  bool saw_human = false;
  bool tomato = false;
  for (const auto& l : lines) {
    std::smatch m;
    if (std::regex_search(l.text, m, head_re)) {
      const bool is_ai = lower(m.str(1)) == "ai";
      current = is_ai ? &ai : &human;
      (is_ai ? saw_ai : saw_human) = true;
      continue;
    }
    std::string body;
    if (!current || !is_item_line(l.text, &body)) continue;
    const std::size_t colon = body.find(':');
    if (colon == std::string::npos) throw ParseError(l.offset, "':' after work item");
    ConventionEntry e;
    try {
      e.rough = parse_rough_item(body.substr(0, colon), current == &ai ? PlayerId::AI
                                                                       : PlayerId::Human);
      e.refined = parse_refined(body.substr(colon + 1));
    } catch (const ParseError&) {
      throw ParseError(l.offset, "convention line");
    }
    e.est_steps = e.rough.est_steps.value_or(0);
    e.rough.est_steps.reset();
    if (std::regex_search(body, tomato_re)) tomato = true;
    current->push_back(e);
  }
  if (!saw_ai) throw ParseError(0, "AI plan heading");
  if (!saw_human) throw ParseError(text.size(), "Human plan heading");
  try {
    return Convention::make(tomato ? Ingredient::Tomato : Ingredient::Onion, std::move(ai),
                            std::move(human));
  } catch (const InfeasiblePlan&) {
    throw ParseError(0, "feasible plan");
  }
}

}  // namespace cookplan
