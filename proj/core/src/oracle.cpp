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

#include "cookplan/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <regex>
#include <tuple>

#include <fmt/format.h>

namespace cookplan {

std::string_view OracleError::name(Code c) {
  switch (c) {
    case Code::AmbiguousDescriptor: return "AmbiguousDescriptor";
    case Code::UnknownPot: return "UnknownPot";
    case Code::NoCandidate: return "NoCandidate";
    case Code::UnsupportedInstruction: return "UnsupportedInstruction";
    case Code::UnsupportedPrompt: return "UnsupportedPrompt";
  }
  return "OracleError";
}

LayoutFacts LayoutFacts::of(const Layout& layout) {
  return {layout.tiles_of(TileKind::Pot), layout.tiles_of(TileKind::OnionSource),
          layout.tiles_of(TileKind::TomatoSource), layout.tiles_of(TileKind::DishSource),
          layout.tiles_of(TileKind::ServingPort)};
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string join(const std::vector<GridPos>& ps, std::string_view sep = ", ") {
  std::string out;
  for (const auto& p : ps) {
    if (!out.empty()) out += sep;
    out += to_string(p);
  }
  return out;
}

std::vector<GridPos> coords_in(std::string_view text) {
  static const std::regex re(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  std::vector<GridPos> out;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
    out.push_back({std::stoi((*it)[1].str()), std::stoi((*it)[2].str())});
  }
  return out;
}

// Index of the unique element maximising `key`, or throws.
template <typename Key>
GridPos unique_best(const std::vector<GridPos>& tiles, Key key, std::string_view what) {
  if (tiles.empty()) throw OracleError(OracleError::Code::NoCandidate, "no tiles for " + std::string(what));
  auto best = std::max_element(tiles.begin(), tiles.end(),
                               [&](GridPos a, GridPos b) { return key(a) < key(b); });
  const int k = key(*best);
  if (std::count_if(tiles.begin(), tiles.end(), [&](GridPos p) { return key(p) == k; }) > 1) {
    throw OracleError(OracleError::Code::AmbiguousDescriptor,
                      fmt::format("'{}' matches more than one tile", what));
  }
  return *best;
}

}  // namespace

// --- Pots ------------------------------------------------------------------

GridPos resolve_pot(const PotDescriptor& d, const std::vector<GridPos>& pots) {
  using K = PotDescriptor::Kind;
  switch (d.kind) {
    case K::Coord:
      if (std::find(pots.begin(), pots.end(), d.coord) == pots.end()) {
        throw OracleError(OracleError::Code::UnknownPot, "no pot at " + to_string(d.coord));
      }
      return d.coord;
    case K::Left: return unique_best(pots, [](GridPos p) { return -p.col; }, describe(d));
    case K::Right: return unique_best(pots, [](GridPos p) { return p.col; }, describe(d));
    case K::Below: return unique_best(pots, [](GridPos p) { return p.row; }, describe(d));
    case K::Above: return unique_best(pots, [](GridPos p) { return -p.row; }, describe(d));
    case K::Middle: {
      std::vector<GridPos> by_col = pots;
      std::sort(by_col.begin(), by_col.end(),
                [](GridPos a, GridPos b) { return a.col < b.col; });
      const bool distinct = std::adjacent_find(by_col.begin(), by_col.end(), [](GridPos a, GridPos b) {
                              return a.col == b.col;
                            }) == by_col.end();
      if (by_col.size() < 3 || by_col.size() % 2 == 0 || !distinct) {
        throw OracleError(OracleError::Code::AmbiguousDescriptor, "the middle pot");
      }
      return by_col[by_col.size() / 2];
    }
  }
  throw OracleError(OracleError::Code::UnknownPot, "bad descriptor");
}

std::vector<GridPos> resolve_pots(const PotSelector& selector, const std::vector<GridPos>& pots) {
  switch (selector.kind) {
    case PotSelector::Kind::All: return pots;
    case PotSelector::Kind::NotMentioned: return {};
    case PotSelector::Kind::Named: break;
  }
  std::vector<GridPos> out;
  for (const auto& d : selector.named) {
    GridPos p = resolve_pot(d, pots);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

namespace {

std::vector<GridPos> in_listing_order(std::vector<GridPos> ps, const std::vector<GridPos>& pots) {
  std::vector<GridPos> out;
  for (const auto& p : pots) {
    if (std::find(ps.begin(), ps.end(), p) != ps.end()) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<RoughWorkItem> ai_assignment(const KeyInfo& info, const std::vector<GridPos>& pots) {
  std::vector<RoughWorkItem> out;
  for (GridPos p : in_listing_order(resolve_pots(info.ai_fetch, pots), pots)) {
    out.push_back({PlayerId::AI, WorkKind::Fetch, p, std::nullopt});
  }
  for (GridPos p : in_listing_order(resolve_pots(info.ai_deliver, pots), pots)) {
    out.push_back({PlayerId::AI, WorkKind::Deliver, p, std::nullopt});
  }
  return out;
}

std::vector<RoughWorkItem> complement_assignment(const std::vector<RoughWorkItem>& ai_items,
                                                 const std::vector<GridPos>& pots) {
  std::vector<RoughWorkItem> out;
  for (WorkKind kind : {WorkKind::Fetch, WorkKind::Deliver}) {
    for (GridPos p : pots) {
      const bool taken = std::any_of(ai_items.begin(), ai_items.end(), [&](const RoughWorkItem& i) {
        return i.kind == kind && i.pot == p;
      });
      if (!taken) out.push_back({PlayerId::Human, kind, p, std::nullopt});
    }
  }
  return out;
}

RoughPlan rough_plan(const KeyInfo& info, const std::vector<GridPos>& pots) {
  RoughPlan plan;
  plan.ai = ai_assignment(info, pots);
  plan.human = complement_assignment(plan.ai, pots);
  return plan;
}

// --- Refinement ------------------------------------------------------------

GridPos extreme_tile(const std::vector<GridPos>& tiles, SourceDescriptor where) {
  switch (where) {
    case SourceDescriptor::Below: return unique_best(tiles, [](GridPos p) { return p.row; }, "below");
    case SourceDescriptor::Above: return unique_best(tiles, [](GridPos p) { return -p.row; }, "above");
    case SourceDescriptor::Left: return unique_best(tiles, [](GridPos p) { return -p.col; }, "on the left");
    case SourceDescriptor::Right: return unique_best(tiles, [](GridPos p) { return p.col; }, "on the right");
  }
  throw OracleError(OracleError::Code::AmbiguousDescriptor, "bad source descriptor");
}

std::vector<GridPos> filter_sources(const std::vector<GridPos>& candidates, SourceItem item,
                                    const std::vector<SourceConstraint>& constraints) {
  std::vector<GridPos> current = candidates;
  for (const auto& c : constraints) {
    if (c.item != item) continue;
    if (current.empty()) break;
    const GridPos ext = extreme_tile(current, c.where);
    if (c.restriction == SourceConstraint::Restriction::OnlyFrom) {
      current = {ext};
    } else {
      current.erase(std::remove(current.begin(), current.end(), ext), current.end());
    }
  }
  return current;
}

namespace {

GridPos nearest(const std::vector<GridPos>& candidates, GridPos to, std::string_view what) {
  if (candidates.empty()) {
    throw OracleError(OracleError::Code::NoCandidate,
                      fmt::format("no usable {} for pot {}", what, to_string(to)));
  }
  return *std::min_element(candidates.begin(), candidates.end(), [&](GridPos a, GridPos b) {
    return manhattan(a, to) < manhattan(b, to);
  });
}

}  // namespace

RefinedWorkItem refine(const RoughWorkItem& item, const LayoutFacts& facts, Ingredient objective,
                       const std::vector<SourceConstraint>& constraints) {
  if (item.kind == WorkKind::Fetch) {
    auto cands = filter_sources(facts.sources(objective), source_item(objective), constraints);
    return FetchPlan{nearest(cands, item.pot, fmt::format("{} source", to_string(objective))),
                     item.pot};
  }
  auto dishes = filter_sources(facts.dishes, SourceItem::Dish, constraints);
  return DeliverPlan{nearest(dishes, item.pot, "dish source"), item.pot,
                     nearest(facts.ports, item.pot, "serving port")};
}

int estimate_time(const RefinedWorkItem& item) {
  if (const auto* f = std::get_if<FetchPlan>(&item)) return 6 * manhattan(f->source, f->pot);
  const auto& d = std::get<DeliverPlan>(item);
  return manhattan(d.dish_source, d.pot) + manhattan(d.pot, d.port) + manhattan(d.port, d.dish_source);
}

// --- Scheduling --------------------------------------------------------------

namespace {

struct ScheduleRun {
  std::vector<RoughWorkItem> order;
  std::vector<int> starts;
};

ScheduleRun run_schedule(const std::vector<RoughWorkItem>& items, int cook_wait, bool reorder) {
  std::map<GridPos, int> fetches_left;
  for (const auto& it : items) {
    if (it.kind == WorkKind::Fetch) ++fetches_left[it.pot];
  }
  std::map<GridPos, int> last_fetch_end;
  std::vector<bool> done(items.size(), false);
  ScheduleRun run;
  int clock = 0;

  // Earliest start for a Deliver, or -1 while its pot still has fetches queued.
  auto ready_at = [&](const RoughWorkItem& it) -> int {
    if (it.kind == WorkKind::Fetch) return 0;
    auto left = fetches_left.find(it.pot);
    if (left == fetches_left.end()) return 0;
    if (left->second > 0) return -1;
    return last_fetch_end[it.pot] + cook_wait;
  };
  auto emit = [&](std::size_t k, int start) {
    const auto& it = items[k];
    done[k] = true;
    run.order.push_back(it);
    run.starts.push_back(start);
    clock = start + it.est_steps.value_or(0);
    if (it.kind == WorkKind::Fetch) {
      --fetches_left[it.pot];
      last_fetch_end[it.pot] = clock;
    }
  };

  for (std::size_t n = 0; n < items.size(); ++n) {
    if (!reorder) {
      const int r = ready_at(items[n]);
      emit(n, std::max(clock, std::max(r, 0)));
      continue;
    }
    std::optional<std::size_t> pick;
    for (std::size_t k = 0; k < items.size() && !pick; ++k) {
      if (done[k]) continue;
      const int r = ready_at(items[k]);
      if (r >= 0 && r <= clock) pick = k;
    }
    if (pick) {
      emit(*pick, clock);
      continue;
    }
    std::optional<std::size_t> wait_for;
    int best = 0;
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (done[k]) continue;
      const int r = ready_at(items[k]);
      if (r < 0) continue;
      if (!wait_for || r < best) {
        wait_for = k;
        best = r;
      }
    }
    if (!wait_for) throw std::logic_error("schedule: no item can ever become ready");
    emit(*wait_for, best);
  }
  return run;
}

}  // namespace

std::vector<RoughWorkItem> schedule(const std::vector<RoughWorkItem>& items, int cook_wait) {
  return run_schedule(items, cook_wait, true).order;
}

std::vector<int> simulate_start_times(const std::vector<RoughWorkItem>& order, int cook_wait) {
  return run_schedule(order, cook_wait, false).starts;
}

// --- Instruction grammar -----------------------------------------------------

void validate(const PreferenceSpec& spec, const Layout& layout) {
  const auto n = static_cast<int>(layout.pots().size());
  if (spec.placement_pots.empty() && spec.delivery_pots.empty()) {
    throw std::invalid_argument("preference assigns no work to the AI");
  }
  for (const auto* set : {&spec.placement_pots, &spec.delivery_pots}) {
    for (int k : *set) {
      if (k < 1 || k > n) throw std::invalid_argument(fmt::format("no pot number {}", k));
    }
  }
  if (layout.tiles_of(source_of(spec.objective)).empty()) {
    throw std::invalid_argument(fmt::format("layout has no {} source", to_string(spec.objective)));
  }
}

namespace {

const std::vector<GridPos>& source_tiles(const LayoutFacts& f, SourceItem item) {
  switch (item) {
    case SourceItem::Onion: return f.onions;
    case SourceItem::Tomato: return f.tomatoes;
    case SourceItem::Dish: return f.dishes;
  }
  return f.dishes;
}

bool has_unique_extreme(const std::vector<GridPos>& tiles, SourceDescriptor where) {
  try {
    extreme_tile(tiles, where);
    return true;
  } catch (const OracleError&) {
    return false;
  }
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<int> subset_of(std::uint64_t mask, int n) {
  std::vector<int> out;
  for (int k = 0; k < n; ++k) {
    if (mask & (1ULL << k)) out.push_back(k + 1);
  }
  return out;
}

}  // namespace

PreferenceSpec random_spec(const Layout& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const LayoutFacts facts = LayoutFacts::of(layout);
  const int n = static_cast<int>(facts.pots.size());
  PreferenceSpec spec;
  std::vector<Ingredient> options;
  if (!facts.onions.empty()) options.push_back(Ingredient::Onion);
  if (!facts.tomatoes.empty()) options.push_back(Ingredient::Tomato);
  spec.objective = options[rng() % options.size()];

  std::vector<int> all;
  for (int k = 1; k <= n; ++k) all.push_back(k);
  auto pick_set = [&]() -> std::vector<int> {
    switch (rng() % 3) {
      case 0: return all;
      case 1: return {};
      default: return subset_of(1 + rng() % ((1ULL << n) - 1), n);
    }
  };
  do {
    spec.placement_pots = pick_set();
    spec.delivery_pots = pick_set();
  } while (spec.placement_pots.empty() && spec.delivery_pots.empty());

  if (rng() % 3 == 0) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      SourceConstraint c;
      c.item = rng() % 2 ? source_item(spec.objective) : SourceItem::Dish;
      c.restriction = rng() % 2 ? SourceConstraint::Restriction::OnlyFrom
                                : SourceConstraint::Restriction::Forbidden;
      c.where = static_cast<SourceDescriptor>(rng() % 4);
      const auto& tiles = source_tiles(facts, c.item);
      if (!has_unique_extreme(tiles, c.where)) continue;
      if (c.restriction == SourceConstraint::Restriction::Forbidden && tiles.size() < 2) continue;
      spec.source_constraints.push_back(c);
      break;
    }
  }
  return spec;
}

namespace {

std::string describe_pot_set(const std::vector<int>& numbers, const std::vector<GridPos>& pots,
                             std::mt19937_64& rng) {
  using K = PotDescriptor::Kind;
  std::vector<std::string> parts;
  for (int k : numbers) {
    const GridPos p = pots[static_cast<std::size_t>(k - 1)];
    std::vector<PotDescriptor> valid;
    for (K kind : {K::Left, K::Middle, K::Right, K::Below, K::Above}) {
      try {
        if (resolve_pot({kind, {}}, pots) == p) valid.push_back({kind, {}});
      } catch (const OracleError&) {
      }
    }
    valid.push_back(PotDescriptor::at(p));
    parts.push_back(describe(valid[rng() % valid.size()]));
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " and ";
    out += parts[i];
  }
  return out;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

std::string gen_instruction(const PreferenceSpec& spec, const Layout& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 17);
  const auto& pots = layout.pots();
  const int n = static_cast<int>(pots.size());
  const auto place = sorted_unique(spec.placement_pots);
  const auto deliver = sorted_unique(spec.delivery_pots);
  const bool place_all = static_cast<int>(place.size()) == n;
  const bool deliver_all = static_cast<int>(deliver.size()) == n;
  const std::string obj(to_string(spec.objective));
  const std::string objs = spec.objective == Ingredient::Onion ? "onions" : "tomatoes";

  std::vector<std::string> variants;
  if (place_all && deliver_all) {
    variants.push_back(fmt::format("Please join me in making {} soup.", obj));
    variants.push_back(fmt::format("Please make {} soup.", obj));
    variants.push_back(fmt::format("Let's make {} soup together.", obj));
  }
  if (place_all && deliver.empty()) {
    variants.push_back(fmt::format(
        "Please make {0} soup, and you are only responsible for putting the {0} into the pot.", obj));
    variants.push_back(fmt::format(
        "Please join me in making {0} soup. You are only responsible for putting the {0} into the "
        "pot.",
        obj));
  }
  if (place.empty() && deliver_all) {
    variants.push_back(fmt::format(
        "Please make {} soup, and you are only responsible for delivering the soup.", obj));
    variants.push_back(fmt::format(
        "Please join me in making {} soup. You are not responsible for putting the {} into the "
        "pots.",
        obj, objs));
  }
  if (!place.empty() && !place_all && place == deliver) {
    variants.push_back(
        fmt::format("Please use {} to make {} soup.", describe_pot_set(place, pots, rng), obj));
  }
  const bool superset = std::includes(deliver.begin(), deliver.end(), place.begin(), place.end());
  if (!place.empty() && !place_all && superset && deliver.size() > place.size()) {
    std::vector<int> extra;
    std::set_difference(deliver.begin(), deliver.end(), place.begin(), place.end(),
                        std::back_inserter(extra));
    variants.push_back(fmt::format("Please use {} to make {} soup and be responsible for the "
                                   "delivery of {}.",
                                   describe_pot_set(place, pots, rng), obj,
                                   describe_pot_set(extra, pots, rng)));
  }
  {
    std::string general = fmt::format("Please make {} soup.", obj);
    if (place_all) {
      general += fmt::format(" Put the {} into all pots.", objs);
    } else if (place.empty()) {
      general += fmt::format(" You are not responsible for putting the {} into the pots.", objs);
    } else {
      general += fmt::format(" Put the {} into {}.", objs, describe_pot_set(place, pots, rng));
    }
    if (deliver_all) {
      general += " Deliver the soup from all pots.";
    } else if (deliver.empty()) {
      general += " You are not responsible for delivering the soup.";
    } else {
      general += fmt::format(" Deliver the soup from {}.", describe_pot_set(deliver, pots, rng));
    }
    variants.push_back(general);
  }

  std::string text = variants[rng() % variants.size()];
  for (const auto& c : spec.source_constraints) {
    if (c.restriction == SourceConstraint::Restriction::OnlyFrom) {
      text += " You can " + describe(c) + ".";
    } else {
      text += " " + capitalize(describe(c)) + ".";
    }
  }
  return text;
}

KeyInfo interpret_instruction(std::string_view text) {
  static const std::string pot_np =
      R"((?:all pots|all the pots|the middle pot|the pot (?:on the left|on the right|below|above|at \(\s*\d+\s*,\s*\d+\s*\))))";
  static const std::string pots_np = "(" + pot_np + R"((?:\s*(?:,|\+|\band\b)\s*)" + pot_np + ")*)";
  static const std::regex objective_re(R"(\b(onion|tomato)\s+soup)", std::regex::icase);
  static const std::regex ingredient_re(R"(\b(onion|tomato))", std::regex::icase);

  enum Effect { OnlyFetch, OnlyDeliver, NoFetch, NoDeliver, UseFor, PutInto, DeliverFrom, DeliveryOf };
  static const std::vector<std::pair<std::regex, Effect>> rules = {
      {std::regex(R"(\bonly responsible for (?:putting|placing|preparing|fetching|adding|picking))",
                  std::regex::icase),
       OnlyFetch},
      {std::regex(R"(\bonly responsible for deliver)", std::regex::icase), OnlyDeliver},
      {std::regex(R"(\bnot responsible for (?:putting|placing|preparing|fetching|adding|picking))",
                  std::regex::icase),
       NoFetch},
      {std::regex(R"(\bnot responsible for deliver)", std::regex::icase), NoDeliver},
      {std::regex(R"(\buse )" + pots_np + R"( to (?:make|cook))", std::regex::icase), UseFor},
      {std::regex(R"(\bput the (?:onions?|tomato(?:es)?) (?:into|in) )" + pots_np, std::regex::icase),
       PutInto},
      {std::regex(R"(\bdeliver the soups? from )" + pots_np, std::regex::icase), DeliverFrom},
      {std::regex(R"(\bresponsible for the delivery of )" + pots_np, std::regex::icase), DeliveryOf},
  };

  const std::string s(text);
  KeyInfo info;
  std::smatch m;
  if (std::regex_search(s, m, objective_re)) {
    info.objective = lower(m.str(1)) == "onion" ? Ingredient::Onion : Ingredient::Tomato;
  } else if (std::regex_search(s, m, ingredient_re)) {
    info.objective = lower(m.str(1)) == "onion" ? Ingredient::Onion : Ingredient::Tomato;
  } else {
    throw OracleError(OracleError::Code::UnsupportedInstruction, "no cooking objective in: " + s);
  }
  info.ai_fetch = PotSelector::all();
  info.ai_deliver = PotSelector::all();

  struct Hit {
    std::ptrdiff_t pos;
    Effect effect;
    std::string pots;
  };
  std::vector<Hit> hits;
  for (const auto& [re, effect] : rules) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
      hits.push_back({it->position(0), effect, it->size() > 1 ? (*it)[1].str() : std::string()});
    }
  }
  std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.pos < b.pos; });
  for (const auto& h : hits) {
    switch (h.effect) {
      case OnlyFetch: info.ai_deliver = PotSelector::not_mentioned(); break;
      case OnlyDeliver: info.ai_fetch = PotSelector::not_mentioned(); break;
      case NoFetch: info.ai_fetch = PotSelector::not_mentioned(); break;
      case NoDeliver: info.ai_deliver = PotSelector::not_mentioned(); break;
      case UseFor:
        info.ai_fetch = parse_pot_selector(h.pots);
        info.ai_deliver = info.ai_fetch;
        break;
      case PutInto: info.ai_fetch = parse_pot_selector(h.pots); break;
      case DeliverFrom: info.ai_deliver = parse_pot_selector(h.pots); break;
      case DeliveryOf: {
        PotSelector more = parse_pot_selector(h.pots);
        if (info.ai_deliver.kind == PotSelector::Kind::Named && more.kind == PotSelector::Kind::Named) {
          auto named = info.ai_deliver.named;
          for (const auto& d : more.named) {
            if (std::find(named.begin(), named.end(), d) == named.end()) named.push_back(d);
          }
          info.ai_deliver = PotSelector::of(std::move(named));
        } else {
          info.ai_deliver = more;
        }
        break;
      }
    }
  }
  info.constraints = parse_constraints(s);
  return info;
}

// --- Ground truth --------------------------------------------------------------

GroundTruth ground_truth(const KeyInfo& info, const LayoutFacts& facts, int cook_wait) {
  GroundTruth gt;
  gt.facts = facts;
  gt.key_info = info;
  gt.rough = rough_plan(info, facts.pots);
  std::vector<ConventionEntry> plans[2];
  for (PlayerId who : {PlayerId::AI, PlayerId::Human}) {
    const auto& items = who == PlayerId::AI ? gt.rough.ai : gt.rough.human;
    std::vector<RoughWorkItem> timed;
    for (auto item : items) {
      RefinedWorkItem r = refine(item, facts, info.objective, info.constraints);
      const int t = estimate_time(r);
      gt.refined.emplace(std::make_pair(who, std::make_pair(item.kind, item.pot)), r);
      gt.times.emplace(std::make_pair(who, std::make_pair(item.kind, item.pot)), t);
      item.est_steps = t;
      timed.push_back(item);
    }
    auto order = timed.empty() ? timed : schedule(timed, cook_wait);
    (who == PlayerId::AI ? gt.ai_schedule : gt.human_schedule) = order;
    for (auto item : order) {
      const auto key = std::make_pair(who, std::make_pair(item.kind, item.pot));
      const int t = *item.est_steps;
      item.est_steps.reset();
      plans[index_of(who)].push_back({item, gt.refined.at(key), t});
    }
  }
  gt.convention = Convention::make(info.objective, plans[0], plans[1]);
  return gt;
}

GroundTruth ground_truth(const PreferenceSpec& spec, const Layout& layout, int cook_wait) {
  validate(spec, layout);
  const LayoutFacts facts = LayoutFacts::of(layout);
  const auto n = facts.pots.size();
  auto selector = [&](const std::vector<int>& numbers) {
    auto u = sorted_unique(numbers);
    if (u.empty()) return PotSelector::not_mentioned();
    if (u.size() == n) return PotSelector::all();
    std::vector<PotDescriptor> named;
    for (int k : u) named.push_back(PotDescriptor::at(facts.pots[static_cast<std::size_t>(k - 1)]));
    return PotSelector::of(std::move(named));
  };
  KeyInfo info;
  info.objective = spec.objective;
  info.ai_fetch = selector(spec.placement_pots);
  info.ai_deliver = selector(spec.delivery_pots);
  info.constraints = spec.source_constraints;
  return ground_truth(info, facts, cook_wait);
}

NormalizedKeyInfo normalize(const KeyInfo& info, const std::vector<GridPos>& pots) {
  NormalizedKeyInfo n;
  n.objective = info.objective;
  for (GridPos p : resolve_pots(info.ai_fetch, pots)) n.fetch.insert(p);
  for (GridPos p : resolve_pots(info.ai_deliver, pots)) n.deliver.insert(p);
  for (const auto& c : info.constraints) {
    n.constraints.insert({static_cast<int>(c.item), static_cast<int>(c.restriction),
                          static_cast<int>(c.where)});
  }
  return n;
}

// --- Prompt answering --------------------------------------------------------

std::string_view to_string(PromptKind k) {
  switch (k) {
    case PromptKind::KeyInfo: return "key_info";
    case PromptKind::Rough: return "rough";
    case PromptKind::Refine: return "refine";
    case PromptKind::Time: return "time";
    case PromptKind::RefineTime: return "refine_time";
    case PromptKind::Schedule: return "schedule";
    case PromptKind::Unknown: return "unknown";
  }
  return "unknown";
}

PromptKind classify_prompt(std::string_view prompt) {
  const bool refine = prompt.find("Please refine the rough work content") != std::string_view::npos;
  const bool time = prompt.find("estimate the approximate time") != std::string_view::npos;
  if (refine && time) return PromptKind::RefineTime;
  if (refine) return PromptKind::Refine;
  if (time) return PromptKind::Time;
  if (prompt.find("extract key information from human instructions") != std::string_view::npos) {
    return PromptKind::KeyInfo;
  }
  if (prompt.find("clarify the location of the pot") != std::string_view::npos) {
    return PromptKind::Rough;
  }
  if (prompt.find("adjust the order of execution") != std::string_view::npos) {
    return PromptKind::Schedule;
  }
  return PromptKind::Unknown;
}

std::string query_block(std::string_view prompt) {
  std::size_t start = prompt.rfind("\nNow, ");
  start = start == std::string_view::npos ? 0 : start + 6;
  std::string_view rest = prompt.substr(start);
  for (std::string_view closer : {"\nPlease provide your answer", "\nPlease give me your answer"}) {
    const std::size_t end = rest.rfind(closer);
    if (end != std::string_view::npos) {
      rest = rest.substr(0, end);
      break;
    }
  }
  return std::string(rest);
}

namespace {

std::string after_colon(const std::string& s) {
  const std::size_t c = s.find(':');
  std::string out = c == std::string::npos ? s : s.substr(c + 1);
  const std::size_t b = out.find_first_not_of(" \t");
  return b == std::string::npos ? std::string() : out.substr(b);
}

std::string line_matching(const std::string& block, const std::regex& re) {
  std::smatch m;
  if (!std::regex_search(block, m, re)) return {};
  return m.str(1);
}

std::string distance_text(GridPos a, GridPos b) {
  const int dr = std::abs(a.row - b.row);
  const int dc = std::abs(a.col - b.col);
  return fmt::format("$|{}-{}|+|{}-{}|={}+{}={}$", a.row, b.row, a.col, b.col, dr, dc, dr + dc);
}

struct RefineQuery {
  std::string instruction;
  RoughWorkItem item;
  Ingredient objective = Ingredient::Onion;
  LayoutFacts facts;
};

RefineQuery parse_refine_query(const std::string& block) {
  static const std::regex instr_re(R"(human instructions(?: are)?\s*:\s*([^\n]*))", std::regex::icase);
  static const std::regex rough_re(R"(rough work content is\s*:\s*([^\n]*))", std::regex::icase);
  static const std::regex loc_re(
      R"(location of (?:the )?(tomato(?:es)?|onions?|dining plates?|plates?|delivery ports?)\s*:\s*([^\n]*))",
      std::regex::icase);
  RefineQuery q;
  q.instruction = line_matching(block, instr_re);
  const std::string rough = line_matching(block, rough_re);
  if (rough.empty()) throw OracleError(OracleError::Code::UnsupportedPrompt, "no rough work item");
  q.item = parse_rough_item(rough, PlayerId::AI);
  q.objective = lower(rough).find("tomato") != std::string::npos ? Ingredient::Tomato
                                                                  : Ingredient::Onion;
  for (auto it = std::sregex_iterator(block.begin(), block.end(), loc_re);
       it != std::sregex_iterator(); ++it) {
    const std::string what = lower((*it)[1].str());
    auto coords = coords_in((*it)[2].str());
    if (what.rfind("tomato", 0) == 0) {
      q.facts.tomatoes = coords;
    } else if (what.rfind("onion", 0) == 0) {
      q.facts.onions = coords;
    } else if (what.find("plate") != std::string::npos) {
      q.facts.dishes = coords;
    } else {
      q.facts.ports = coords;
    }
  }
  q.facts.pots = {q.item.pot};
  return q;
}

std::string answer_refine(const RefineQuery& q, RefinedWorkItem* out) {
  const auto constraints = parse_constraints(q.instruction);
  std::string text;
  auto candidates_text = [&](const std::vector<GridPos>& all, SourceItem item, std::string_view noun,
                             std::string_view plural_noun) {
    std::vector<SourceConstraint> mine;
    for (const auto& c : constraints) {
      if (c.item == item) mine.push_back(c);
    }
    if (mine.empty()) {
      text += fmt::format("There are no additional restrictions in the human instructions on where "
                          "to take {}.\n",
                          plural_noun);
      return all;
    }
    auto kept = filter_sources(all, item, constraints);
    for (const auto& c : mine) text += fmt::format("The human instructions say: {}.\n", describe(c));
    text += fmt::format("The {} positions that satisfy this are: {}.\n", noun,
                        kept.empty() ? std::string("none") : join(kept));
    return kept;
  };
  auto choose = [&](const std::vector<GridPos>& cands, GridPos pot, std::string_view noun) {
    for (GridPos c : cands) {
      text += fmt::format("For the {} position {}, its distance from the pot {} is {}.\n", noun,
                          to_string(c), to_string(pot), distance_text(c, pot));
    }
    return nearest(cands, pot, noun);
  };

  const GridPos pot = q.item.pot;
  RefinedWorkItem result;
  if (q.item.kind == WorkKind::Fetch) {
    const std::string noun(to_string(q.objective));
    auto cands = candidates_text(q.facts.sources(q.objective), source_item(q.objective), noun,
                                 q.objective == Ingredient::Onion ? "onions" : "tomatoes");
    GridPos src = choose(cands, pot, noun);
    text += fmt::format("Therefore, I should choose the position {}, the closest to the pot {}, to "
                        "take the {}.\n",
                        to_string(src), to_string(pot), noun);
    result = FetchPlan{src, pot};
  } else {
    auto dishes = candidates_text(q.facts.dishes, SourceItem::Dish, "dining plate", "plates");
    GridPos dish = choose(dishes, pot, "dining plate");
    text += fmt::format("Therefore, I should choose the plate at {}, the closest to the pot {}.\n",
                        to_string(dish), to_string(pot));
    GridPos port = choose(q.facts.ports, pot, "delivery port");
    text += fmt::format("Therefore, I should choose the delivery port {} to deliver the food.\n",
                        to_string(port));
    result = DeliverPlan{dish, pot, port};
  }
  text += "So, the refined work content is: " + render_refined(result, q.objective);
  if (out) *out = result;
  return text;
}

std::string answer_time(const RefinedWorkItem& item, Ingredient objective) {
  if (const auto* f = std::get_if<FetchPlan>(&item)) {
    const int d = manhattan(f->source, f->pot);
    return fmt::format(
        "Moving {} from {} to {} requires {} steps.\nSo, the approximate time is: ${} \\times 6 = "
        "{}$ steps.",
        objective == Ingredient::Onion ? "onions" : "tomatoes", to_string(f->source),
        to_string(f->pot), distance_text(f->source, f->pot), d, 6 * d);
  }
  const auto& d = std::get<DeliverPlan>(item);
  const int a = manhattan(d.dish_source, d.pot);
  const int b = manhattan(d.pot, d.port);
  const int c = manhattan(d.port, d.dish_source);
  return fmt::format(
      "Moving from {} to {} requires {} steps.\nMoving from {} to {} requires {} steps.\nMoving "
      "from {} to {} requires {} steps.\nSo, the approximate time is: ${} + {} + {} = {}$ steps.",
      to_string(d.dish_source), to_string(d.pot), distance_text(d.dish_source, d.pot),
      to_string(d.pot), to_string(d.port), distance_text(d.pot, d.port), to_string(d.port),
      to_string(d.dish_source), distance_text(d.port, d.dish_source), a, b, c, a + b + c);
}

std::string answer_schedule(const std::string& prompt, const std::string& block) {
  static const std::regex wait_re(R"(carried out (\d+) time steps)");
  std::smatch m;
  const int cook_wait = std::regex_search(prompt, m, wait_re) ? std::stoi(m.str(1)) : 20;
  const bool tomato = lower(block).find("tomato") != std::string::npos;
  const Ingredient objective = tomato ? Ingredient::Tomato : Ingredient::Onion;

  std::vector<RoughWorkItem> items;
  for (std::size_t start = 0; start < block.size();) {
    std::size_t end = block.find('\n', start);
    if (end == std::string::npos) end = block.size();
    const std::string line = block.substr(start, end - start);
    static const std::regex item_re(R"(^\s*\(\d+\)\s*(.*)$)");
    std::smatch im;
    if (std::regex_match(line, im, item_re)) {
      try {
        items.push_back(parse_rough_item(im.str(1), PlayerId::AI));
      } catch (const ParseError&) {
        throw OracleError(OracleError::Code::UnsupportedPrompt, "bad work item: " + line);
      }
    }
    start = end + 1;
  }
  if (items.empty()) throw OracleError(OracleError::Code::UnsupportedPrompt, "no work items");
  for (auto& it : items) {
    if (!it.est_steps) it.est_steps = 0;
  }
  const auto order = schedule(items, cook_wait);
  const auto starts = simulate_start_times(order, cook_wait);

  std::string text;
  std::map<GridPos, int> fetch_end;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k].kind == WorkKind::Fetch) fetch_end[order[k].pot] = starts[k] + *order[k].est_steps;
  }
  bool waits = false;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k].kind != WorkKind::Deliver) continue;
    auto f = fetch_end.find(order[k].pot);
    if (f == fetch_end.end()) continue;
    waits = true;
    text += fmt::format(
        "The work '{}' can start only {} time steps after the last fetch for pot {} ends at step "
        "{}, so it starts at step {}.\n",
        render_rough_item(order[k], objective), cook_wait, to_string(order[k].pot), f->second,
        starts[k]);
  }
  if (waits) {
    text += "Other work is moved into the waiting time wherever it is available.\n";
  } else {
    text += "No delivery has to wait for a fetch in this list, so the order is kept.\n";
  }
  return text + render_schedule(order, objective);
}

}  // namespace

std::string oracle_answer(std::string_view prompt) {
  const PromptKind kind = classify_prompt(prompt);
  const std::string block = query_block(prompt);
  const std::string p(prompt);
  switch (kind) {
    case PromptKind::KeyInfo:
      return render_key_info(interpret_instruction(after_colon(block)));
    case PromptKind::Rough: {
      const std::size_t nl = block.find('\n');
      const auto pots = coords_in(block.substr(0, nl));
      if (pots.empty()) throw OracleError(OracleError::Code::UnsupportedPrompt, "no pots listed");
      KeyInfo info;
      try {
        info = parse_key_info(nl == std::string::npos ? std::string() : block.substr(nl));
      } catch (const ParseError& e) {
        throw OracleError(OracleError::Code::UnsupportedPrompt,
                          std::string("key information unreadable: ") + e.what());
      }
      std::vector<std::string> preamble;
      auto explain = [&](const PotSelector& s) {
        for (const auto& d : s.named) {
          const std::string line = fmt::format("{} is pot {}", describe(d), to_string(resolve_pot(d, pots)));
          if (std::find(preamble.begin(), preamble.end(), line) == preamble.end()) preamble.push_back(line);
        }
      };
      explain(info.ai_fetch);
      explain(info.ai_deliver);
      if (preamble.empty()) {
        preamble.push_back(pots.size() == 1 ? "The pot in the scene is pot " + to_string(pots[0]) + "."
                                            : "The pots in the scene are " + join(pots) + ".");
      }
      return render_rough_plan(rough_plan(info, pots), info.objective, preamble);
    }
    case PromptKind::Refine: {
      try {
        return answer_refine(parse_refine_query(block), nullptr);
      } catch (const ParseError& e) {
        throw OracleError(OracleError::Code::UnsupportedPrompt, e.what());
      }
    }
    case PromptKind::RefineTime: {
      try {
        RefineQuery q = parse_refine_query(block);
        RefinedWorkItem r;
        std::string text = answer_refine(q, &r);
        return text + "\n" + answer_time(r, q.objective);
      } catch (const ParseError& e) {
        throw OracleError(OracleError::Code::UnsupportedPrompt, e.what());
      }
    }
    case PromptKind::Time: {
      try {
        const RefinedWorkItem r = parse_refined(block);
        const Ingredient obj =
            lower(block).find("tomato") != std::string::npos ? Ingredient::Tomato : Ingredient::Onion;
        return answer_time(r, obj);
      } catch (const ParseError& e) {
        throw OracleError(OracleError::Code::UnsupportedPrompt, e.what());
      }
    }
    case PromptKind::Schedule:
      return answer_schedule(p, block);
    case PromptKind::Unknown:
      break;
  }
  throw OracleError(OracleError::Code::UnsupportedPrompt, "prompt matches no planning session");
}

}  // namespace cookplan
