#include "reebext/symbols.hpp"

#include <map>
#include <set>
#include <sstream>

namespace reebext {

namespace {

constexpr std::array<std::string_view, 10> kSymbolNames = {"M+", "M-", "N+", "N-", "S+",
                                                           "S-", "G+", "G-", "J+", "J-"};
constexpr std::array<std::string_view, 7> kRuleNames = {"Conserve",     "SourceOne",    "SinkOne",    "SumAtMerge",
                                                        "SumAtSplit",   "ForceZeroOut", "ForceZeroIn"};
constexpr std::array<std::string_view, 8> kParticipationNames = {"create", "drill", "release", "terminate",
                                                                 "widen",  "join",  "fuse",    "separate"};

constexpr Star kBorn{0, 1}, kDies{1, 0}, kSplit{1, 2}, kMerge{2, 1};

std::array<SymbolSignature, 10> standard_signatures() {
  using S = Symbol;
  using P = Participation;
  using G = GenusRule;
  const auto plus = Sign::Plus, minus = Sign::Minus;
  return {{
      {S::MPlus, plus, kBorn, {0, 1}, P::Create, G::ForceZeroOut, +1},
      {S::MMinus, minus, kBorn, {1, 1}, P::Drill, G::Conserve, -1},
      {S::NPlus, plus, kDies, {1, 1}, P::Release, G::Conserve, +1},
      {S::NMinus, minus, kDies, {1, 0}, P::Terminate, G::ForceZeroIn, -1},
      {S::SPlus, plus, kSplit, {1, 1}, P::Widen, G::Conserve, -1},
      {S::SMinus, minus, kMerge, {1, 1}, P::Join, G::Conserve, +1},
      {S::GPlus, plus, kMerge, {1, 1}, P::Join, G::SourceOne, -1},
      {S::GMinus, minus, kSplit, {1, 1}, P::Widen, G::SinkOne, +1},
      {S::JPlus, plus, kMerge, {2, 1}, P::Fuse, G::SumAtMerge, -1},
      {S::JMinus, minus, kSplit, {1, 2}, P::Separate, G::SumAtSplit, +1},
  }};
}

std::optional<Star> parse_star(std::string_view s) {
  auto comma = s.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  try {
    return Star{std::stoi(std::string(s.substr(0, comma))), std::stoi(std::string(s.substr(comma + 1)))};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::string_view symbol_name(Symbol s) { return kSymbolNames[static_cast<int>(s)]; }

std::optional<Symbol> parse_symbol(std::string_view s) {
  for (auto sym : kAllSymbols)
    if (symbol_name(sym) == s) return sym;
  return std::nullopt;
}

std::string_view genus_rule_name(GenusRule r) { return kRuleNames[static_cast<int>(r)]; }

std::optional<GenusRule> parse_genus_rule(std::string_view s) {
  for (int i = 0; i < static_cast<int>(kRuleNames.size()); ++i)
    if (kRuleNames[i] == s) return static_cast<GenusRule>(i);
  return std::nullopt;
}

std::string_view participation_name(Participation p) { return kParticipationNames[static_cast<int>(p)]; }

std::optional<Participation> parse_participation(std::string_view s) {
  for (int i = 0; i < static_cast<int>(kParticipationNames.size()); ++i)
    if (kParticipationNames[i] == s) return static_cast<Participation>(i);
  return std::nullopt;
}

std::optional<VertexKind> SymbolSignature::kind() const {
  if (wf_star == kBorn) return VertexKind::Born;
  if (wf_star == kDies) return VertexKind::Dies;
  if (wf_star == kSplit) return VertexKind::Split;
  if (wf_star == kMerge) return VertexKind::Merge;
  return std::nullopt;
}

SymbolTable::SymbolTable(std::array<SymbolSignature, 10> signatures) : sigs_(signatures) {}

const SymbolTable& SymbolTable::standard() {
  static const SymbolTable table(standard_signatures());
  return table;
}

SymbolTable SymbolTable::parse(std::string_view text) {
  SymbolTable table = standard();
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string head, name;
    if (!(ls >> head)) continue;
    if (head != "symbol") throw ParseError(line, "expected 'symbol <name> ...'");
    if (!(ls >> name)) throw ParseError(line, "missing symbol name");
    auto sym = parse_symbol(name);
    if (!sym) throw ParseError(line, "unknown symbol '" + name + "'");
    auto& sig = table.mutable_signature(*sym);
    std::string tok;
    while (ls >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + tok + "'");
      auto key = tok.substr(0, eq), value = tok.substr(eq + 1);
      if (key == "sign") {
        if (value != "+" && value != "-") throw ParseError(line, "sign must be + or -");
        sig.sign = value == "+" ? Sign::Plus : Sign::Minus;
      } else if (key == "wf" || key == "v") {
        auto star = parse_star(value);
        if (!star) throw ParseError(line, "expected <in>,<out> for " + key);
        (key == "wf" ? sig.wf_star : sig.v_star) = *star;
      } else if (key == "participation") {
        auto p = parse_participation(value);
        if (!p) throw ParseError(line, "unknown participation '" + value + "'");
        sig.participation = *p;
      } else if (key == "genus") {
        auto r = parse_genus_rule(value);
        if (!r) throw ParseError(line, "unknown genus rule '" + value + "'");
        sig.genus_rule = *r;
      } else if (key == "chi") {
        try {
          sig.chi_delta = std::stoi(value);
        } catch (const std::exception&) {
          throw ParseError(line, "chi must be an integer");
        }
      } else {
        throw ParseError(line, "unknown key '" + key + "'");
      }
    }
  }
  return table;
}

std::vector<Symbol> SymbolTable::compatible_symbols(VertexKind kind, Sign sign) const {
  std::vector<Symbol> out;
  for (const auto& sig : sigs_)
    if (sig.sign == sign && sig.kind() == kind) out.push_back(sig.name);
  return out;
}

std::string SymbolTable::serialize() const {
  std::ostringstream out;
  for (const auto& s : sigs_) {
    out << "symbol " << symbol_name(s.name) << " sign=" << sign_char(s.sign) << " wf=" << s.wf_star.in << ","
        << s.wf_star.out << " v=" << s.v_star.in << "," << s.v_star.out
        << " participation=" << participation_name(s.participation) << " genus=" << genus_rule_name(s.genus_rule)
        << " chi=" << (s.chi_delta > 0 ? "+" : "") << s.chi_delta << "\n";
  }
  return out.str();
}

const SymbolSignature& signature(Symbol s) { return SymbolTable::standard().signature(s); }

std::vector<Symbol> compatible_symbols(VertexKind kind, Sign sign) {
  return SymbolTable::standard().compatible_symbols(kind, sign);
}

TableReport consistency_check(const SymbolTable& table) {
  TableReport report;
  auto& bad = report.violations;
  using S = Symbol;
  using G = GenusRule;

  const std::map<S, G> expected_rule = {
      {S::MPlus, G::ForceZeroOut}, {S::MMinus, G::Conserve},   {S::NPlus, G::Conserve},
      {S::NMinus, G::ForceZeroIn}, {S::SPlus, G::Conserve},    {S::SMinus, G::Conserve},
      {S::GPlus, G::SourceOne},    {S::GMinus, G::SinkOne},    {S::JPlus, G::SumAtMerge},
      {S::JMinus, G::SumAtSplit}};

  std::set<S> chi_plus;
  for (const auto& sig : table.signatures()) {
    const std::string name(symbol_name(sig.name));
    Sign name_sign = name.back() == '+' ? Sign::Plus : Sign::Minus;
    if (sig.sign != name_sign) bad.push_back(name + ": sign field does not match the name");
    int wf_total = sig.wf_star.in + sig.wf_star.out;
    if (wf_total != 1 && wf_total != 3) bad.push_back(name + ": W_f star must total 1 or 3");
    if (!sig.kind()) bad.push_back(name + ": W_f star is not a Morse vertex pattern");
    int v_total = sig.v_star.in + sig.v_star.out;
    if (v_total < 1 || v_total > 3) bad.push_back(name + ": V star must total 1, 2 or 3");
    if (sig.genus_rule != expected_rule.at(sig.name))
      bad.push_back(name + " must be " + std::string(genus_rule_name(expected_rule.at(sig.name))));
    if (sig.chi_delta != 1 && sig.chi_delta != -1) bad.push_back(name + ": chi delta must be +1 or -1");
    if (sig.chi_delta == 1) chi_plus.insert(sig.name);
  }

  const std::set<S> expected_chi_plus = {S::MPlus, S::NPlus, S::SMinus, S::GMinus, S::JMinus};
  if (chi_plus != expected_chi_plus)
    bad.push_back("χ balance: the +1 symbols must be exactly {M+, N+, S-, G-, J-}");

  const std::map<std::pair<VertexKind, Sign>, std::set<S>> expected_lookup = {
      {{VertexKind::Born, Sign::Plus}, {S::MPlus}},
      {{VertexKind::Born, Sign::Minus}, {S::MMinus}},
      {{VertexKind::Dies, Sign::Plus}, {S::NPlus}},
      {{VertexKind::Dies, Sign::Minus}, {S::NMinus}},
      {{VertexKind::Split, Sign::Plus}, {S::SPlus}},
      {{VertexKind::Split, Sign::Minus}, {S::GMinus, S::JMinus}},
      {{VertexKind::Merge, Sign::Plus}, {S::GPlus, S::JPlus}},
      {{VertexKind::Merge, Sign::Minus}, {S::SMinus}},
  };
  for (const auto& [key, want] : expected_lookup) {
    auto got_list = table.compatible_symbols(key.first, key.second);
    std::set<S> got(got_list.begin(), got_list.end());
    if (got != want)
      bad.push_back("lookup (" + std::string(kind_name(key.first)) + "," + sign_char(key.second) +
                    ") does not match the model list");
  }

  // Source/sink membership: only G+ creates genus, only G- consumes it.
  for (const auto& sig : table.signatures()) {
    bool source = sig.genus_rule == G::SourceOne, sink = sig.genus_rule == G::SinkOne;
    if (source != (sig.name == S::GPlus) || sink != (sig.name == S::GMinus))
      bad.push_back(std::string(symbol_name(sig.name)) + ": genus source/sink does not match G+/G- membership");
  }
  return report;
}

}  // namespace reebext
