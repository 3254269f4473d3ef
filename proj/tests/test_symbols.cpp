#include <map>
#include <set>

#include "doctest.h"
#include "reebext/symbols.hpp"

using namespace reebext;

namespace {

bool has_violation(const TableReport& r, const std::string& needle) {
  for (const auto& v : r.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

// Change in level-surface components, boundary circles and total genus
// across each local model, read from what the model does to the surface.
struct LevelChange {
  int components, boundary, genus;
};

const std::map<Symbol, LevelChange> kLevelChange = {
    {Symbol::MPlus, {+1, +1, 0}},  {Symbol::MMinus, {0, +1, 0}}, {Symbol::NPlus, {0, -1, 0}},
    {Symbol::NMinus, {-1, -1, 0}}, {Symbol::SPlus, {0, +1, 0}},  {Symbol::SMinus, {0, -1, 0}},
    {Symbol::GPlus, {0, -1, +1}},  {Symbol::GMinus, {0, +1, -1}}, {Symbol::JPlus, {-1, -1, 0}},
    {Symbol::JMinus, {+1, +1, 0}},
};

}  // namespace

TEST_CASE("signatures of the local models") {
  const auto& gp = signature(Symbol::GPlus);
  CHECK(gp.kind() == VertexKind::Merge);
  CHECK(gp.v_star == Star{1, 1});
  CHECK(gp.genus_rule == GenusRule::SourceOne);
  CHECK(gp.chi_delta == -1);

  const auto& mp = signature(Symbol::MPlus);
  CHECK(mp.kind() == VertexKind::Born);
  CHECK(mp.v_star == Star{0, 1});
  CHECK(mp.genus_rule == GenusRule::ForceZeroOut);
  CHECK(mp.chi_delta == 1);

  const auto& jm = signature(Symbol::JMinus);
  CHECK(jm.kind() == VertexKind::Split);
  CHECK(jm.v_star == Star{1, 2});
  CHECK(jm.genus_rule == GenusRule::SumAtSplit);
  CHECK(jm.chi_delta == 1);
}

TEST_CASE("chi deltas follow from the change of the level surface") {
  for (Symbol s : kAllSymbols) {
    const auto c = kLevelChange.at(s);
    const int chi = 2 * c.components - 2 * c.genus - c.boundary;
    CHECK_MESSAGE(signature(s).chi_delta == chi, symbol_name(s));
  }
}

TEST_CASE("compatible symbols per kind and sign") {
  using V = std::vector<Symbol>;
  CHECK(compatible_symbols(VertexKind::Merge, Sign::Plus) == V{Symbol::GPlus, Symbol::JPlus});
  CHECK(compatible_symbols(VertexKind::Born, Sign::Plus) == V{Symbol::MPlus});
  CHECK(compatible_symbols(VertexKind::Merge, Sign::Minus) == V{Symbol::SMinus});
  CHECK(compatible_symbols(VertexKind::Split, Sign::Minus) == V{Symbol::GMinus, Symbol::JMinus});
}

TEST_CASE("every kind and sign has a symbol; only two pairs are ambiguous") {
  int ambiguous = 0;
  for (auto kind : {VertexKind::Born, VertexKind::Dies, VertexKind::Split, VertexKind::Merge})
    for (auto sign : {Sign::Plus, Sign::Minus}) {
      auto c = compatible_symbols(kind, sign);
      CHECK_FALSE(c.empty());
      for (Symbol s : c) CHECK(signature(s).sign == sign);
      if (c.size() == 2) ++ambiguous;
    }
  CHECK(ambiguous == 2);
}

TEST_CASE("chi deltas split five and five") {
  std::set<Symbol> plus;
  for (Symbol s : kAllSymbols)
    if (signature(s).chi_delta > 0) plus.insert(s);
  CHECK(plus == std::set<Symbol>{Symbol::MPlus, Symbol::NPlus, Symbol::SMinus, Symbol::GMinus, Symbol::JMinus});
}

TEST_CASE("consistency check") {
  CHECK(consistency_check(SymbolTable::standard()).ok());

  SymbolTable conserve = SymbolTable::standard();
  conserve.mutable_signature(Symbol::GPlus).genus_rule = GenusRule::Conserve;
  CHECK(has_violation(consistency_check(conserve), "G+ must be SourceOne"));

  SymbolTable chi = SymbolTable::standard();
  chi.mutable_signature(Symbol::MPlus).chi_delta = -1;
  CHECK(has_violation(consistency_check(chi), "χ balance"));
}

TEST_CASE("names and table text round-trip") {
  for (Symbol s : kAllSymbols) CHECK(parse_symbol(symbol_name(s)) == s);
  CHECK_FALSE(parse_symbol("X+"));
  const auto text = SymbolTable::standard().serialize();
  auto back = SymbolTable::parse(text);
  CHECK(back.signatures() == SymbolTable::standard().signatures());
  CHECK(back.serialize() == text);

  auto partial = SymbolTable::parse("# override one symbol\nsymbol G+ genus=Conserve\n");
  CHECK(partial.signature(Symbol::GPlus).genus_rule == GenusRule::Conserve);
  CHECK(partial.signature(Symbol::JPlus) == signature(Symbol::JPlus));
  CHECK_THROWS_AS(SymbolTable::parse("symbol Q+ sign=+\n"), ParseError);
  CHECK_THROWS_AS(SymbolTable::parse("symbol G+ genus=Sideways\n"), ParseError);
}
