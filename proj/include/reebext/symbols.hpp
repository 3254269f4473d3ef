#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reebext/reeb_graph.hpp"

namespace reebext {

/// The ten local models of a collapse around a vertex.
enum class Symbol { MPlus, MMinus, NPlus, NMinus, SPlus, SMinus, GPlus, GMinus, JPlus, JMinus };

inline constexpr std::array<Symbol, 10> kAllSymbols = {Symbol::MPlus, Symbol::MMinus, Symbol::NPlus, Symbol::NMinus,
                                                       Symbol::SPlus, Symbol::SMinus, Symbol::GPlus, Symbol::GMinus,
                                                       Symbol::JPlus, Symbol::JMinus};

std::string_view symbol_name(Symbol s);
std::optional<Symbol> parse_symbol(std::string_view s);

// Genus rules are read in sweep direction.
enum class GenusRule { Conserve, SourceOne, SinkOne, SumAtMerge, SumAtSplit, ForceZeroOut, ForceZeroIn };

/// How a slot transition rewrites the level-surface components.
enum class Participation {
  Create,     // new component holding only the newborn strand
  Drill,      // newborn strand joins a chosen component (possibly closed)
  Release,    // dying strand leaves its component, which continues
  Terminate,  // component made of the dying strand alone ends
  Widen,      // in-strand replaced by both out-strands, same component
  Join,       // both in-strands in one component, replaced by the out-strand
  Fuse,       // in-strands in different components, which merge
  Separate,   // component splits in two around the out-strands
};

std::string_view genus_rule_name(GenusRule r);
std::optional<GenusRule> parse_genus_rule(std::string_view s);
std::string_view participation_name(Participation p);
std::optional<Participation> parse_participation(std::string_view s);

struct Star {
  int in = 0;
  int out = 0;
  bool operator==(const Star&) const = default;
};

struct SymbolSignature {
  Symbol name = Symbol::MPlus;
  Sign sign = Sign::Plus;
  Star wf_star;  // strands at the surface vertex, sweep-directed
  Star v_star;   // edges at the image vertex
  Participation participation = Participation::Create;
  GenusRule genus_rule = GenusRule::Conserve;
  int chi_delta = 0;

  std::optional<VertexKind> kind() const;
  bool operator==(const SymbolSignature&) const = default;
};

class SymbolTable {
 public:
  explicit SymbolTable(std::array<SymbolSignature, 10> signatures);

  static const SymbolTable& standard();
  /// Reads an override file: one "symbol <name> sign=.. wf=i,o v=i,o
  /// participation=.. genus=.. chi=.." line per symbol. Symbols not listed
  /// keep their standard signature.
  static SymbolTable parse(std::string_view text);

  const SymbolSignature& signature(Symbol s) const { return sigs_[static_cast<int>(s)]; }
  SymbolSignature& mutable_signature(Symbol s) { return sigs_[static_cast<int>(s)]; }
  const std::array<SymbolSignature, 10>& signatures() const { return sigs_; }

  /// Symbols whose W_f star and sign match, in table order.
  std::vector<Symbol> compatible_symbols(VertexKind kind, Sign sign) const;

  std::string serialize() const;

 private:
  std::array<SymbolSignature, 10> sigs_;
};

const SymbolSignature& signature(Symbol s);
std::vector<Symbol> compatible_symbols(VertexKind kind, Sign sign);

struct TableReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

TableReport consistency_check(const SymbolTable& table);

}  // namespace reebext
