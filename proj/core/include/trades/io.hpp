#pragma once

#include <string>

#include "trades/latin.hpp"
#include "trades/model.hpp"

// Text and JSON codecs for trades and Latin triples, plus the parser for
// the compact one-based notation used by the embedded catalog data
// (digits 1-9, then a=10 ... g=16, shifted to 0-based internally).

namespace trades::io {

struct EmitOptions {
  bool one_based = false;  // display labels in the compact one-based notation
};

// Line 1 "trade mu=<int> k=<int> t=<int>", then per collection a line
// "collection <i>" followed by one block per line (ascending decimal,
// space-separated).  '#' starts a comment, blank lines are ignored.
std::string emit_trade(const Trade& trade, const EmitOptions& opts = {});
Trade parse_trade(const std::string& text);

std::string trade_to_json(const Trade& trade);
Trade trade_from_json(const std::string& text);

// Line 1 "latin m=<int> d=<int>", then one "i j s1 s2 s3" line per filled
// cell, sorted by (i, j).
std::string emit_latin(const LatinTriple& triple);
LatinTriple parse_latin(const std::string& text);

std::string latin_to_json(const LatinTriple& triple);
LatinTriple latin_from_json(const std::string& text);

// Compact one-based tokens: "123" -> {0,1,2}, "79f" -> {6,8,14}.
Block parse_compact_block(const std::string& token);
// Comma/whitespace-separated token list.
Collection parse_compact_blocks(const std::string& text);

// Cycle notation over compact one-based labels: "(1 e)(2 4)" etc.
Permutation parse_cycles(const std::string& text);

std::string compact_label(Element x);  // 0-based label -> one-based token

}  // namespace trades::io
