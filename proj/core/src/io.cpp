#include "trades/io.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

namespace trades::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw TradeError(ErrorCode::ParseError, msg);
}

// One-based compact labels: 1..9 then a=10..g=16 (0-based 0..15).
int compact_value(char c) {
  if (c >= '1' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'g') return 10 + (c - 'a');
  fail(std::string("bad label character '") + c + "'");
}

std::vector<std::string> nonblank_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(a, b - a + 1));
  }
  return out;
}

long parse_kv(const std::string& word, const std::string& key) {
  if (word.size() <= key.size() + 1 || word.compare(0, key.size(), key) != 0 ||
      word[key.size()] != '=')
    fail("expected " + key + "=<int>, got '" + word + "'");
  try {
    return std::stol(word.substr(key.size() + 1));
  } catch (const std::exception&) {
    fail("bad integer in '" + word + "'");
  }
}

}  // namespace

std::string compact_label(Element x) {
  int v = x + 1;
  if (v >= 1 && v <= 9) return std::string(1, static_cast<char>('0' + v));
  if (v >= 10 && v <= 16) return std::string(1, static_cast<char>('a' + v - 10));
  return std::to_string(v);
}

std::string emit_trade(const Trade& trade, const EmitOptions& opts) {
  std::ostringstream os;
  os << "trade mu=" << trade.mu << " k=" << trade.k << " t=" << trade.t
     << "\n";
  Element max_label = 0;
  for (const auto& c : trade.collections)
    for (const auto& b : c)
      for (Element x : b) max_label = std::max(max_label, x);
  const bool compact = opts.one_based && max_label <= 15;
  for (size_t i = 0; i < trade.collections.size(); ++i) {
    os << "collection " << i + 1 << "\n";
    for (const auto& b : trade.collections[i]) {
      if (compact) {
        for (Element x : b) os << compact_label(x);
      } else {
        for (size_t j = 0; j < b.size(); ++j) {
          if (j) os << ' ';
          os << (opts.one_based ? b[j] + 1 : b[j]);
        }
      }
      os << "\n";
    }
  }
  return os.str();
}

Trade parse_trade(const std::string& text) {
  auto lines = nonblank_lines(text);
  if (lines.empty()) fail("empty trade document");
  std::istringstream hdr(lines[0]);
  std::string word;
  hdr >> word;
  if (word != "trade") fail("expected 'trade' header, got '" + word + "'");
  Trade out;
  std::string w1, w2, w3;
  hdr >> w1 >> w2 >> w3;
  out.mu = static_cast<int>(parse_kv(w1, "mu"));
  out.k = static_cast<int>(parse_kv(w2, "k"));
  out.t = static_cast<int>(parse_kv(w3, "t"));

  size_t i = 1;
  while (i < lines.size()) {
    std::istringstream ls(lines[i]);
    ls >> word;
    if (word != "collection")
      fail("expected 'collection <i>' line, got '" + lines[i] + "'");
    int idx = -1;
    ls >> idx;
    if (idx != static_cast<int>(out.collections.size()) + 1)
      fail("collections must be numbered consecutively from 1");
    ++i;
    Collection c;
    while (i < lines.size() && !lines[i].starts_with("collection")) {
      std::istringstream bs(lines[i]);
      Block b;
      long x;
      while (bs >> x) b.push_back(static_cast<Element>(x));
      if (!bs.eof()) fail("bad block line '" + lines[i] + "'");
      if (b.empty()) fail("empty block line");
      std::sort(b.begin(), b.end());
      c.push_back(std::move(b));
      ++i;
    }
    out.collections.push_back(std::move(c));
  }
  if (static_cast<int>(out.collections.size()) != out.mu)
    fail("declared mu=" + std::to_string(out.mu) + " but found " +
         std::to_string(out.collections.size()) + " collections");
  return out;
}

std::string trade_to_json(const Trade& trade) {
  json j;
  j["mu"] = trade.mu;
  j["k"] = trade.k;
  j["t"] = trade.t;
  j["collections"] = trade.collections;
  return j.dump(2) + "\n";
}

Trade trade_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(std::string("bad JSON: ") + e.what());
  }
  Trade out;
  try {
    out.mu = j.at("mu").get<int>();
    out.k = j.at("k").get<int>();
    out.t = j.at("t").get<int>();
    out.collections = j.at("collections").get<std::vector<Collection>>();
  } catch (const std::exception& e) {
    fail(std::string("bad trade document: ") + e.what());
  }
  for (auto& c : out.collections)
    for (auto& b : c) std::sort(b.begin(), b.end());
  return out;
}

std::string emit_latin(const LatinTriple& triple) {
  std::ostringstream os;
  os << "latin m=" << triple.order << " d=" << triple.degree << "\n";
  auto cells = triple.cells;
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  for (const auto& c : cells) {
    os << c.row << ' ' << c.col << ' ' << c.symbols[0] << ' ' << c.symbols[1]
       << ' ' << c.symbols[2] << "\n";
  }
  return os.str();
}

LatinTriple parse_latin(const std::string& text) {
  auto lines = nonblank_lines(text);
  if (lines.empty()) fail("empty latin document");
  std::istringstream hdr(lines[0]);
  std::string word, w1, w2;
  hdr >> word;
  if (word != "latin") fail("expected 'latin' header");
  hdr >> w1 >> w2;
  LatinTriple out;
  out.order = static_cast<int>(parse_kv(w1, "m"));
  out.degree = static_cast<int>(parse_kv(w2, "d"));
  for (size_t i = 1; i < lines.size(); ++i) {
    std::istringstream ls(lines[i]);
    LatinCell c;
    if (!(ls >> c.row >> c.col >> c.symbols[0] >> c.symbols[1] >> c.symbols[2]))
      fail("bad cell line '" + lines[i] + "'");
    out.cells.push_back(c);
  }
  std::sort(out.cells.begin(), out.cells.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.row, a.col) < std::tie(b.row, b.col);
            });
  return out;
}

std::string latin_to_json(const LatinTriple& triple) {
  json cells = json::array();
  for (const auto& c : triple.cells)
    cells.push_back({{"row", c.row},
                     {"col", c.col},
                     {"symbols", c.symbols}});
  json j;
  j["m"] = triple.order;
  j["d"] = triple.degree;
  j["cells"] = cells;
  return j.dump(2) + "\n";
}

LatinTriple latin_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(std::string("bad JSON: ") + e.what());
  }
  LatinTriple out;
  try {
    out.order = j.at("m").get<int>();
    out.degree = j.at("d").get<int>();
    for (const auto& jc : j.at("cells")) {
      LatinCell c;
      c.row = jc.at("row").get<int>();
      c.col = jc.at("col").get<int>();
      c.symbols = jc.at("symbols").get<std::array<int, 3>>();
      out.cells.push_back(c);
    }
  } catch (const std::exception& e) {
    fail(std::string("bad latin document: ") + e.what());
  }
  return out;
}

Block parse_compact_block(const std::string& token) {
  Block b;
  for (char c : token) b.push_back(compact_value(c) - 1);
  std::sort(b.begin(), b.end());
  if (std::adjacent_find(b.begin(), b.end()) != b.end())
    fail("repeated element in block '" + token + "'");
  return b;
}

Collection parse_compact_blocks(const std::string& text) {
  Collection out;
  std::string token;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) out.push_back(parse_compact_block(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(parse_compact_block(token));
  return out;
}

Permutation parse_cycles(const std::string& text) {
  Permutation pi;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    if (i >= text.size()) break;
    if (text[i] != '(') fail("expected '(' in cycle notation");
    ++i;
    std::vector<Element> cycle;
    while (i < text.size() && text[i] != ')') {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
        continue;
      }
      cycle.push_back(compact_value(text[i]) - 1);
      ++i;
    }
    if (i >= text.size()) fail("unterminated cycle");
    ++i;  // ')'
    for (size_t j = 0; j + 1 < cycle.size(); ++j)
      pi.mapping[cycle[j]] = cycle[j + 1];
    if (cycle.size() > 1) pi.mapping[cycle.back()] = cycle.front();
  }
  pi.validate();
  return pi;
}

}  // namespace trades::io
