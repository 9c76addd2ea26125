#include <cctype>

#include "zcp/error.hpp"
#include "zcp/zmod.hpp"

namespace zcp {

ModSpec ModSpec::triv(long n) {
  ModSpec s;
  s.kind = n == 0 ? Kind::TrivFree : Kind::TrivCyclic;
  s.n = n;
  s.rank = n == 0 ? 1 : 0;
  return s;
}

ModSpec ModSpec::triv_free(long rank) {
  ModSpec s;
  s.kind = Kind::TrivFree;
  s.rank = rank;
  return s;
}

ModSpec ModSpec::cyclic_r(long q, long k) {
  ModSpec s;
  s.kind = Kind::CyclicR;
  s.q = q;
  s.k = k;
  return s;
}

ModSpec ModSpec::free_r(long rank) {
  ModSpec s;
  s.kind = Kind::FreeR;
  s.rank = rank;
  return s;
}

ModSpec ModSpec::twisted(long n, long a) {
  ModSpec s;
  s.kind = Kind::CyclicTwisted;
  s.n = n;
  s.a = a;
  return s;
}

ModSpec ModSpec::sum(std::vector<ModSpec> parts) {
  if (parts.size() == 1) return std::move(parts[0]);
  ModSpec s;
  s.kind = Kind::Sum;
  s.children = std::move(parts);
  return s;
}

bool ModSpec::is_building_block_tree() const {
  switch (kind) {
    case Kind::TrivCyclic:
    case Kind::CyclicR:
      return true;
    case Kind::Sum:
      for (const auto& c : children)
        if (!c.is_building_block_tree()) return false;
      return true;
    default:
      return false;  // infinite leaves and twisted cyclics
  }
}

std::string ModSpec::to_string() const {
  switch (kind) {
    case Kind::TrivCyclic:
      return "triv(" + std::to_string(n) + ")";
    case Kind::TrivFree:
      if (rank == 1) return "triv(0)";
      return "(" + [&] {
        std::string r;
        for (long i = 0; i < rank; ++i) r += (i ? " + " : "") + std::string("triv(0)");
        return r;
      }() + ")";
    case Kind::CyclicR:
      return "cyclicR(" + std::to_string(q) + "," + std::to_string(k) + ")";
    case Kind::FreeR:
      return "freeR(" + std::to_string(rank) + ")";
    case Kind::CyclicTwisted:
      return "cyclic(" + std::to_string(n) + "," + std::to_string(a) + ")";
    case Kind::Sum: {
      if (children.empty()) return "0";
      std::string r;
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (i) r += " + ";
        const auto& c = children[i];
        r += c.kind == Kind::Sum && !c.children.empty() ? "(" + c.to_string() + ")" : c.to_string();
      }
      return r;
    }
  }
  return "?";
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  ModSpec parse() {
    ModSpec e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("module spec: " + what + " at offset " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  long number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    if (pos_ - start > 9) fail("number too large");
    return std::stol(s_.substr(start, pos_ - start));
  }
  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  ModSpec expr() {
    std::vector<ModSpec> parts;
    parts.push_back(term());
    while (eat('+')) parts.push_back(term());
    return ModSpec::sum(std::move(parts));
  }

  ModSpec term() {
    if (eat('(')) {
      ModSpec e = expr();
      expect(')');
      return e;
    }
    skip();
    if (pos_ < s_.size() && s_[pos_] == '0') {
      ++pos_;
      return ModSpec::sum({});
    }
    std::string w = word();
    if (w.empty()) fail("expected a module term");
    expect('(');
    ModSpec out;
    if (w == "triv") {
      out = ModSpec::triv(number());
    } else if (w == "cyclicR") {
      long q = number();
      expect(',');
      long k = number();
      if (!is_prime(q)) fail("cyclicR needs a prime q");
      if (k < 1) fail("cyclicR needs k >= 1");
      out = ModSpec::cyclic_r(q, k);
    } else if (w == "freeR") {
      long r = number();
      if (r < 1) fail("freeR needs rank >= 1");
      out = ModSpec::free_r(r);
    } else if (w == "cyclic") {
      long n = number();
      expect(',');
      long a = number();
      if (n < 1) fail("cyclic needs n >= 1");
      out = ModSpec::twisted(n, a);
    } else {
      fail("unknown module keyword '" + w + "'");
    }
    expect(')');
    return out;
  }
};

}  // namespace

ModSpec parse_modspec(const std::string& text) { return Parser(text).parse(); }

}  // namespace zcp
