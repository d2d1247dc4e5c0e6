// Copyright 2026 The qinst Authors
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

#include "qinst/qasm.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "qinst/errors.hpp"

namespace qinst {

namespace {

enum class Tok { kIdent, kNumber, kString, kSymbol, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  std::size_t line = 0;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      out.push_back({Tok::kIdent, std::string(src.substr(i, j - i)), line});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) {
        ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      out.push_back({Tok::kNumber, std::string(src.substr(i, j - i)), line});
      i = j;
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"') throw ParseError(line, "unterminated string");
      out.push_back({Tok::kString, std::string(src.substr(i + 1, j - i - 1)), line});
      i = j + 1;
    } else if (std::string_view(";,()[]*/+-").find(c) != std::string_view::npos) {
      out.push_back({Tok::kSymbol, std::string(1, c), line});
      ++i;
    } else {
      throw ParseError(line, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::kEnd, "", line});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Circuit run() {
    header();
    std::optional<Circuit> circuit;
    while (peek().kind != Tok::kEnd) {
      const Token &t = peek();
      if (t.kind != Tok::kIdent) throw ParseError(t.line, "expected a statement");
      if (t.text == "qreg") {
        if (circuit) throw ParseError(t.line, "only one qreg is supported");
        circuit = qreg();
      } else if (t.text == "u3" || t.text == "cx") {
        if (!circuit) throw ParseError(t.line, "gate before qreg declaration");
        if (t.text == "u3") {
          u3(*circuit);
        } else {
          cx(*circuit);
        }
      } else if (t.text == "include") {
        include();
      } else {
        throw ParseError(t.line, "unknown gate or statement '" + t.text + "'");
      }
    }
    if (!circuit) throw ParseError(peek().line, "missing qreg declaration");
    return std::move(*circuit);
  }

 private:
  const Token &peek() const { return toks_[pos_]; }
  const Token &next() {
    const Token &t = toks_[pos_];
    if (t.kind != Tok::kEnd) ++pos_;
    return t;
  }
  bool accept(std::string_view sym) {
    if (peek().kind == Tok::kSymbol && peek().text == sym) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view sym) {
    if (!accept(sym)) {
      throw ParseError(peek().line, "expected '" + std::string(sym) + "' but found '" +
                                        peek().text + "'");
    }
  }

  void header() {
    const Token &t = next();
    if (t.kind != Tok::kIdent || t.text != "OPENQASM") {
      throw ParseError(t.line, "missing 'OPENQASM 2.0;' header");
    }
    const Token &v = next();
    if (v.kind != Tok::kNumber || std::stod(v.text) != 2.0) {
      throw ParseError(v.line, "only OpenQASM 2.0 is supported");
    }
    expect(";");
  }

  void include() {
    const std::size_t line = next().line;
    const Token &s = next();
    if (s.kind != Tok::kString) throw ParseError(line, "include expects a file name");
    if (s.text != "qelib1.inc") {
      throw ParseError(line, "unsupported include \"" + s.text + "\"");
    }
    expect(";");
  }

  Circuit qreg() {
    const std::size_t line = next().line;
    const Token &name = next();
    if (name.kind != Tok::kIdent) throw ParseError(line, "qreg expects a name");
    reg_name_ = name.text;
    expect("[");
    reg_size_ = integer();
    expect("]");
    expect(";");
    if (reg_size_ < 1) throw ParseError(line, "qreg size must be positive");
    return Circuit(reg_size_);
  }

  int integer() {
    const Token &t = next();
    int value = 0;
    const auto *end = t.text.data() + t.text.size();
    auto [ptr, ec] = std::from_chars(t.text.data(), end, value);
    if (t.kind != Tok::kNumber || ec != std::errc() || ptr != end) {
      throw ParseError(t.line, "expected an integer, found '" + t.text + "'");
    }
    return value;
  }

  int qubit() {
    const Token &name = next();
    if (name.kind != Tok::kIdent || name.text != reg_name_) {
      throw ParseError(name.line, "unknown register '" + name.text + "'");
    }
    expect("[");
    const std::size_t line = peek().line;
    const int q = integer();
    expect("]");
    if (q < 0 || q >= reg_size_) {
      throw BoundsError("line " + std::to_string(line) + ": qubit index " +
                        std::to_string(q) + " outside register of size " +
                        std::to_string(reg_size_));
    }
    return q;
  }

  double expr() {
    double v = term();
    for (;;) {
      if (accept("+")) {
        v += term();
      } else if (accept("-")) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = unary();
    for (;;) {
      if (accept("*")) {
        v *= unary();
      } else if (accept("/")) {
        v /= unary();
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return primary();
  }

  double primary() {
    const Token &t = next();
    if (t.kind == Tok::kNumber) {
      double v = 0.0;
      const auto *end = t.text.data() + t.text.size();
      auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
      if (ec != std::errc() || ptr != end) {
        throw ParseError(t.line, "malformed number '" + t.text + "'");
      }
      return v;
    }
    if (t.kind == Tok::kIdent && t.text == "pi") return std::numbers::pi;
    if (t.kind == Tok::kSymbol && t.text == "(") {
      const double v = expr();
      expect(")");
      return v;
    }
    throw ParseError(t.line, "malformed parameter expression near '" + t.text + "'");
  }

  void u3(Circuit &circuit) {
    next();
    expect("(");
    const double theta = expr();
    expect(",");
    const double phi = expr();
    expect(",");
    const double lambda = expr();
    expect(")");
    const int q = qubit();
    expect(";");
    circuit.append(u3_gate(q, theta, phi, lambda));
  }

  void cx(Circuit &circuit) {
    const std::size_t line = next().line;
    const int control = qubit();
    expect(",");
    const int target = qubit();
    expect(";");
    if (control == target) throw ParseError(line, "cx control equals target");
    circuit.append(cx_gate(control, target));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string reg_name_;
  int reg_size_ = 0;
};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool matches(const ComplexMatrix &a, const ComplexMatrix &b) {
  return (a - b).cwiseAbs().maxCoeff() <= 1e-12;
}

}  // namespace

Circuit parse_qasm(std::string_view text) { return Parser(tokenize(text)).run(); }

std::string write_qasm(const Circuit &circuit) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << circuit.num_qubits()
      << "];\n";
  for (const Gate &g : circuit.gates()) {
    if (g.arity() == 1) {
      const ZyzAngles a = zyz_reparameterize(g.unitary);
      out << "u3(" << fmt_double(a.theta) << "," << fmt_double(a.phi) << ","
          << fmt_double(a.lambda) << ") q[" << g.location[0] << "];";
      if (std::abs(a.phase) > 1e-12) out << " // phase " << fmt_double(a.phase);
      out << "\n";
      continue;
    }
    if (g.arity() == 2 && !g.is_variable()) {
      const int lo = g.location[0];
      const int hi = g.location[1];
      if (matches(g.unitary, cnot_matrix(lo, hi))) {
        out << "cx q[" << lo << "],q[" << hi << "];\n";
        continue;
      }
      if (matches(g.unitary, cnot_matrix(hi, lo))) {
        out << "cx q[" << hi << "],q[" << lo << "];\n";
        continue;
      }
    }
    throw UnsupportedExportError(
        std::string(g.is_variable() ? "variable " : "fixed ") +
        std::to_string(g.arity()) + "-qubit gate '" + g.label +
        "' cannot be written as u3/cx");
  }
  return out.str();
}

}  // namespace qinst
