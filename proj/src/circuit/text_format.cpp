// Copyright 2026 The QAL Authors
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

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "qal/circuit.hpp"
#include "qal/error.hpp"

namespace qal {
namespace {

[[noreturn]] void text_fail(ErrorCode code, std::size_t line, std::size_t col, const std::string& what) {
  Error err(code, std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  err.line = line;
  err.column = col;
  throw err;
}

// Cursor over one source line. Columns are 1-based.
class LineCursor {
 public:
  LineCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  std::size_t column() const { return pos_ + 1; }
  std::size_t line() const { return line_; }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  bool skip_space() {
    const auto start = pos_;
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
    return pos_ != start;
  }

  std::string_view word() {
    const auto start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                         text_[pos_] == '.')) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  void expect(char ch, const char* what) {
    if (peek() != ch) syntax(std::string("expected ") + what);
    ++pos_;
  }

  bool accept(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  unsigned integer(const char* what) {
    const auto start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) {
      pos_ = start;
      syntax(std::string("expected ") + what);
    }
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{}) text_fail(ErrorCode::kSemanticError, line_, start + 1, std::string(what) + " too large");
    return value;
  }

  float angle() {
    const auto start = pos_;
    while (!at_end() && text_[pos_] != ')' && text_[pos_] != ' ' && text_[pos_] != '\t') ++pos_;
    float value = 0.0f;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) {
      text_fail(ErrorCode::kSemanticError, line_, start + 1, "angle out of float range");
    }
    if (ec != std::errc{} || ptr != last || start == pos_) {
      text_fail(ErrorCode::kSyntaxError, line_, start + 1, "malformed angle");
    }
    if (!std::isfinite(value)) text_fail(ErrorCode::kSemanticError, line_, start + 1, "angle must be finite");
    return value;
  }

  [[noreturn]] void syntax(const std::string& what) const {
    text_fail(ErrorCode::kSyntaxError, line_, column(), what);
  }

  // Trailing whitespace and an optional comment are the only things allowed
  // after a complete statement.
  void finish() {
    skip_space();
    if (!at_end() && peek() != '#') syntax("unexpected trailing input");
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct ParseState {
  std::optional<unsigned> qubits;
  std::optional<unsigned> cbits;
  bool seen_instruction = false;
  Circuit circuit;
};

unsigned operand(LineCursor& cur, char prefix, unsigned limit, const char* kind) {
  const auto col = cur.column();
  if (cur.peek() != prefix) cur.syntax(std::string("expected ") + kind + " operand '" + prefix + "<n>'");
  cur.expect(prefix, kind);
  const unsigned index = cur.integer("index");
  if (index >= limit) {
    text_fail(ErrorCode::kSemanticError, cur.line(), col,
              std::string(kind) + " index " + std::to_string(index) + " out of range (have " +
                  std::to_string(limit) + ")");
  }
  return index;
}

void parse_directive(LineCursor& cur, ParseState& st) {
  const auto col = cur.column();
  const auto name = cur.word();
  std::optional<unsigned>* slot = nullptr;
  unsigned lo = 0;
  unsigned hi = 0;
  if (name == ".qubits") {
    slot = &st.qubits;
    lo = 1;
    hi = kMaxQubits;
  } else if (name == ".cbits") {
    slot = &st.cbits;
    hi = kMaxCbits;
  } else {
    text_fail(ErrorCode::kSyntaxError, cur.line(), col, "unknown directive '" + std::string(name) + "'");
  }
  if (st.seen_instruction) {
    text_fail(ErrorCode::kSemanticError, cur.line(), col, "directives must precede instructions");
  }
  if (slot->has_value()) {
    text_fail(ErrorCode::kSemanticError, cur.line(), col, "duplicate " + std::string(name) + " directive");
  }
  if (!cur.skip_space()) cur.syntax("expected whitespace after directive");
  const auto value_col = cur.column();
  const unsigned value = cur.integer("count");
  if (value < lo || value > hi) {
    text_fail(ErrorCode::kSemanticError, cur.line(), value_col,
              std::string(name) + " must be in " + std::to_string(lo) + ".." + std::to_string(hi));
  }
  *slot = value;
  cur.finish();
}

void parse_instruction(LineCursor& cur, ParseState& st) {
  const auto col = cur.column();
  const auto name = cur.word();
  const auto op = opcode_from_mnemonic(name);
  if (!op) text_fail(ErrorCode::kSyntaxError, cur.line(), col, "unknown mnemonic '" + std::string(name) + "'");
  if (!st.qubits) text_fail(ErrorCode::kSemanticError, cur.line(), col, "missing .qubits directive");
  if (!st.seen_instruction) {
    st.seen_instruction = true;
    st.circuit.num_qubits = *st.qubits;
    st.circuit.num_cbits = st.cbits.value_or(0);
  }
  const unsigned nq = st.circuit.num_qubits;

  Instruction ins{*op, 0, 0, 0, 0.0f};
  if (is_parameterized(*op)) {
    if (cur.peek() != '(') cur.syntax("rotation needs an angle '(<radians>)'");
    cur.expect('(', "'('");
    cur.skip_space();
    ins.param = cur.angle();
    cur.skip_space();
    cur.expect(')', "')'");
  } else if (cur.peek() == '(') {
    cur.syntax("'" + std::string(name) + "' takes no angle");
  }

  if (*op == Opcode::kNop) {
    cur.finish();
    st.circuit.add(ins);
    return;
  }
  if (!cur.skip_space()) cur.syntax("expected whitespace before operands");
  ins.q0 = static_cast<std::uint8_t>(operand(cur, 'q', nq, "qubit"));
  if (is_two_qubit(*op)) {
    cur.skip_space();
    cur.expect(',', "','");
    cur.skip_space();
    const auto q1_col = cur.column();
    ins.q1 = static_cast<std::uint8_t>(operand(cur, 'q', nq, "qubit"));
    if (ins.q1 == ins.q0) text_fail(ErrorCode::kSemanticError, cur.line(), q1_col, "two-qubit gate needs distinct qubits");
  } else if (*op == Opcode::kMeasure) {
    cur.skip_space();
    if (!cur.accept("->")) cur.syntax("expected '->'");
    cur.skip_space();
    ins.cbit = static_cast<std::uint8_t>(operand(cur, 'c', st.circuit.num_cbits, "cbit"));
  }
  cur.finish();
  st.circuit.add(ins);
}

}  // namespace

Circuit parse_text(std::string_view text) {
  ParseState st;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    LineCursor cur(text.substr(start, end - start), line_no);
    cur.skip_space();
    if (!cur.at_end() && cur.peek() != '#') {
      if (cur.peek() == '.') {
        parse_directive(cur, st);
      } else {
        parse_instruction(cur, st);
      }
    }
    start = end + 1;
  }
  if (!st.qubits) text_fail(ErrorCode::kSemanticError, line_no, 1, "missing .qubits directive");
  if (!st.seen_instruction) {
    st.circuit.num_qubits = *st.qubits;
    st.circuit.num_cbits = st.cbits.value_or(0);
  }
  return st.circuit;
}

std::string format_angle(float value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string emit_text(const Circuit& c) {
  validate(c);
  std::string out = ".qubits " + std::to_string(c.num_qubits) + "\n.cbits " + std::to_string(c.num_cbits) + "\n";
  for (const auto& ins : c.instructions) {
    out += mnemonic(ins.opcode);
    if (is_parameterized(ins.opcode)) out += "(" + format_angle(ins.param) + ")";
    if (uses_q0(ins.opcode)) out += " q" + std::to_string(ins.q0);
    if (is_two_qubit(ins.opcode)) out += ", q" + std::to_string(ins.q1);
    if (ins.opcode == Opcode::kMeasure) out += " -> c" + std::to_string(ins.cbit);
    out += '\n';
  }
  return out;
}

}  // namespace qal
