// Copyright 2026 The SparQ Authors
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

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sparq/error.hpp"
#include "sparq/qasm/ir.hpp"

namespace sparq::qasm {

namespace detail {

    enum class Tok { Ident, Real, Int, String, Punct, End };

    struct Token {
        Tok kind = Tok::End;
        std::string text;
        SourceLoc loc;
    };

    class Lexer {
    public:
        explicit Lexer(std::string_view src)
            : src_(src)
        {
        }

        std::vector<Token> run()
        {
            std::vector<Token> out;
            for (;;) {
                skip_space();
                const SourceLoc loc { line_, col_ };
                if (pos_ >= src_.size()) {
                    out.push_back({ Tok::End, "", loc });
                    return out;
                }
                const char c = src_[pos_];
                if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                    std::string id;
                    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                        id += advance();
                    }
                    out.push_back({ Tok::Ident, id, loc });
                } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                    out.push_back(number(loc));
                } else if (c == '"') {
                    advance();
                    std::string s;
                    while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
                        s += advance();
                    }
                    if (pos_ >= src_.size() || src_[pos_] != '"') {
                        throw syntax(loc, "unterminated string");
                    }
                    advance();
                    out.push_back({ Tok::String, s, loc });
                } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                    advance();
                    advance();
                    out.push_back({ Tok::Punct, "->", loc });
                } else if (std::string_view(";,()[]{}+-*/").find(c) != std::string_view::npos) {
                    out.push_back({ Tok::Punct, std::string(1, advance()), loc });
                } else {
                    throw syntax(loc, std::string("unexpected character '") + c + "'");
                }
            }
        }

        static Error syntax(SourceLoc loc, const std::string& msg)
        {
            return Error(Errc::SyntaxError, "line " + std::to_string(loc.line) + ", col " + std::to_string(loc.col) + ": " + msg);
        }

    private:
        char advance()
        {
            const char c = src_[pos_++];
            if (c == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            return c;
        }

        void skip_space()
        {
            while (pos_ < src_.size()) {
                const char c = src_[pos_];
                if (std::isspace(static_cast<unsigned char>(c))) {
                    advance();
                } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                    while (pos_ < src_.size() && src_[pos_] != '\n') {
                        advance();
                    }
                } else {
                    return;
                }
            }
        }

        Token number(SourceLoc loc)
        {
            std::string s;
            bool real = false;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                s += advance();
            }
            if (pos_ < src_.size() && src_[pos_] == '.') {
                real = true;
                s += advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    s += advance();
                }
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                const std::size_t save = pos_;
                std::string exp(1, src_[pos_]);
                std::size_t p = pos_ + 1;
                if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) {
                    exp += src_[p++];
                }
                if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                    real = true;
                    while (pos_ < p) {
                        advance();
                    }
                    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                        exp += advance();
                    }
                    s += exp;
                } else {
                    pos_ = save;
                }
            }
            return { real ? Tok::Real : Tok::Int, s, loc };
        }

        std::string_view src_;
        std::size_t pos_ = 0;
        int line_ = 1;
        int col_ = 1;
    };

    class Parser {
    public:
        explicit Parser(std::vector<Token> toks)
            : toks_(std::move(toks))
        {
        }

        CircuitIR run()
        {
            header();
            while (peek().kind != Tok::End) {
                statement();
            }
            return std::move(ir_);
        }

    private:
        const Token& peek() const { return toks_[i_]; }
        const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

        bool accept(std::string_view punct)
        {
            if (peek().kind == Tok::Punct && peek().text == punct) {
                ++i_;
                return true;
            }
            return false;
        }

        void expect(std::string_view punct)
        {
            if (!accept(punct)) {
                fail(peek(), "expected '" + std::string(punct) + "'");
            }
        }

        [[noreturn]] static void fail(const Token& t, const std::string& msg)
        {
            const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
            throw Lexer::syntax(t.loc, msg + ", found " + found);
        }

        std::string ident()
        {
            if (peek().kind != Tok::Ident) {
                fail(peek(), "expected identifier");
            }
            return next().text;
        }

        unsigned integer()
        {
            if (peek().kind != Tok::Int) {
                fail(peek(), "expected integer");
            }
            const Token& t = next();
            unsigned v = 0;
            const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc {} || p != t.text.data() + t.text.size()) {
                fail(t, "integer out of range");
            }
            return v;
        }

        void header()
        {
            const Token& t = peek();
            if (t.kind != Tok::Ident || t.text != "OPENQASM") {
                fail(t, "expected 'OPENQASM 2.0;' header");
            }
            next();
            const Token& v = peek();
            if ((v.kind != Tok::Real && v.kind != Tok::Int) || (v.text != "2.0" && v.text != "2")) {
                fail(v, "only OPENQASM 2.0 is supported");
            }
            next();
            expect(";");
        }

        void statement()
        {
            const Token& t = peek();
            if (t.kind != Tok::Ident) {
                fail(t, "expected statement");
            }
            const std::string word = t.text;
            if (word == "include") {
                next();
                if (peek().kind != Tok::String) {
                    fail(peek(), "expected file name");
                }
                next();
                expect(";");
                return;
            }
            if (word == "qreg" || word == "creg") {
                declaration(word == "qreg");
                return;
            }
            if (word == "gate" || word == "opaque" || word == "reset" || word == "if") {
                throw Error(Errc::UnsupportedGate,
                    "line " + std::to_string(t.loc.line) + ", col " + std::to_string(t.loc.col) + ": '" + word + "' is not supported");
            }
            if (word == "measure") {
                measure();
                return;
            }
            if (word == "barrier") {
                next();
                Instruction ins { "barrier", {}, operand_list(true), {}, t.loc };
                expect(";");
                ir_.body.push_back(std::move(ins));
                return;
            }
            if (word == "qram") {
                next();
                Instruction ins { "qram", {}, operand_list(true), {}, t.loc };
                expect(";");
                if (ins.qubits.size() != 2 || ins.qubits[0].index || ins.qubits[1].index) {
                    throw Lexer::syntax(t.loc, "qram takes two whole registers: qram addr, data;");
                }
                if (ins.qubits[0].reg == ins.qubits[1].reg) {
                    throw Lexer::syntax(t.loc, "qram address and data registers must differ");
                }
                ir_.body.push_back(std::move(ins));
                return;
            }
            gate();
        }

        void declaration(bool quantum)
        {
            const Token& kw = next();
            const std::string name = ident();
            expect("[");
            const unsigned size = integer();
            expect("]");
            expect(";");
            if (size == 0) {
                throw Lexer::syntax(kw.loc, "register '" + name + "' has size 0");
            }
            if (ir_.find_qreg(name) || ir_.find_creg(name)) {
                throw Lexer::syntax(kw.loc, "register '" + name + "' declared twice");
            }
            (quantum ? ir_.qregs : ir_.cregs).push_back({ name, size, kw.loc });
        }

        void measure()
        {
            const Token& kw = next();
            Instruction ins { "measure", {}, { operand(true) }, {}, kw.loc };
            expect("->");
            ins.cbits.push_back(operand(false));
            expect(";");
            const unsigned qs = ins.qubits[0].index ? 1 : ir_.find_qreg(ins.qubits[0].reg)->size;
            const unsigned cs = ins.cbits[0].index ? 1 : ir_.find_creg(ins.cbits[0].reg)->size;
            if (qs != cs) {
                throw Lexer::syntax(kw.loc, "measure operands have different sizes");
            }
            ir_.body.push_back(std::move(ins));
        }

        void gate()
        {
            const Token& t = next();
            std::string name = t.text;
            if (name == "U" || name == "CX") {
                name = name == "U" ? "u" : "cx";
            }
            const GateSignature* sig = find_gate(name);
            if (sig == nullptr) {
                throw Error(Errc::UnsupportedGate,
                    "line " + std::to_string(t.loc.line) + ", col " + std::to_string(t.loc.col) + ": gate '" + t.text + "'");
            }
            Instruction ins { name, {}, {}, {}, t.loc };
            if (accept("(")) {
                if (!accept(")")) {
                    do {
                        const Token& start = peek();
                        ins.params.push_back(expression());
                        if (!std::isfinite(ins.params.back())) {
                            throw Lexer::syntax(start.loc, "parameter is not finite");
                        }
                    } while (accept(","));
                    expect(")");
                }
            }
            if (ins.params.size() != sig->params) {
                throw Lexer::syntax(t.loc, "gate '" + name + "' takes " + std::to_string(sig->params) + " parameter(s)");
            }
            ins.qubits = operand_list(true);
            expect(";");
            if (ins.qubits.size() != sig->qubits) {
                throw Lexer::syntax(t.loc, "gate '" + name + "' takes " + std::to_string(sig->qubits) + " qubit(s)");
            }
            check_broadcast(ins);
            ir_.body.push_back(std::move(ins));
        }

        /// Whole-register operands must agree in size, and no qubit may
        /// appear twice in one application.
        void check_broadcast(const Instruction& ins) const
        {
            unsigned width = 1;
            for (const auto& op : ins.qubits) {
                if (!op.index) {
                    const unsigned size = ir_.find_qreg(op.reg)->size;
                    if (width != 1 && size != width) {
                        throw Lexer::syntax(ins.loc, "broadcast registers differ in size");
                    }
                    width = size;
                }
            }
            for (unsigned k = 0; k < width; ++k) {
                std::set<std::pair<std::string, unsigned>> seen;
                for (const auto& op : ins.qubits) {
                    if (!seen.emplace(op.reg, op.index.value_or(k)).second) {
                        throw Lexer::syntax(ins.loc, "repeated qubit operand " + op.reg + "[" + std::to_string(op.index.value_or(k)) + "]");
                    }
                }
            }
        }

        std::vector<Operand> operand_list(bool quantum)
        {
            std::vector<Operand> ops;
            do {
                ops.push_back(operand(quantum));
            } while (accept(","));
            return ops;
        }

        Operand operand(bool quantum)
        {
            const Token& t = peek();
            Operand op { ident(), std::nullopt };
            const RegDecl* reg = quantum ? ir_.find_qreg(op.reg) : ir_.find_creg(op.reg);
            if (reg == nullptr) {
                throw Error(Errc::UndeclaredRegister,
                    "line " + std::to_string(t.loc.line) + ", col " + std::to_string(t.loc.col) + ": "
                        + (quantum ? "qreg '" : "creg '") + op.reg + "' is not declared");
            }
            if (accept("[")) {
                const Token& it = peek();
                op.index = integer();
                if (*op.index >= reg->size) {
                    throw Lexer::syntax(it.loc, "index " + std::to_string(*op.index) + " out of range for '" + op.reg + "'");
                }
                expect("]");
            }
            return op;
        }

        double expression()
        {
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

        double term()
        {
            double v = factor();
            for (;;) {
                if (accept("*")) {
                    v *= factor();
                } else if (accept("/")) {
                    v /= factor();
                } else {
                    return v;
                }
            }
        }

        double factor()
        {
            if (accept("-")) {
                return -factor();
            }
            if (accept("+")) {
                return factor();
            }
            if (accept("(")) {
                const double v = expression();
                expect(")");
                return v;
            }
            const Token& t = peek();
            if (t.kind == Tok::Int || t.kind == Tok::Real) {
                next();
                double v = 0.0;
                const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (ec != std::errc {} || p != t.text.data() + t.text.size()) {
                    fail(t, "number out of range");
                }
                return v;
            }
            if (t.kind == Tok::Ident && t.text == "pi") {
                next();
                return std::numbers::pi;
            }
            fail(t, "expected number, 'pi' or '('");
        }

        std::vector<Token> toks_;
        std::size_t i_ = 0;
        CircuitIR ir_;
    };

} // namespace detail

/// Parses the supported OpenQASM 2.0 subset. Errors carry "line L, col C".
inline CircuitIR parse_qasm(std::string_view text)
{
    return detail::Parser(detail::Lexer(text).run()).run();
}

} // namespace sparq::qasm
