use std::collections::HashMap;

use super::lexer::{tokenize, Tok, Token};
use super::QasmError;
use crate::circuit::{Circuit, Condition, Gate, GateDef, GateKind, Operand, Register};

/// A gate argument before broadcast expansion.
#[derive(Debug, Clone)]
enum Arg {
    Whole { reg: usize, size: usize },
    Bit(Operand),
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    circuit: Circuit,
    qreg_ids: HashMap<String, usize>,
    creg_ids: HashMap<String, usize>,
}

/// Parses OpenQASM 2.0 source text into a [`Circuit`].
///
/// Whole-register applications (`cx a,b;`) are expanded to one gate per
/// index. Custom `gate` bodies are recorded verbatim and never inlined.
pub fn parse_qasm(source: &str) -> Result<Circuit, QasmError> {
    parse_named(source, "")
}

/// Same as [`parse_qasm`] but records `name` as the circuit's source label.
pub fn parse_named(source: &str, name: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser {
        src: source,
        toks: tokenize(source)?,
        pos: 0,
        circuit: Circuit::new(name),
        qreg_ids: HashMap::new(),
        creg_ids: HashMap::new(),
    };
    p.header()?;
    while !p.at_eof() {
        p.statement()?;
    }
    Ok(p.circuit)
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, msg: impl Into<String>) -> QasmError {
        let t = self.peek();
        QasmError::syntax(t.line, t.col, msg)
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek().tok, Tok::Sym(s) if s == sym)
    }

    fn expect_sym(&mut self, sym: &str) -> Result<Token, QasmError> {
        if self.is_sym(sym) {
            Ok(self.bump())
        } else {
            Err(self.err_here(format!(
                "expected `{sym}`, found {}",
                Self::describe(&self.peek().tok)
            )))
        }
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if self.is_sym(sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Token), QasmError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump()))
            }
            other => Err(self.err_here(format!("expected identifier, found {}", Self::describe(other)))),
        }
    }

    fn integer(&mut self) -> Result<u64, QasmError> {
        match &self.peek().tok {
            Tok::Number(s) if s.bytes().all(|b| b.is_ascii_digit()) => {
                let v = s
                    .parse::<u64>()
                    .map_err(|_| self.err_here("integer literal too large"))?;
                self.bump();
                Ok(v)
            }
            other => Err(self.err_here(format!("expected integer, found {}", Self::describe(other)))),
        }
    }

    fn header(&mut self) -> Result<(), QasmError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == "OPENQASM" => {
                self.bump();
            }
            _ => return Err(self.err_here("expected `OPENQASM 2.0;` header")),
        }
        let t = self.bump();
        let Tok::Number(version) = &t.tok else {
            return Err(QasmError::syntax(t.line, t.col, "expected version number"));
        };
        if version != "2.0" && version != "2" {
            return Err(QasmError::UnsupportedVersion {
                version: version.clone(),
                line: t.line,
                col: t.col,
            });
        }
        self.expect_sym(";")?;
        Ok(())
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let Tok::Ident(word) = self.peek().tok.clone() else {
            return Err(self.err_here(format!(
                "expected statement, found {}",
                Self::describe(&self.peek().tok)
            )));
        };
        match word.as_str() {
            "include" => {
                self.bump();
                let t = self.bump();
                let Tok::Str(path) = t.tok else {
                    return Err(QasmError::syntax(t.line, t.col, "expected include path string"));
                };
                self.expect_sym(";")?;
                self.circuit.includes.push(path);
            }
            "qreg" | "creg" => self.register_decl(word == "qreg")?,
            "gate" | "opaque" => self.gate_def(word == "opaque")?,
            "barrier" => self.barrier()?,
            "if" => self.conditional()?,
            "OPENQASM" => return Err(self.err_here("duplicate OPENQASM header")),
            _ => {
                let gates = self.quantum_op()?;
                self.circuit.gates.extend(gates);
            }
        }
        Ok(())
    }

    fn register_decl(&mut self, quantum: bool) -> Result<(), QasmError> {
        self.bump();
        let (name, tok) = self.ident()?;
        self.expect_sym("[")?;
        let size = self.integer()? as usize;
        self.expect_sym("]")?;
        self.expect_sym(";")?;
        if self.qreg_ids.contains_key(&name) || self.creg_ids.contains_key(&name) {
            return Err(QasmError::Invalid {
                line: tok.line,
                col: tok.col,
                message: format!("register `{name}` declared twice"),
            });
        }
        let (regs, ids) = if quantum {
            (&mut self.circuit.qregs, &mut self.qreg_ids)
        } else {
            (&mut self.circuit.cregs, &mut self.creg_ids)
        };
        ids.insert(name.clone(), regs.len());
        regs.push(Register { name, size });
        Ok(())
    }

    fn gate_def(&mut self, opaque: bool) -> Result<(), QasmError> {
        let start = self.bump();
        let (name, _) = self.ident()?;
        let mut num_params = 0;
        if self.eat_sym("(") {
            if !self.eat_sym(")") {
                loop {
                    self.ident()?;
                    num_params += 1;
                    if self.eat_sym(")") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
            }
        }
        let mut num_qubits = 0;
        loop {
            self.ident()?;
            num_qubits += 1;
            if !self.eat_sym(",") {
                break;
            }
        }
        let end = if opaque {
            self.expect_sym(";")?.end
        } else {
            self.expect_sym("{")?;
            let mut depth = 1;
            loop {
                let t = self.bump();
                match t.tok {
                    Tok::Sym("{") => depth += 1,
                    Tok::Sym("}") => {
                        depth -= 1;
                        if depth == 0 {
                            break t.end;
                        }
                    }
                    Tok::Eof => {
                        return Err(QasmError::syntax(t.line, t.col, "unterminated gate body"))
                    }
                    _ => {}
                }
            }
        };
        self.circuit.gate_defs.push(GateDef {
            name,
            num_params,
            num_qubits,
            opaque,
            source: self.src[start.start..end].to_string(),
        });
        Ok(())
    }

    fn conditional(&mut self) -> Result<(), QasmError> {
        self.bump();
        self.expect_sym("(")?;
        let (name, tok) = self.ident()?;
        let creg = *self
            .creg_ids
            .get(&name)
            .ok_or_else(|| QasmError::undeclared(&name, &tok))?;
        self.expect_sym("==")?;
        let value = self.integer()?;
        self.expect_sym(")")?;
        if matches!(&self.peek().tok, Tok::Ident(w) if w == "barrier" || w == "if") {
            return Err(self.err_here("`if` may only guard a quantum operation"));
        }
        let mut gates = self.quantum_op()?;
        for g in &mut gates {
            g.condition = Some(Condition { creg, value });
        }
        self.circuit.gates.extend(gates);
        Ok(())
    }

    fn barrier(&mut self) -> Result<(), QasmError> {
        self.bump();
        let mut qubits = Vec::new();
        for arg in self.arg_list(true)? {
            match arg {
                Arg::Whole { reg, size } => qubits.extend((0..size).map(|i| Operand::new(reg, i))),
                Arg::Bit(op) => qubits.push(op),
            }
        }
        self.expect_sym(";")?;
        self.circuit.gates.push(Gate {
            opcode: "barrier".into(),
            kind: GateKind::Barrier,
            params: Vec::new(),
            qubits,
            clbits: Vec::new(),
            condition: None,
        });
        Ok(())
    }

    /// `measure`, `reset`, or a gate application. Returns the expanded gates.
    fn quantum_op(&mut self) -> Result<Vec<Gate>, QasmError> {
        let (word, word_tok) = self.ident()?;
        match word.as_str() {
            "measure" => {
                let q = self.arg(true)?;
                self.expect_sym("->")?;
                let c = self.arg(false)?;
                self.expect_sym(";")?;
                let pairs = match (q, c) {
                    (Arg::Bit(q), Arg::Bit(c)) => vec![(q, c)],
                    (Arg::Whole { reg: qr, size: qs }, Arg::Whole { reg: cr, size: cs }) => {
                        if qs != cs {
                            return Err(QasmError::Invalid {
                                line: word_tok.line,
                                col: word_tok.col,
                                message: format!("measure register sizes differ ({qs} vs {cs})"),
                            });
                        }
                        (0..qs).map(|i| (Operand::new(qr, i), Operand::new(cr, i))).collect()
                    }
                    _ => {
                        return Err(QasmError::Invalid {
                            line: word_tok.line,
                            col: word_tok.col,
                            message: "measure mixes a register and a single bit".into(),
                        })
                    }
                };
                Ok(pairs
                    .into_iter()
                    .map(|(q, c)| Gate {
                        opcode: "measure".into(),
                        kind: GateKind::Measure,
                        params: Vec::new(),
                        qubits: vec![q],
                        clbits: vec![c],
                        condition: None,
                    })
                    .collect())
            }
            "reset" => {
                let arg = self.arg(true)?;
                self.expect_sym(";")?;
                let qubits = match arg {
                    Arg::Bit(op) => vec![op],
                    Arg::Whole { reg, size } => (0..size).map(|i| Operand::new(reg, i)).collect(),
                };
                Ok(qubits
                    .into_iter()
                    .map(|q| Gate {
                        opcode: "reset".into(),
                        kind: GateKind::Reset,
                        params: Vec::new(),
                        qubits: vec![q],
                        clbits: Vec::new(),
                        condition: None,
                    })
                    .collect())
            }
            "qreg" | "creg" | "gate" | "opaque" | "include" | "barrier" | "if" => Err(QasmError::syntax(
                word_tok.line,
                word_tok.col,
                format!("`{word}` not allowed here"),
            )),
            _ => {
                let mut params = Vec::new();
                if self.eat_sym("(") && !self.eat_sym(")") {
                    loop {
                        let t = self.peek().clone();
                        let v = self.expr()?;
                        if !v.is_finite() {
                            return Err(QasmError::syntax(t.line, t.col, "parameter is not finite"));
                        }
                        params.push(v);
                        if self.eat_sym(")") {
                            break;
                        }
                        self.expect_sym(",")?;
                    }
                }
                let args = self.arg_list(true)?;
                self.expect_sym(";")?;
                self.expand(word, params, args, &word_tok)
            }
        }
    }

    fn expand(&self, opcode: String, params: Vec<f64>, args: Vec<Arg>, at: &Token) -> Result<Vec<Gate>, QasmError> {
        let mut width: Option<usize> = None;
        for a in &args {
            if let Arg::Whole { size, .. } = a {
                match width {
                    Some(w) if w != *size => {
                        return Err(QasmError::Invalid {
                            line: at.line,
                            col: at.col,
                            message: format!("broadcast over registers of different sizes ({w} vs {size})"),
                        })
                    }
                    _ => width = Some(*size),
                }
            }
        }
        let reps = width.unwrap_or(1);
        let gates = (0..reps)
            .map(|i| {
                let qubits = args
                    .iter()
                    .map(|a| match *a {
                        Arg::Whole { reg, .. } => Operand::new(reg, i),
                        Arg::Bit(op) => op,
                    })
                    .collect();
                Gate::unitary(opcode.clone(), qubits).with_params(params.clone())
            })
            .collect::<Vec<_>>();
        for g in &gates {
            for (k, a) in g.qubits.iter().enumerate() {
                if g.qubits[..k].contains(a) {
                    return Err(QasmError::Invalid {
                        line: at.line,
                        col: at.col,
                        message: format!("gate `{opcode}` repeats a qubit operand"),
                    });
                }
            }
        }
        Ok(gates)
    }

    fn arg_list(&mut self, quantum: bool) -> Result<Vec<Arg>, QasmError> {
        let mut args = vec![self.arg(quantum)?];
        while self.eat_sym(",") {
            args.push(self.arg(quantum)?);
        }
        Ok(args)
    }

    fn arg(&mut self, quantum: bool) -> Result<Arg, QasmError> {
        let (name, tok) = self.ident()?;
        let (ids, regs) = if quantum {
            (&self.qreg_ids, &self.circuit.qregs)
        } else {
            (&self.creg_ids, &self.circuit.cregs)
        };
        let reg = *ids.get(&name).ok_or_else(|| QasmError::undeclared(&name, &tok))?;
        let size = regs[reg].size;
        if self.eat_sym("[") {
            let idx_tok = self.peek().clone();
            let index = self.integer()? as usize;
            self.expect_sym("]")?;
            if index >= size {
                return Err(QasmError::IndexOutOfRange {
                    name,
                    index,
                    size,
                    line: idx_tok.line,
                    col: idx_tok.col,
                });
            }
            Ok(Arg::Bit(Operand::new(reg, index)))
        } else {
            Ok(Arg::Whole { reg, size })
        }
    }

    // Parameter expressions: + - < * / < unary - < ^ (right assoc) < atoms.
    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym("+") {
                v += self.term()?;
            } else if self.eat_sym("-") {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.unary()?;
        loop {
            if self.eat_sym("*") {
                v *= self.unary()?;
            } else if self.eat_sym("/") {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        if self.eat_sym("-") {
            return Ok(-self.unary()?);
        }
        if self.eat_sym("+") {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat_sym("^") {
            let exp = self.unary()?;
            return Ok(base.powf(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64, QasmError> {
        let t = self.bump();
        match &t.tok {
            Tok::Number(s) => s
                .parse::<f64>()
                .map_err(|_| QasmError::syntax(t.line, t.col, format!("malformed number `{s}`"))),
            Tok::Sym("(") => {
                let v = self.expr()?;
                self.expect_sym(")")?;
                Ok(v)
            }
            Tok::Ident(s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Ident(s) => {
                let f: fn(f64) -> f64 = match s.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => return Err(QasmError::syntax(t.line, t.col, format!("unknown identifier `{s}` in expression"))),
                };
                self.expect_sym("(")?;
                let v = self.expr()?;
                self.expect_sym(")")?;
                Ok(f(v))
            }
            other => Err(QasmError::syntax(
                t.line,
                t.col,
                format!("expected expression, found {}", Self::describe(other)),
            )),
        }
    }
}
