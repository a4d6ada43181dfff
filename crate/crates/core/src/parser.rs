//! Recursive-descent parser for the concrete syntax:
//!
//! ```text
//! proc    := sum
//! sum     := par ('+' par)*
//! par     := unary ('|' unary)*
//! unary   := prefix* atom postfix*
//! prefix  := action '.'
//! action  := 't' | ident | '\'' ident
//! atom    := '0' | ident | '(' proc ')' | 'nu' '{' ident (',' ident)* '}' unary
//!          | 'rec' ident '.' unary
//! postfix := '[' ident '/' ident (',' ident '/' ident)* ']'
//! ```
//!
//! Contexts additionally accept `_` as an atom. Definition files are
//! sequences of `agent NAME = proc ;` with `#` line comments.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::syntax::{is_identifier, substitute, Action, Label, Name, Process, Relabeling};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    Hole,
    Dot,
    Plus,
    Bar,
    Quote,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Slash,
    Comma,
    Equals,
    Semi,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::Hole => "`_`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Quote => "`'`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: start_line, column: start_col });
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '.' => push(&mut out, Tok::Dot),
            '+' => push(&mut out, Tok::Plus),
            '|' => push(&mut out, Tok::Bar),
            '\'' => push(&mut out, Tok::Quote),
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            '{' => push(&mut out, Tok::LBrace),
            '}' => push(&mut out, Tok::RBrace),
            '[' => push(&mut out, Tok::LBracket),
            ']' => push(&mut out, Tok::RBracket),
            '/' => push(&mut out, Tok::Slash),
            ',' => push(&mut out, Tok::Comma),
            '=' => push(&mut out, Tok::Equals),
            ';' => push(&mut out, Tok::Semi),
            '0' => push(&mut out, Tok::Zero),
            '_' => push(&mut out, Tok::Hole),
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                column += i - start;
                push(&mut out, Tok::Ident(word));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column,
                    expected: "a CCS token".into(),
                    found: format!("`{other}`"),
                })
            }
        }
        i += 1;
        column += 1;
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    allow_hole: bool,
}

impl Parser {
    fn new(text: &str, allow_hole: bool) -> Result<Parser> {
        Ok(Parser { toks: lex(text)?, pos: 0, allow_hole })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn advance(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T> {
        let here = &self.toks[self.pos];
        Err(Error::Syntax {
            line: here.line,
            column: here.column,
            expected: expected.into(),
            found: here.tok.describe(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.error(&tok.describe())
        }
    }

    fn ident(&mut self) -> Result<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if is_identifier(&s) => {
                self.advance();
                Ok(Name::new(&s).expect("checked identifier"))
            }
            _ => self.error("identifier"),
        }
    }

    fn proc(&mut self) -> Result<Process> {
        let mut left = self.par()?;
        while *self.peek() == Tok::Plus {
            self.advance();
            let right = self.par()?;
            left = Process::sum(left, right);
        }
        Ok(left)
    }

    fn par(&mut self) -> Result<Process> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Bar {
            self.advance();
            let right = self.unary()?;
            left = Process::par(left, right);
        }
        Ok(left)
    }

    fn prefix_ahead(&self) -> bool {
        match self.peek() {
            Tok::Quote => true,
            Tok::Ident(s) => s != "nu" && s != "rec" && *self.peek_at(1) == Tok::Dot,
            _ => false,
        }
    }

    fn unary(&mut self) -> Result<Process> {
        if self.prefix_ahead() {
            let action = self.action()?;
            self.expect(Tok::Dot)?;
            let body = self.unary()?;
            return Ok(Process::prefix(action, body));
        }
        let mut p = self.atom()?;
        while *self.peek() == Tok::LBracket {
            let rf = self.relabeling()?;
            p = Process::relab(p, rf);
        }
        Ok(p)
    }

    fn action(&mut self) -> Result<Action> {
        if *self.peek() == Tok::Quote {
            self.advance();
            let name = self.ident()?;
            return Ok(Action::Visible(Label::output(name)));
        }
        if *self.peek() == Tok::Ident("t".into()) {
            self.advance();
            return Ok(Action::Tau);
        }
        Ok(Action::Visible(Label::input(self.ident()?)))
    }

    fn atom(&mut self) -> Result<Process> {
        match self.peek().clone() {
            Tok::Zero => {
                self.advance();
                Ok(Process::Nil)
            }
            Tok::Hole if self.allow_hole => {
                self.advance();
                Ok(Process::Var(Name::hole()))
            }
            Tok::LParen => {
                self.advance();
                let p = self.proc()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Ident(s) if s == "nu" => {
                self.advance();
                self.expect(Tok::LBrace)?;
                let mut names = BTreeSet::new();
                names.insert(self.ident()?);
                while *self.peek() == Tok::Comma {
                    self.advance();
                    names.insert(self.ident()?);
                }
                self.expect(Tok::RBrace)?;
                let body = self.unary()?;
                Ok(Process::restr(names, body))
            }
            Tok::Ident(s) if s == "rec" => {
                self.advance();
                let var = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.unary()?;
                Ok(Process::rec(var, body))
            }
            Tok::Ident(s) if is_identifier(&s) => {
                self.advance();
                Ok(Process::Var(Name::new(&s).expect("checked identifier")))
            }
            Tok::Ident(s) if s == "t" => self.error("`.` after `t`"),
            _ => self.error(if self.allow_hole { "process or `_`" } else { "process" }),
        }
    }

    fn relabeling(&mut self) -> Result<Relabeling> {
        let open = self.toks[self.pos].clone();
        self.expect(Tok::LBracket)?;
        let mut pairs = Vec::new();
        loop {
            let new = self.ident()?;
            self.expect(Tok::Slash)?;
            let old = self.ident()?;
            pairs.push((old, new));
            if *self.peek() == Tok::Comma {
                self.advance();
            } else {
                break;
            }
        }
        self.expect(Tok::RBracket)?;
        Relabeling::from_pairs(pairs).ok_or_else(|| Error::UnboundConstruct {
            line: open.line,
            column: open.column,
            detail: "relabeling maps one name to two different names".into(),
        })
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }
}

/// Parses one process term.
pub fn parse(text: &str) -> Result<Process> {
    let mut p = Parser::new(text, false)?;
    let proc = p.proc()?;
    p.finish()?;
    Ok(proc)
}

/// Parses a term in which `_` denotes a hole; holes come back as the
/// reserved hole variable.
pub(crate) fn parse_with_holes(text: &str) -> Result<Process> {
    let mut p = Parser::new(text, true)?;
    let proc = p.proc()?;
    p.finish()?;
    Ok(proc)
}

/// Agent definitions read from a definition file.
#[derive(Clone, Debug, Default)]
pub struct Definitions {
    raw: BTreeMap<Name, Process>,
    order: Vec<Name>,
    compiled: BTreeMap<Name, Process>,
}

impl Definitions {
    pub fn parse(text: &str) -> Result<Definitions> {
        let mut p = Parser::new(text, false)?;
        let mut raw = BTreeMap::new();
        let mut order = Vec::new();
        while *p.peek() != Tok::Eof {
            match p.peek() {
                Tok::Ident(s) if s == "agent" => {
                    p.advance();
                }
                _ => return p.error("`agent`"),
            }
            let name = p.ident()?;
            p.expect(Tok::Equals)?;
            let body = p.proc()?;
            p.expect(Tok::Semi)?;
            if raw.insert(name.clone(), body).is_some() {
                return Err(Error::DuplicateAgent(name.to_string()));
            }
            order.push(name);
        }
        let mut defs = Definitions { raw, order, compiled: BTreeMap::new() };
        defs.compile()?;
        Ok(defs)
    }

    /// Agent names in file order.
    pub fn names(&self) -> &[Name] {
        &self.order
    }

    pub fn contains(&self, name: &str) -> bool {
        Name::new(name).map(|n| self.raw.contains_key(&n)).unwrap_or(false)
    }

    /// The compiled process of an agent: self references become `rec`, and
    /// references to other agents are inlined.
    pub fn get(&self, name: &str) -> Result<&Process> {
        let key = Name::new(name).map_err(|_| Error::UndefinedAgent(name.to_string()))?;
        self.compiled.get(&key).ok_or_else(|| Error::UndefinedAgent(name.to_string()))
    }

    /// Inlines every defined agent referenced freely by `p`.
    pub fn instantiate(&self, p: &Process) -> Result<Process> {
        let mut out = p.clone();
        for var in p.free_variables() {
            if let Some(def) = self.compiled.get(&var) {
                out = substitute(&out, &var, def)?;
            }
        }
        Ok(out)
    }

    fn deps(&self, name: &Name) -> Vec<Name> {
        self.raw[name]
            .free_variables()
            .into_iter()
            .filter(|v| v != name && self.raw.contains_key(v))
            .collect()
    }

    fn compile(&mut self) -> Result<()> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        fn visit(
            defs: &mut Definitions,
            name: &Name,
            marks: &mut BTreeMap<Name, Mark>,
            stack: &mut Vec<Name>,
        ) -> Result<()> {
            match marks.get(name) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Active) => {
                    let start = stack.iter().position(|n| n == name).unwrap_or(0);
                    let mut cycle: Vec<String> = stack[start..].iter().map(|n| n.to_string()).collect();
                    cycle.push(name.to_string());
                    return Err(Error::MutualRecursion(cycle));
                }
                None => {}
            }
            marks.insert(name.clone(), Mark::Active);
            stack.push(name.clone());
            for dep in defs.deps(name) {
                visit(defs, &dep, marks, stack)?;
            }
            stack.pop();
            let mut body = defs.raw[name].clone();
            for dep in defs.deps(name) {
                body = substitute(&body, &dep, &defs.compiled[&dep])?;
            }
            if body.free_variables().contains(name) {
                body = Process::rec(name.clone(), body);
            }
            defs.compiled.insert(name.clone(), body);
            marks.insert(name.clone(), Mark::Done);
            Ok(())
        }

        let mut marks = BTreeMap::new();
        for name in self.order.clone() {
            visit(self, &name, &mut marks, &mut Vec::new())?;
        }
        Ok(())
    }
}
