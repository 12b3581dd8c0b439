//! Symbolic lattice expressions such as `U(2)+A2+2*E8` or `<-2>+10*A1`.
//!
//! Grammar (ASCII, whitespace ignored):
//!
//! ```text
//! expr := term ("+" term)*
//! term := [INT "*"] atom ["(" INT ")"]
//! atom := "A" INT | "D" INT | "E" INT | "U" | "<" SIGNED_INT ">"
//! ```
//!
//! Terms keep the order in which they were written; printing is canonical
//! (multiplicity and scale 1 are omitted), so `parse(print(e)) == e`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LatticeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    A(u32),
    D(u32),
    E(u32),
    U,
    /// Rank-one lattice with Gram `[k]`.
    Form(i64),
}

impl Atom {
    pub fn rank(&self) -> usize {
        match *self {
            Atom::A(n) | Atom::D(n) | Atom::E(n) => n as usize,
            Atom::U => 2,
            Atom::Form(_) => 1,
        }
    }

    fn validate(&self) -> Result<(), String> {
        match *self {
            Atom::A(0) => Err("A_n needs n >= 1".into()),
            Atom::D(n) if n < 4 => Err(format!("D{n}: D_n needs n >= 4")),
            Atom::E(n) if !(6..=8).contains(&n) => Err(format!("E{n}: only E6, E7, E8 exist")),
            Atom::Form(0) => Err("<0> is degenerate".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::A(n) => write!(f, "A{n}"),
            Atom::D(n) => write!(f, "D{n}"),
            Atom::E(n) => write!(f, "E{n}"),
            Atom::U => write!(f, "U"),
            Atom::Form(k) => write!(f, "<{k}>"),
        }
    }
}

/// `multiplicity` copies of `atom` with its form multiplied by `scale`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub multiplicity: u32,
    pub atom: Atom,
    pub scale: u32,
}

impl Term {
    pub fn new(multiplicity: u32, atom: Atom, scale: u32) -> Self {
        Self {
            multiplicity,
            atom,
            scale,
        }
    }

    pub fn single(atom: Atom) -> Self {
        Self::new(1, atom, 1)
    }

    pub fn rank(&self) -> usize {
        self.multiplicity as usize * self.atom.rank()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multiplicity != 1 {
            write!(f, "{}*", self.multiplicity)?;
        }
        write!(f, "{}", self.atom)?;
        if self.scale != 1 {
            write!(f, "({})", self.scale)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeExpr {
    terms: Vec<Term>,
}

impl LatticeExpr {
    /// Validates every term; an empty expression is rejected.
    pub fn new(terms: Vec<Term>) -> Result<Self, LatticeError> {
        if terms.is_empty() {
            return Err(LatticeError::Invalid("empty lattice expression".into()));
        }
        for t in &terms {
            if t.multiplicity == 0 {
                return Err(LatticeError::Invalid(format!("zero multiplicity in {t}")));
            }
            if t.scale == 0 {
                return Err(LatticeError::Invalid(format!("zero scale in {t}")));
            }
            t.atom.validate().map_err(LatticeError::Invalid)?;
        }
        Ok(Self { terms })
    }

    /// Builds an expression from `(multiplicity, atom, scale)` triples, silently
    /// dropping zero multiplicities. Used for table rows like `(9-j) A1`.
    pub fn from_counts(parts: &[(u32, Atom, u32)]) -> Result<Self, LatticeError> {
        Self::new(
            parts
                .iter()
                .filter(|(m, _, _)| *m > 0)
                .map(|&(m, a, s)| Term::new(m, a, s))
                .collect(),
        )
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.terms.iter().map(Term::rank).sum()
    }

    /// One entry per summand copy, multiplicities expanded, in Gram order.
    pub fn summands(&self) -> Vec<(Atom, u32)> {
        self.terms
            .iter()
            .flat_map(|t| std::iter::repeat_n((t.atom, t.scale), t.multiplicity as usize))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self, LatticeError> {
        Parser::new(text).expr()
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for LatticeExpr {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for LatticeExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LatticeExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, pos: usize, message: impl Into<String>) -> LatticeError {
        LatticeError::Syntax {
            position: pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), LatticeError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn unsigned(&mut self) -> Result<u64, LatticeError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(start, "expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.error(start, "integer out of range"))
    }

    fn small(&mut self) -> Result<u32, LatticeError> {
        let start = self.pos;
        let v = self.unsigned()?;
        u32::try_from(v).map_err(|_| self.error(start, "integer out of range"))
    }

    fn signed(&mut self) -> Result<i64, LatticeError> {
        let negative = self.eat(b'-');
        if !negative {
            self.eat(b'+');
        }
        let start = self.pos;
        let v = self.unsigned()?;
        let v = i64::try_from(v).map_err(|_| self.error(start, "integer out of range"))?;
        Ok(if negative { -v } else { v })
    }

    fn expr(&mut self) -> Result<LatticeExpr, LatticeError> {
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        if let Some(c) = self.peek() {
            return Err(self.error(self.pos, format!("unexpected '{}'", c as char)));
        }
        Ok(LatticeExpr { terms })
    }

    fn term(&mut self) -> Result<Term, LatticeError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let multiplicity = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let m = self.small()?;
            self.expect(b'*')?;
            if m == 0 {
                return Err(self.error(start, "multiplicity must be positive"));
            }
            m
        } else {
            1
        };
        let atom_pos = self.pos;
        let atom = self.atom()?;
        atom.validate().map_err(|m| self.error(atom_pos, m))?;
        let scale = if self.eat(b'(') {
            let p = self.pos;
            let s = self.small()?;
            self.expect(b')')?;
            if s == 0 {
                return Err(self.error(p, "scale must be positive"));
            }
            s
        } else {
            1
        };
        Ok(Term::new(multiplicity, atom, scale))
    }

    fn atom(&mut self) -> Result<Atom, LatticeError> {
        let pos = self.pos;
        match self.peek() {
            Some(b'A') => {
                self.pos += 1;
                Ok(Atom::A(self.small()?))
            }
            Some(b'D') => {
                self.pos += 1;
                Ok(Atom::D(self.small()?))
            }
            Some(b'E') => {
                self.pos += 1;
                Ok(Atom::E(self.small()?))
            }
            Some(b'U') => {
                self.pos += 1;
                Ok(Atom::U)
            }
            Some(b'<') => {
                self.pos += 1;
                let k = self.signed()?;
                self.expect(b'>')?;
                Ok(Atom::Form(k))
            }
            Some(c) => Err(self.error(
                pos,
                format!("unexpected '{}', expected a lattice atom", c as char),
            )),
            None => Err(self.error(pos, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_notation() {
        let e = LatticeExpr::parse("U(2)+A2+E8(2)").unwrap();
        assert_eq!(
            e.terms(),
            &[
                Term::new(1, Atom::U, 2),
                Term::single(Atom::A(2)),
                Term::new(1, Atom::E(8), 2)
            ]
        );
        assert_eq!(e.rank(), 12);
    }

    #[test]
    fn multiplicity_and_forms() {
        let e = LatticeExpr::parse("3*A1+<-2>").unwrap();
        assert_eq!(
            e.terms(),
            &[Term::new(3, Atom::A(1), 1), Term::single(Atom::Form(-2))]
        );
        assert_eq!(e.summands().len(), 4);
        let six = LatticeExpr::parse("<6>").unwrap();
        assert_eq!(six.terms(), &[Term::single(Atom::Form(6))]);
    }

    #[test]
    fn whitespace_is_ignored_and_printing_is_canonical() {
        let e = LatticeExpr::parse(" 10 * A1 + < -2 > + U ( 2 ) ").unwrap();
        assert_eq!(e.to_string(), "10*A1+<-2>+U(2)");
        assert_eq!(LatticeExpr::parse("1*E8(1)").unwrap().to_string(), "E8");
    }

    #[test]
    fn rejects_bad_input_with_position() {
        match LatticeExpr::parse("A2+D3") {
            Err(LatticeError::Syntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            LatticeExpr::parse("<0>"),
            Err(LatticeError::Syntax { position: 0, .. })
        ));
        assert!(LatticeExpr::parse("E9").is_err());
        assert!(LatticeExpr::parse("A0").is_err());
        assert!(LatticeExpr::parse("0*A1").is_err());
        assert!(LatticeExpr::parse("A2+").is_err());
        assert!(LatticeExpr::parse("U(0)").is_err());
        assert!(LatticeExpr::parse("A2 A2").is_err());
        assert!(LatticeExpr::parse("").is_err());
    }
}
