//! Formal words and the element literal syntax.
//!
//! A literal is a signed sum of terms. A term is an optional coefficient
//! (`3`, `1/2`, or a parenthesized Gaussian rational such as `(1/2-3i)`)
//! followed by letters: an edge name with an optional `*`, a projection
//! `p{v,w}`, or the unit `top` (also written `1`). A bare coefficient is a
//! multiple of the unit and `0` is the zero element.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Algebra, AlgebraElement};
use crate::error::AlgebraError;
use crate::projections::ProjectionSet;
use crate::scalar::{format_scalar, Scalar};
use crate::semigraph::{EdgeId, Instance};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Edge { edge: EdgeId, star: bool },
    Projection(ProjectionSet),
}

impl Letter {
    pub fn adjoint(&self) -> Self {
        match self {
            Self::Edge { edge, star } => Self::Edge {
                edge: *edge,
                star: !star,
            },
            Self::Projection(p) => Self::Projection(p.clone()),
        }
    }
}

/// A nonempty product of letters and adjoint letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalWord {
    letters: Vec<Letter>,
}

impl FormalWord {
    /// Wraps `letters`; the empty list becomes the one-letter word `top`.
    pub fn new(letters: Vec<Letter>) -> Self {
        if letters.is_empty() {
            return Self {
                letters: vec![Letter::Projection(ProjectionSet::Top)],
            };
        }
        Self { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn adjoint(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(Letter::adjoint).collect(),
        }
    }

    /// Concatenation.
    pub fn then(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Self { letters }
    }

    pub fn display<'a>(&'a self, inst: &'a Instance) -> impl fmt::Display + 'a {
        WordDisplay { w: self, inst }
    }
}

struct WordDisplay<'a> {
    w: &'a FormalWord,
    inst: &'a Instance,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.w.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match l {
                Letter::Edge { edge, star } => {
                    f.write_str(self.inst.edge_name(*edge))?;
                    if *star {
                        f.write_str("*")?;
                    }
                }
                Letter::Projection(ProjectionSet::Top) => f.write_str("top")?,
                Letter::Projection(ProjectionSet::Set(s)) => {
                    let names: Vec<&str> = s.iter().map(|v| self.inst.vertex_name(*v)).collect();
                    write!(f, "p{{{}}}", names.join(","))?;
                }
            }
        }
        Ok(())
    }
}

/// A parsed element literal: a linear combination of formal words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub terms: Vec<(Scalar, FormalWord)>,
}

impl Literal {
    pub fn display<'a>(&'a self, inst: &'a Instance) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, w)| format!("{} {}", format_scalar(c), w.display(inst)))
            .collect();
        parts.join(" + ")
    }

    /// Parses the literal syntax against the letters of `inst`.
    pub fn parse(inst: &Instance, text: &str) -> Result<Self, AlgebraError> {
        Parser {
            inst,
            src: text,
            pos: 0,
        }
        .literal()
    }
}

struct Parser<'a> {
    inst: &'a Instance,
    src: &'a str,
    pos: usize,
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Literal {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(is_ident) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn literal(mut self) -> Result<Literal, AlgebraError> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.rest().trim() == "0" {
            return Ok(Literal { terms });
        }
        let mut sign = if self.eat('-') {
            -Scalar::one()
        } else {
            self.eat('+');
            Scalar::one()
        };
        loop {
            let (c, w) = self.term()?;
            terms.push((&sign * c, w));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => {
                    self.pos += 1;
                    sign = Scalar::one();
                }
                Some('-') => {
                    self.pos += 1;
                    sign = -Scalar::one();
                }
                Some(c) => return self.err(format!("unexpected `{c}`")),
            }
        }
        Ok(Literal { terms })
    }

    fn term(&mut self) -> Result<(Scalar, FormalWord), AlgebraError> {
        self.skip_ws();
        let mut coeff = Scalar::one();
        let mut letters = Vec::new();
        let start = self.pos;
        if self.peek() == Some('(') {
            self.pos += 1;
            coeff = self.gaussian()?;
            if !self.eat(')') {
                return self.err("expected `)`");
            }
        } else if let Some(n) = self.leading_number()? {
            coeff = n;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if is_ident(c) => letters.push(self.letter()?),
                _ => break,
            }
        }
        if self.pos == start {
            return self.err("expected a term");
        }
        Ok((coeff, FormalWord::new(letters)))
    }

    /// A leading rational coefficient, unless the number is itself a letter name.
    fn leading_number(&mut self) -> Result<Option<Scalar>, AlgebraError> {
        let digits = self.rest().chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Ok(None);
        }
        let after = self.rest()[digits..].chars().next();
        if after.is_some_and(|c| is_ident(c) || c == '*') {
            return Ok(None);
        }
        let r = self.rational()?;
        Ok(Some(Complex::new(r, BigRational::zero())))
    }

    fn rational(&mut self) -> Result<BigRational, AlgebraError> {
        let num = self.integer()?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.integer()?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    /// `re`, `im i`, `re ± im i`, with optional leading sign and implicit `1` before `i`.
    fn gaussian(&mut self) -> Result<Scalar, AlgebraError> {
        let mut total = Scalar::zero();
        let mut first = true;
        loop {
            self.skip_ws();
            let negative = if self.eat('-') {
                true
            } else {
                if !first && !self.eat('+') {
                    break;
                }
                if first {
                    self.eat('+');
                }
                false
            };
            self.skip_ws();
            let mag = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.rational()?
            } else {
                BigRational::one()
            };
            self.skip_ws();
            let part = if self.peek() == Some('i') {
                self.pos += 1;
                Complex::new(BigRational::zero(), mag)
            } else {
                Complex::new(mag, BigRational::zero())
            };
            total = if negative { total - part } else { total + part };
            first = false;
            self.skip_ws();
            if self.peek() == Some(')') {
                break;
            }
        }
        Ok(total)
    }

    fn letter(&mut self) -> Result<Letter, AlgebraError> {
        let start = self.pos;
        let name = self.ident().to_string();
        if self.peek() == Some('{') {
            if name != "p" {
                self.pos = start;
                return self.err(format!("unknown projection constructor `{name}`"));
            }
            self.pos += 1;
            let mut set = std::collections::BTreeSet::new();
            loop {
                self.skip_ws();
                if self.eat('}') {
                    break;
                }
                let v = self.ident().to_string();
                match self.inst.vertex_id(&v) {
                    Some(id) => set.insert(id),
                    None => return self.err(format!("unknown vertex `{v}`")),
                };
                self.skip_ws();
                if !self.eat(',') && self.peek() != Some('}') {
                    return self.err("expected `,` or `}`");
                }
            }
            return Ok(Letter::Projection(ProjectionSet::Set(set)));
        }
        if name == "top" || name == "1" {
            return Ok(Letter::Projection(ProjectionSet::Top));
        }
        let Some(edge) = self.inst.edge_id(&name) else {
            self.pos = start;
            return Err(AlgebraError::UnknownLetter(name));
        };
        let star = self.peek() == Some('*');
        if star {
            self.pos += 1;
        }
        Ok(Letter::Edge { edge, star })
    }
}

impl Algebra {
    pub fn letter_element(&self, l: &Letter) -> AlgebraElement {
        match l {
            Letter::Edge { edge, star: false } => self.letter(*edge),
            Letter::Edge { edge, star: true } => self.adjoint(&self.letter(*edge)).expect("same algebra"),
            Letter::Projection(p) => self.projection(p),
        }
    }

    /// Rewrites a formal word into standard words by left-to-right multiplication.
    pub fn word_to_standard(&self, w: &FormalWord) -> AlgebraElement {
        let mut acc = self.letter_element(&w.letters[0]);
        for l in &w.letters[1..] {
            if acc.is_zero() {
                break;
            }
            acc = self.multiply(&acc, &self.letter_element(l)).expect("same algebra");
        }
        acc
    }

    pub fn literal_to_element(&self, lit: &Literal) -> AlgebraElement {
        let mut acc = self.zero();
        for (c, w) in &lit.terms {
            let x = self.scale(&self.word_to_standard(w), c).expect("same algebra");
            acc = self.add(&acc, &x).expect("same algebra");
        }
        acc
    }

    /// Parses and normalizes an element literal.
    pub fn parse(&self, text: &str) -> Result<AlgebraElement, AlgebraError> {
        Ok(self.literal_to_element(&Literal::parse(&self.inst, text)?))
    }
}
