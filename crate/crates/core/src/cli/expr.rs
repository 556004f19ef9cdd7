//! Event expressions.
//!
//! ```text
//! expr    := term ('+' term)*
//! term    := '~' term | '(' expr ')' | '[' slot ',' slot ']'
//! slot    := '*' | INPUT ':' outcomes
//! outcomes:= OUTCOME | '{' [OUTCOME (',' OUTCOME)*] '}'
//! ```
//!
//! `[1:{0}, 2:1]` is the question "input 1 of the left box gave outcome 0
//! and input 2 of the right box gave outcome 1". Inputs are numbered from 1,
//! outcomes from 0 or by label. `*` leaves a box unconstrained, `+` is the
//! union of disjoint events and `~` the complement.

use crate::bits::Bits;
use crate::box_world::{BoxSpec, BoxWorld};
use crate::error::{Error, Result};

pub fn parse_event(world: &BoxWorld, text: &str) -> Result<Bits> {
    let mut p = Parser {
        world,
        chars: text.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    world: &'a BoxWorld,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Input(format!(
            "event expression, column {}: {message}",
            self.pos + 1
        ))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Bits> {
        let mut acc = self.term()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            let start = self.pos;
            let next = self.term()?;
            if !acc.is_disjoint(&next) {
                self.pos = start;
                return Err(self.error("`+` needs disjoint events; these terms overlap"));
            }
            acc.union_with(&next);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Bits> {
        match self.peek() {
            Some('~') => {
                self.pos += 1;
                Ok(self.term()?.complement())
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('[') => {
                self.pos += 1;
                let left = self.slot(self.world.left())?;
                self.expect(',')?;
                let right = self.slot(self.world.right())?;
                self.expect(']')?;
                let (a, alphas) =
                    left.unwrap_or_else(|| (0, (0..self.world.left().outcomes(0)).collect()));
                let (b, betas) =
                    right.unwrap_or_else(|| (0, (0..self.world.right().outcomes(0)).collect()));
                self.world.question_event(a, &alphas, b, &betas)
            }
            _ => Err(self.error("expected `[`, `(` or `~`")),
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_alphanumeric() || *c == '_' || *c == '-')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// `None` for `*`, otherwise a 0-based input and its outcome set.
    fn slot(&mut self, spec: &BoxSpec) -> Result<Option<(usize, Vec<usize>)>> {
        if self.peek() == Some('*') {
            self.pos += 1;
            return Ok(None);
        }
        let word = self.word();
        let input: usize = word
            .parse()
            .map_err(|_| self.error("expected an input number or `*`"))?;
        if input == 0 || input > spec.input_count() {
            return Err(self.error(&format!(
                "input {input} is outside 1..={}",
                spec.input_count()
            )));
        }
        let a = input - 1;
        self.expect(':')?;
        let mut outcomes = Vec::new();
        if self.peek() == Some('{') {
            self.pos += 1;
            if self.peek() != Some('}') {
                loop {
                    outcomes.push(self.outcome(spec, a)?);
                    if self.peek() == Some(',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect('}')?;
        } else {
            outcomes.push(self.outcome(spec, a)?);
        }
        outcomes.sort_unstable();
        outcomes.dedup();
        Ok(Some((a, outcomes)))
    }

    fn outcome(&mut self, spec: &BoxSpec, a: usize) -> Result<usize> {
        let word = self.word();
        if word.is_empty() {
            return Err(self.error("expected an outcome"));
        }
        spec.outcome_index(a, &word)
            .ok_or_else(|| self.error(&format!("input {} has no outcome `{word}`", a + 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chsh() -> BoxWorld {
        BoxWorld::new(
            BoxSpec::new(vec![2, 2]).unwrap(),
            BoxSpec::new(vec![2, 2]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn questions_and_operations() {
        let w = chsh();
        let atom = parse_event(&w, "[1:0, 2:1]").unwrap();
        assert_eq!(atom, w.question_event(0, &[0], 1, &[1]).unwrap());
        let cyl = parse_event(&w, "[1:{0}, *]").unwrap();
        assert_eq!(cyl, w.question_event(0, &[0], 0, &[0, 1]).unwrap());
        let sum = parse_event(&w, "[1:0, 2:1] + [1:1, 2:1]").unwrap();
        assert_eq!(sum, w.question_event(0, &[0, 1], 1, &[1]).unwrap());
        assert_eq!(
            parse_event(&w, "~[1:{0}, *]").unwrap(),
            parse_event(&w, "[1:1, *]").unwrap()
        );
        assert!(parse_event(&w, "[*, *]").unwrap().is_full());
        assert!(parse_event(&w, "[1:{}, *]").unwrap().is_empty());
        assert_eq!(parse_event(&w, "([1:0, *])").unwrap(), cyl);
    }

    #[test]
    fn overlap_and_syntax_errors() {
        let w = chsh();
        let e = parse_event(&w, "[1:0, *] + [*, 1:0]")
            .unwrap_err()
            .to_string();
        assert!(e.contains("disjoint"), "{e}");
        assert!(parse_event(&w, "[3:0, *]")
            .unwrap_err()
            .to_string()
            .contains("outside"));
        assert!(parse_event(&w, "[1:2, *]")
            .unwrap_err()
            .to_string()
            .contains("no outcome"));
        assert!(parse_event(&w, "[1:0, *] x")
            .unwrap_err()
            .to_string()
            .contains("trailing"));
        assert!(parse_event(&w, "[1:0 *]").is_err());
    }
}
