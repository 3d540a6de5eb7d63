use std::fmt::Write as _;

use serde::Serialize;

use crate::geometry::{Isometry, Space};

/// A generator symbol with exponent ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Letter {
        Letter { gen, inv }
    }

    /// Involutive generators have no separate inverse letter.
    pub fn inverse(self, involutions: &[bool]) -> Letter {
        if involutions.get(self.gen).copied().unwrap_or(false) {
            self
        } else {
            Letter { gen: self.gen, inv: !self.inv }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.iter().copied().cycle().take(self.0.len() * k).collect())
    }

    pub fn inverse(&self, involutions: &[bool]) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse(involutions)).collect())
    }

    /// Free reduction, also cancelling squares of involutions.
    pub fn reduced(&self, involutions: &[bool]) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match out.last() {
                Some(&last) if last == l.inverse(involutions) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    /// Least representative among the cyclic shifts of the word and of its inverse.
    pub fn canonical_cycle(&self, involutions: &[bool]) -> Word {
        let n = self.0.len();
        let mut best = self.clone();
        for w in [self.clone(), self.inverse(involutions)] {
            for s in 0..n {
                let mut v = w.0[s..].to_vec();
                v.extend_from_slice(&w.0[..s]);
                let cand = Word(v);
                if cand < best {
                    best = cand;
                }
            }
        }
        best
    }

    pub fn eval(&self, space: Space, gens: &[Isometry]) -> Isometry {
        let inverses: Vec<Isometry> = gens.iter().map(Isometry::inverse).collect();
        self.0.iter().fold(Isometry::identity(space), |acc, l| {
            acc.compose(if l.inv { &inverses[l.gen] } else { &gens[l.gen] })
        })
    }

    /// Product notation with powers, e.g. `a^2*b^-1`; the empty word is `1`.
    pub fn render(&self, symbols: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * if l.inv { -1 } else { 1 };
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&symbols[l.gen]);
            if e != 1 {
                let _ = write!(out, "^{e}");
            }
            i = j;
        }
        out
    }
}

/// Default generator symbols: `a`…`z`, then `g26`, `g27`, ….
pub fn symbol(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("g{i}")
    }
}
