use std::fmt::Write as _;
use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Scalar};

use super::mode::{BiGrade, Grade, Mode, Monomial, Symbol};
use super::table::BracketTable;
use super::vector::Vector;

/// Recursion depth beyond which rewriting is considered runaway. Each rewrite
/// step either shortens the word, moves an annihilator right or removes an
/// inversion, so honest inputs stay far below this.
const MAX_DEPTH: usize = 4096;

/// Result of evaluating a bracket of two modes: a mode combination plus a
/// multiple of the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketValue<C: Coeff> {
    pub modes: Vec<(C, Mode)>,
    pub scalar: C,
}

/// The lowest-weight module generated by a vacuum from a mode algebra.
///
/// Modes with `index >= vacuum_from` kill the vacuum; the remaining creation
/// modes span the module through canonical monomials. All results are cached
/// per instance, so an `Algebra` is meant to be built once and shared.
pub struct Algebra<C: Coeff> {
    table: BracketTable,
    central: C,
    min_weight: i64,
    apply_cache: DashMap<(Mode, Monomial), Vector<C>>,
    pub(crate) field_cache: DashMap<(Monomial, i64, Monomial), Vector<C>>,
    basis_cache: DashMap<i64, Arc<Vec<Monomial>>>,
}

impl<C: Coeff> Algebra<C> {
    /// Build the module with the center acting as `central`.
    pub fn new(table: BracketTable, central: C) -> Result<Self> {
        let mut min_weight = 0;
        for s in &table.symbols {
            if !s.odd && s.mode_weight(s.generator_index()) <= 0 {
                return Err(Error::ConstructionFailure(format!(
                    "even creation mode of `{}` has non-positive weight; weight spaces would be infinite",
                    s.name
                )));
            }
            let mut n = s.generator_index();
            while s.mode_weight(n) < 0 {
                if s.odd {
                    min_weight += s.mode_weight(n);
                }
                n -= 1;
            }
        }
        Ok(Algebra {
            table,
            central,
            min_weight,
            apply_cache: DashMap::new(),
            field_cache: DashMap::new(),
            basis_cache: DashMap::new(),
        })
    }

    pub fn table(&self) -> &BracketTable {
        &self.table
    }

    pub fn central(&self) -> &C {
        &self.central
    }

    /// Lowest weight with a nonzero graded piece.
    pub fn min_weight(&self) -> i64 {
        self.min_weight
    }

    pub fn symbol(&self, m: Mode) -> &Symbol {
        &self.table.symbols[m.sym as usize]
    }

    pub fn mode(&self, name: &str, index: i64) -> Result<Mode> {
        Ok(Mode::new(self.table.symbol_id(name)?, index))
    }

    pub fn is_odd(&self, m: Mode) -> bool {
        self.symbol(m).odd
    }

    pub fn kills_vacuum(&self, m: Mode) -> bool {
        m.idx() >= self.symbol(m).vacuum_from
    }

    pub fn mode_grade(&self, m: Mode) -> BiGrade {
        let s = self.symbol(m);
        BiGrade::new(s.mode_weight(m.idx()), s.fermion)
    }

    pub fn monomial_grade(&self, w: &Monomial) -> BiGrade {
        w.modes()
            .iter()
            .fold(BiGrade::default(), |g, &m| g + self.mode_grade(m))
    }

    pub fn monomial_odd(&self, w: &Monomial) -> bool {
        w.modes().iter().filter(|&&m| self.is_odd(m)).count() % 2 == 1
    }

    pub fn grade_of(&self, v: &Vector<C>) -> Grade {
        let mut grades = v.monomials().map(|w| self.monomial_grade(w));
        match grades.next() {
            None => Grade::AllGrades,
            Some(g) if grades.all(|h| h == g) => Grade::Homogeneous(g),
            Some(_) => Grade::NotHomogeneous,
        }
    }

    /// Parity of a homogeneous vector; the zero vector counts as even.
    pub fn parity_of(&self, v: &Vector<C>) -> bool {
        v.monomials().next().is_some_and(|w| self.monomial_odd(w))
    }

    /// `[a, b]` for two modes, with the center replaced by its value.
    pub fn bracket(&self, a: Mode, b: Mode) -> BracketValue<C> {
        let rule = &self.table.rules[&(a.sym, b.sym)];
        let (m, n) = (a.idx(), b.idx());
        let mut modes = Vec::with_capacity(rule.terms.len());
        for t in &rule.terms {
            let k = t.coeff.eval(m, n);
            if k != Scalar::from_integer(0.into()) {
                modes.push((C::from_scalar(k), Mode::new(t.sym, t.index.eval_int(m, n))));
            }
        }
        let mut scalar = C::zero();
        if rule.delta.eval(m, n) == Scalar::from_integer(0.into()) {
            scalar = C::from_scalar(rule.scalar.eval(m, n));
            let cen = rule.central.eval(m, n);
            if !num_traits::Zero::is_zero(&cen) {
                scalar.add_assign(&self.central.scale(&cen));
            }
        }
        BracketValue { modes, scalar }
    }

    /// `m` applied to a canonical monomial.
    pub fn apply_to_monomial(&self, m: Mode, w: &Monomial) -> Vector<C> {
        self.apply_rec(m, w, 0)
    }

    fn apply_rec(&self, m: Mode, w: &Monomial, depth: usize) -> Vector<C> {
        assert!(depth < MAX_DEPTH, "mode rewriting failed to terminate");
        let Some(&x1) = w.modes().first() else {
            return if self.kills_vacuum(m) {
                Vector::zero()
            } else {
                Vector::monomial(Monomial::from_modes(&[m]))
            };
        };
        let creation = !self.kills_vacuum(m);
        if creation && m <= x1 {
            if m == x1 && self.is_odd(m) {
                return Vector::zero();
            }
            return Vector::monomial(w.prepend(m));
        }
        let key = (m, w.clone());
        if let Some(v) = self.apply_cache.get(&key) {
            return v.clone();
        }
        // m x1 rest = ± x1 (m rest) + [m, x1] rest
        let rest = Monomial::from_modes(&w.modes()[1..]);
        let sign = if self.is_odd(m) && self.is_odd(x1) {
            C::from_int(-1)
        } else {
            C::one()
        };
        let mut out = Vector::zero();
        for (mono, c) in &self.apply_rec(m, &rest, depth + 1) {
            out.axpy(&c.mul(&sign), &self.apply_rec(x1, mono, depth + 1));
        }
        let br = self.bracket(m, x1);
        for (c, mode) in &br.modes {
            out.axpy(c, &self.apply_rec(*mode, &rest, depth + 1));
        }
        out.add_term(rest, br.scalar);
        self.apply_cache.insert(key, out.clone());
        out
    }

    pub fn apply(&self, m: Mode, v: &Vector<C>) -> Vector<C> {
        let mut out = Vector::zero();
        for (w, c) in v {
            out.axpy(c, &self.apply_to_monomial(m, w));
        }
        out
    }

    /// Apply a word right to left: `[m1, .., mk]` acts as `m1(..(mk v))`.
    pub fn apply_word(&self, word: &[Mode], v: &Vector<C>) -> Vector<C> {
        word.iter().rev().fold(v.clone(), |acc, &m| self.apply(m, &acc))
    }

    /// Expand an arbitrary mode word applied to the vacuum.
    pub fn canonicalize(&self, word: &[Mode]) -> Vector<C> {
        self.apply_word(word, &Vector::vacuum())
    }

    /// Canonical monomials of the given weight, in canonical order.
    pub fn basis(&self, weight: i64) -> Arc<Vec<Monomial>> {
        if let Some(b) = self.basis_cache.get(&weight) {
            return b.clone();
        }
        let b = Arc::new(self.enumerate_basis(weight));
        self.basis_cache.insert(weight, b.clone());
        b
    }

    pub fn basis_bigraded(&self, g: BiGrade) -> Vec<Monomial> {
        self.basis(g.weight)
            .iter()
            .filter(|w| self.monomial_grade(w).fermion == g.fermion)
            .cloned()
            .collect()
    }

    /// Fermion numbers occurring at a weight.
    pub fn fermion_numbers(&self, weight: i64) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .basis(weight)
            .iter()
            .map(|w| self.monomial_grade(w).fermion)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn creation_modes_up_to(&self, max_mode_weight: i64) -> Vec<Mode> {
        let mut modes = Vec::new();
        for (id, s) in self.table.symbols.iter().enumerate() {
            let mut n = s.generator_index();
            while s.mode_weight(n) <= max_mode_weight {
                modes.push(Mode::new(id as u16, n));
                n -= 1;
            }
        }
        modes.sort();
        modes
    }

    fn enumerate_basis(&self, weight: i64) -> Vec<Monomial> {
        if weight < self.min_weight {
            return Vec::new();
        }
        let modes = self.creation_modes_up_to(weight - self.min_weight);
        let weights: Vec<i64> = modes.iter().map(|&m| self.mode_grade(m).weight).collect();
        // neg[i]: most negative weight reachable using modes from position i on.
        let mut neg = vec![0; modes.len() + 1];
        for i in (0..modes.len()).rev() {
            neg[i] = neg[i + 1] + weights[i].min(0);
        }
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.dfs(&modes, &weights, &neg, 0, weight, &mut word, &mut out);
        out.sort();
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        modes: &[Mode],
        weights: &[i64],
        neg: &[i64],
        start: usize,
        target: i64,
        word: &mut Vec<Mode>,
        out: &mut Vec<Monomial>,
    ) {
        if target == 0 {
            out.push(Monomial::from_modes(word));
        }
        for i in start..modes.len() {
            let rest = target - weights[i];
            let next = if self.is_odd(modes[i]) { i + 1 } else { i };
            if rest < neg[next] {
                continue;
            }
            // Positive-weight modes are sorted with growing weight inside a
            // symbol, but symbols interleave; the bound above is the only cut.
            word.push(modes[i]);
            self.dfs(modes, weights, neg, next, rest, word, out);
            word.pop();
        }
    }

    /// Parse a word such as `"L(-2) c(1)"`; the empty string is the vacuum.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Mode>> {
        let mut modes = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| bad_word(text))?;
            let close = rest.find(')').ok_or_else(|| bad_word(text))?;
            if close < open {
                return Err(bad_word(text));
            }
            let name = rest[..open].trim();
            let index: i64 = rest[open + 1..close].trim().parse().map_err(|_| bad_word(text))?;
            modes.push(self.mode(name, index)?);
            rest = rest[close + 1..].trim_start();
        }
        Ok(modes)
    }

    /// Parse a combination such as `"2 c(0) b(-2) + c(1) b(-3) - 1/2 J(-2)"`,
    /// with `1` denoting the vacuum. The result is canonicalized.
    pub fn parse_vector(&self, text: &str) -> Result<Vector<C>> {
        let mut out = Vector::zero();
        for (sign, chunk) in split_signed(text) {
            let mut chunk = chunk.trim();
            // Accept the rendering of `format_vector`, which ends words in `1`.
            if chunk.len() > 1 && (chunk.ends_with(")1") || chunk.ends_with("*1")) {
                chunk = &chunk[..chunk.len() - 1];
            }
            let (coef, word) = match chunk.find(|ch: char| ch.is_alphabetic()) {
                Some(0) => (Scalar::from_integer(1.into()), chunk),
                Some(p) => (parse_coef(&chunk[..p])?, &chunk[p..]),
                None => (parse_coef(chunk)?, ""),
            };
            let modes = self.parse_word(word)?;
            let v = self.canonicalize(&modes);
            out.axpy(&C::from_scalar(if sign { -coef } else { coef }), &v);
        }
        Ok(out)
    }

    pub fn format_mode(&self, m: Mode) -> String {
        format!("{}({})", self.symbol(m).name, m.index)
    }

    pub fn format_monomial(&self, w: &Monomial) -> String {
        let mut s = String::new();
        for &m in w.modes() {
            s.push_str(&self.format_mode(m));
        }
        s.push('1');
        s
    }

    /// Human-readable rendering, e.g. `-2*b(-2)c(0)1 - b(-3)c(1)1`.
    pub fn format_vector(&self, v: &Vector<C>) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (w, c)) in v.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            match c.to_string().as_str() {
                "1" => {}
                "-1" => s.push('-'),
                t if t.contains(' ') => {
                    let _ = write!(s, "({t})*");
                }
                t => {
                    let _ = write!(s, "{t}*");
                }
            }
            s.push_str(&self.format_monomial(w));
        }
        s
    }

    /// Clear all caches. Results are unaffected; only memory is released.
    pub fn clear_caches(&self) {
        self.apply_cache.clear();
        self.field_cache.clear();
        self.basis_cache.clear();
    }
}

fn bad_word(text: &str) -> Error {
    Error::Parse {
        line: 1,
        column: 1,
        message: format!("malformed mode word {text:?}"),
    }
}

fn parse_coef(text: &str) -> Result<Scalar> {
    let t = text.trim().trim_end_matches('*').trim();
    if t.is_empty() {
        return Ok(Scalar::from_integer(1.into()));
    }
    crate::scalar::parse_scalar(t)
}

/// Split on top-level `+`/`-` that are not inside parentheses; `true` marks a
/// negated chunk.
fn split_signed(text: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    let mut neg = false;
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push((neg, std::mem::take(&mut cur)));
                } else {
                    cur.clear();
                }
                neg = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push((neg, cur));
    }
    out
}
