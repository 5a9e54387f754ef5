use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::index_poly::IndexPoly;
use super::mode::Symbol;

/// One mode term `coeff(m, n) * symbol(index(m, n))` of a bracket, as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub coeff: String,
    pub symbol: String,
    pub index: String,
}

/// Textual bracket rule for `[left(m), right(n)]`:
/// `Σ terms + δ_{delta(m,n), 0} (scalar(m,n) + central(m,n) · c)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub left: String,
    pub right: String,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
    /// Defaults to `m + n`.
    #[serde(default)]
    pub delta: Option<String>,
    #[serde(default)]
    pub scalar: Option<String>,
    #[serde(default)]
    pub central: Option<String>,
}

impl RuleSpec {
    pub fn new(left: &str, right: &str) -> Self {
        RuleSpec {
            left: left.into(),
            right: right.into(),
            ..Default::default()
        }
    }

    pub fn term(mut self, coeff: &str, symbol: &str, index: &str) -> Self {
        self.terms.push(TermSpec {
            coeff: coeff.into(),
            symbol: symbol.into(),
            index: index.into(),
        });
        self
    }

    pub fn scalar(mut self, p: &str) -> Self {
        self.scalar = Some(p.into());
        self
    }

    pub fn central(mut self, p: &str) -> Self {
        self.central = Some(p.into());
        self
    }

    pub fn delta(mut self, p: &str) -> Self {
        self.delta = Some(p.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct RuleTerm {
    pub coeff: IndexPoly,
    pub sym: u16,
    pub index: IndexPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct BracketRule {
    pub terms: Vec<RuleTerm>,
    pub delta: IndexPoly,
    pub scalar: IndexPoly,
    pub central: IndexPoly,
}

impl BracketRule {
    /// Rule for `[B(m), A(n)]` from the rule for `[A(m), B(n)]`.
    fn reversed(&self, both_odd: bool) -> Self {
        let flip = |p: &IndexPoly| {
            let s = p.swapped();
            if both_odd {
                s
            } else {
                s.neg()
            }
        };
        BracketRule {
            terms: self
                .terms
                .iter()
                .map(|t| RuleTerm {
                    coeff: flip(&t.coeff),
                    sym: t.sym,
                    index: t.index.swapped(),
                })
                .collect(),
            delta: self.delta.swapped(),
            scalar: flip(&self.scalar),
            central: flip(&self.central),
        }
    }
}

/// Structure constants for a family of mode symbols.
///
/// Symbols are kept sorted by name so that symbol slots order modes
/// canonically. Every ordered pair of symbols has a rule, either declared or
/// obtained from graded antisymmetry.
#[derive(Clone, Debug)]
pub struct BracketTable {
    pub(crate) symbols: Vec<Symbol>,
    pub(crate) rules: HashMap<(u16, u16), BracketRule>,
    pub(crate) specs: Vec<RuleSpec>,
}

impl BracketTable {
    pub fn new(mut symbols: Vec<Symbol>, specs: Vec<RuleSpec>) -> Result<Self> {
        symbols.sort_by(|a, b| a.name.cmp(&b.name));
        for w in symbols.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::Declaration(format!("duplicate symbol `{}`", w[0].name)));
            }
        }
        for s in &symbols {
            if s.odd != (s.fermion.rem_euclid(2) == 1) {
                return Err(Error::Declaration(format!(
                    "parity of `{}` does not match its fermion charge {}",
                    s.name, s.fermion
                )));
            }
        }
        let lookup = |name: &str| -> Result<u16> {
            symbols
                .iter()
                .position(|s| s.name == name)
                .map(|i| i as u16)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
        };
        let parse = |p: &Option<String>, default: &str| -> Result<IndexPoly> {
            IndexPoly::parse(p.as_deref().unwrap_or(default))
        };

        let mut rules = HashMap::new();
        for spec in &specs {
            let a = lookup(&spec.left)?;
            let b = lookup(&spec.right)?;
            let mut terms = Vec::new();
            for t in &spec.terms {
                terms.push(RuleTerm {
                    coeff: IndexPoly::parse(&t.coeff)?,
                    sym: lookup(&t.symbol)?,
                    index: IndexPoly::parse(&t.index)?,
                });
            }
            let rule = BracketRule {
                terms,
                delta: parse(&spec.delta, "m + n")?,
                scalar: parse(&spec.scalar, "0")?,
                central: parse(&spec.central, "0")?,
            };
            if rules.insert((a, b), rule).is_some() {
                return Err(Error::Declaration(format!(
                    "bracket ({}, {}) declared twice",
                    spec.left, spec.right
                )));
            }
        }
        let declared: Vec<(u16, u16)> = rules.keys().copied().collect();
        for (a, b) in declared {
            if a != b && !rules.contains_key(&(b, a)) {
                let both_odd = symbols[a as usize].odd && symbols[b as usize].odd;
                let rev = rules[&(a, b)].reversed(both_odd);
                rules.insert((b, a), rev);
            }
        }
        for a in 0..symbols.len() as u16 {
            for b in 0..symbols.len() as u16 {
                if !rules.contains_key(&(a, b)) {
                    return Err(Error::MissingBracket(
                        symbols[a as usize].name.clone(),
                        symbols[b as usize].name.clone(),
                    ));
                }
            }
        }
        Ok(BracketTable {
            symbols,
            rules,
            specs,
        })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn specs(&self) -> &[RuleSpec] {
        &self.specs
    }

    pub fn symbol_id(&self, name: &str) -> Result<u16> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(|i| i as u16)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vir() -> Vec<RuleSpec> {
        vec![RuleSpec::new("L", "L")
            .term("m - n", "L", "m + n")
            .central("(m^3 - m)/12")]
    }

    #[test]
    fn missing_pairs_are_reported() {
        let syms = vec![
            Symbol::new("L", false, 2, 0, -1),
            Symbol::new("J", false, 1, 0, 0),
        ];
        match BracketTable::new(syms, vir()) {
            Err(Error::MissingBracket(..)) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_symbols_and_parity_are_rejected() {
        let syms = vec![Symbol::new("L", false, 2, 0, -1)];
        let bad = vec![RuleSpec::new("L", "X")];
        assert!(matches!(
            BracketTable::new(syms.clone(), bad),
            Err(Error::UnknownSymbol(_))
        ));
        let odd_l = vec![Symbol::new("L", true, 2, 0, -1)];
        assert!(matches!(
            BracketTable::new(odd_l, vir()),
            Err(Error::Declaration(_))
        ));
    }

    #[test]
    fn reverse_rule_uses_graded_antisymmetry() {
        let syms = vec![
            Symbol::new("L", false, 2, 0, -1),
            Symbol::new("J", false, 1, 0, 0),
        ];
        let mut specs = vir();
        specs.push(RuleSpec::new("L", "J").term("-n", "J", "m + n"));
        specs.push(RuleSpec::new("J", "J").central("m/3"));
        let t = BracketTable::new(syms, specs).unwrap();
        let (j, l) = (t.symbol_id("J").unwrap(), t.symbol_id("L").unwrap());
        let r = &t.rules[&(j, l)];
        // [J(m), L(n)] = -[L(n), J(m)] = m J(m+n)
        assert_eq!(r.terms[0].coeff, IndexPoly::parse("m").unwrap());
        assert_eq!(r.terms[0].index, IndexPoly::parse("m + n").unwrap());
    }
}
