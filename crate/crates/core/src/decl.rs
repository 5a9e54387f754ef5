//! Instance declarations: a mode algebra, its distinguished elements and
//! flags, written as JSON.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "name": "tensor-26",
//!   "central_charge": "26",
//!   "symbols": [{ "name": "L", "odd": false, "weight": 2, "fermion": 0, "vacuum_from": -1 }],
//!   "rules": [{ "left": "L", "right": "L", "terms": [{ "coeff": "m - n", "symbol": "L", "index": "m + n" }],
//!               "central": "(m^3 - m)/12" }],
//!   "elements": { "omega": "L(-2)", "f": "0", "q": "0", "g": "0" },
//!   "strong": false,
//!   "type_k": null
//! }
//! ```
//!
//! `vacuum_from` is the smallest mode index that annihilates the vacuum.
//! Errors carry the line and column of the offending entry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Algebra, BracketTable, RuleSpec, Symbol, Vector};
use crate::report::SCHEMA_VERSION;
use crate::scalar::{parse_scalar, Scalar};
use crate::tvoa::TvoaInstance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDecl {
    pub name: String,
    pub odd: bool,
    pub weight: i64,
    pub fermion: i64,
    pub vacuum_from: i64,
}

/// Distinguished elements as sums of mode words applied to the vacuum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Elements {
    pub omega: String,
    pub f: String,
    pub q: String,
    pub g: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDeclaration {
    pub schema_version: u32,
    pub name: String,
    /// Value of the central element, as an exact rational.
    pub central_charge: String,
    pub symbols: Vec<SymbolDecl>,
    pub rules: Vec<RuleSpec>,
    pub elements: Elements,
    #[serde(default)]
    pub strong: bool,
    #[serde(default)]
    pub type_k: Option<i64>,
    #[serde(skip)]
    source: String,
}

/// Line and column (1-based) of the `nth` occurrence of `needle`, or of the
/// start of the text.
fn locate(text: &str, needle: &str, nth: usize) -> (usize, usize) {
    let Some((at, _)) = text.match_indices(needle).nth(nth) else {
        return (1, 1);
    };
    let before = &text[..at];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl InstanceDeclaration {
    pub fn parse(text: &str) -> Result<Self> {
        let mut d: InstanceDeclaration = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        d.source = text.to_string();
        if d.schema_version != SCHEMA_VERSION {
            return Err(d.error_at(
                "\"schema_version\"",
                0,
                format!("schema version {} is not supported (expected {SCHEMA_VERSION})", d.schema_version),
            ));
        }
        Ok(d)
    }

    fn error_at(&self, needle: &str, nth: usize, message: String) -> Error {
        let (line, column) = locate(&self.source, needle, nth);
        Error::Parse { line, column, message }
    }

    fn symbols(&self) -> Vec<Symbol> {
        self.symbols
            .iter()
            .map(|s| Symbol::new(&s.name, s.odd, s.weight, s.fermion, s.vacuum_from))
            .collect()
    }

    /// The bracket table. A rejected rule is located by rebuilding from
    /// growing prefixes of the rule list.
    pub fn table(&self) -> Result<BracketTable> {
        let symbols = self.symbols();
        match BracketTable::new(symbols.clone(), self.rules.clone()) {
            Ok(t) => Ok(t),
            Err(e) => {
                let bad = (1..=self.rules.len())
                    .find(|&k| BracketTable::new(symbols.clone(), self.rules[..k].to_vec()).is_err());
                Err(match bad {
                    Some(k) => self.error_at("\"left\"", k - 1, format!("rule {}: {e}", k - 1)),
                    None => self.error_at("\"symbols\"", 0, e.to_string()),
                })
            }
        }
    }

    pub fn algebra(&self) -> Result<Algebra<Scalar>> {
        let c = parse_scalar(&self.central_charge)
            .map_err(|e| self.error_at("\"central_charge\"", 0, e.to_string()))?;
        Algebra::new(self.table()?, c).map_err(|e| self.error_at("\"symbols\"", 0, e.to_string()))
    }

    /// Builds the instance. Gradings of the elements are recomputed by the
    /// checks, never read from the declaration.
    pub fn build(&self) -> Result<TvoaInstance> {
        let alg = self.algebra()?;
        let el = &self.elements;
        let parse = |key: &str, text: &str| -> Result<Vector<Scalar>> {
            alg.parse_vector(text)
                .map_err(|e| self.error_at(&format!("\"{key}\""), 0, format!("element {key}: {e}")))
        };
        let omega = parse("omega", &el.omega)?;
        let f = parse("f", &el.f)?;
        let q = parse("q", &el.q)?;
        let g = parse("g", &el.g)?;
        Ok(TvoaInstance::new(self.name.clone(), alg, omega, f, q, g, self.strong, self.type_k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const VIRASORO: &str = r#"{
  "schema_version": 1,
  "name": "virasoro-1/2",
  "central_charge": "1/2",
  "symbols": [{ "name": "L", "odd": false, "weight": 2, "fermion": 0, "vacuum_from": -1 }],
  "rules": [
    { "left": "L", "right": "L", "terms": [{ "coeff": "m - n", "symbol": "L", "index": "m + n" }],
      "central": "(m^3 - m)/12" }
  ],
  "elements": { "omega": "L(-2)", "f": "0", "q": "0", "g": "0" }
}"#;

    #[test]
    fn builds_a_virasoro_instance() {
        let inst = InstanceDeclaration::parse(VIRASORO).unwrap().build().unwrap();
        assert_eq!(inst.name, "virasoro-1/2");
        assert_eq!(inst.algebra.basis(4).len(), 2);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let broken = VIRASORO.replace("\"odd\": false,", "\"odd\": false");
        match InstanceDeclaration::parse(&broken) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn element_errors_point_at_the_element() {
        let bad = VIRASORO.replace("\"L(-2)\"", "\"X(-2)\"");
        match InstanceDeclaration::parse(&bad).unwrap().build() {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (10, 17)),
            other => panic!("{:?}", other.err()),
        }
    }

    #[test]
    fn unknown_symbols_in_rules_are_located() {
        let bad = VIRASORO.replace("\"symbol\": \"L\"", "\"symbol\": \"M\"");
        match InstanceDeclaration::parse(&bad).unwrap().build() {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("{:?}", other.err()),
        }
    }

    #[test]
    fn wrong_schema_is_rejected() {
        let bad = VIRASORO.replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(InstanceDeclaration::parse(&bad), Err(Error::Parse { line: 2, column: 3, .. })));
    }
}
