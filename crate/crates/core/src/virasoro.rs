//! The Virasoro algebra and its vacuum module `M(c)`, realized as the quotient
//! of the weight-0 Verma module by `L(-1)1`.

use crate::error::{Error, Result};
use crate::fock::{Algebra, BracketTable, Mode, RuleSpec, Symbol, Vector};
use crate::scalar::{q, Coeff};

pub fn symbol() -> Symbol {
    Symbol::new("L", false, 2, 0, -1)
}

pub fn rule() -> RuleSpec {
    RuleSpec::new("L", "L")
        .term("m - n", "L", "m + n")
        .central("(m^3 - m)/12")
}

pub fn table() -> BracketTable {
    BracketTable::new(vec![symbol()], vec![rule()]).expect("Virasoro table is well formed")
}

/// `M(c)` with the center acting as `c`.
pub fn vacuum_module<C: Coeff>(c: C) -> Algebra<C> {
    Algebra::new(table(), c).expect("Virasoro vacuum module is well formed")
}

/// `L(n) v`.
pub fn act<C: Coeff>(alg: &Algebra<C>, n: i64, v: &Vector<C>) -> Vector<C> {
    alg.apply(Mode::new(alg.table().symbol_id("L").expect("L present"), n), v)
}

/// The conformal vector `L(-2)1`.
pub fn omega<C: Coeff>(alg: &Algebra<C>) -> Vector<C> {
    act(alg, -2, &Vector::vacuum())
}

/// Number of partitions of `w` into parts `>= 2`, the dimension of `M(c)_w`.
pub fn weight_dimension(w: i64) -> Result<u64> {
    if w < 0 {
        return Err(Error::NegativeWeight(w));
    }
    let w = w as usize;
    let mut ways = vec![0u64; w + 1];
    ways[0] = 1;
    for part in 2..=w {
        for total in part..=w {
            ways[total] += ways[total - part];
        }
    }
    Ok(ways[w])
}

/// `[L(m), L(n)] v - (m - n) L(m + n) v - c/12 (m^3 - m) δ_{m+n,0} v` for an
/// arbitrary family of operators `l(n, v)`; zero exactly when the relation holds
/// on `v`.
pub fn relation_residual<C: Coeff>(
    l: &impl Fn(i64, &Vector<C>) -> Vector<C>,
    central: &C,
    m: i64,
    n: i64,
    v: &Vector<C>,
) -> Vector<C> {
    let mut r = l(m, &l(n, v));
    r.sub_assign(&l(n, &l(m, v)));
    r.axpy(&C::from_int(-(m - n)), &l(m + n, v));
    if m + n == 0 {
        let k = central.scale(&q(m * m * m - m, 12));
        r.axpy(&k.neg(), v);
    }
    r
}
