use std::sync::Arc;

use crate::scalar::Coeff;

use super::vector::Vector;

type OpFn<'a, C> = dyn Fn(&Vector<C>) -> Vector<C> + Send + Sync + 'a;

/// A homogeneous linear operator given by its action, with a parity so that
/// graded commutators can be formed.
#[derive(Clone)]
pub struct Operator<'a, C: Coeff> {
    odd: bool,
    f: Arc<OpFn<'a, C>>,
}

impl<'a, C: Coeff> Operator<'a, C> {
    pub fn new(odd: bool, f: impl Fn(&Vector<C>) -> Vector<C> + Send + Sync + 'a) -> Self {
        Operator { odd, f: Arc::new(f) }
    }

    pub fn identity() -> Self {
        Operator::new(false, |v: &Vector<C>| v.clone())
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn apply(&self, v: &Vector<C>) -> Vector<C> {
        (self.f)(v)
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &Self) -> Self {
        let (a, b) = (self.f.clone(), other.f.clone());
        Operator::new(self.odd ^ other.odd, move |v| a(&b(v)))
    }

    /// Graded commutator `[A, B] = AB - (-1)^{|A||B|} BA`.
    pub fn bracket(&self, other: &Self) -> Self {
        let (a, b) = (self.f.clone(), other.f.clone());
        let anti = self.odd && other.odd;
        Operator::new(self.odd ^ other.odd, move |v| {
            let ab = a(&b(v));
            let ba = b(&a(v));
            if anti {
                ab.add(&ba)
            } else {
                ab.sub(&ba)
            }
        })
    }

    pub fn plus(&self, other: &Self) -> Self {
        let (a, b) = (self.f.clone(), other.f.clone());
        Operator::new(self.odd, move |v| a(v).add(&b(v)))
    }

    pub fn scaled(&self, k: C) -> Self {
        let a = self.f.clone();
        Operator::new(self.odd, move |v| a(v).scale(&k))
    }
}
