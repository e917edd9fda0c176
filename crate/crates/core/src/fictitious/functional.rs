use crate::scalar::Scalar;

/// Σ wᵢ·u[dofᵢ] + constant, with `dof = 3·node + component`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearFunctional<T> {
    terms: Vec<(usize, T)>,
    constant: T,
}

impl<T: Scalar> LinearFunctional<T> {
    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            constant: T::zero(),
        }
    }

    pub fn dof(dof: usize) -> Self {
        Self {
            terms: vec![(dof, T::one())],
            constant: T::zero(),
        }
    }

    pub fn constant_only(c: T) -> Self {
        Self {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn terms(&self) -> &[(usize, T)] {
        &self.terms
    }

    pub fn constant(&self) -> T {
        self.constant
    }

    pub fn push(&mut self, dof: usize, weight: T) {
        self.terms.push((dof, weight));
    }

    pub fn add_constant(&mut self, c: T) {
        self.constant = self.constant + c;
    }

    /// self += s·other
    pub fn add_scaled(&mut self, other: &Self, s: T) {
        self.terms.extend(other.terms.iter().map(|&(d, w)| (d, w * s)));
        self.constant = self.constant + s * other.constant;
    }

    /// Sorts by dof and merges duplicates; drops exact zeros.
    pub fn compact(&mut self) {
        self.terms.sort_by_key(|&(d, _)| d);
        let mut out: Vec<(usize, T)> = Vec::with_capacity(self.terms.len());
        for &(d, w) in &self.terms {
            match out.last_mut() {
                Some(last) if last.0 == d => last.1 = last.1 + w,
                _ => out.push((d, w)),
            }
        }
        out.retain(|&(_, w)| w != T::zero());
        self.terms = out;
    }

    pub fn compacted(mut self) -> Self {
        self.compact();
        self
    }

    pub fn weight_sum(&self) -> T {
        self.terms.iter().fold(T::zero(), |a, &(_, w)| a + w)
    }

    pub fn evaluate(&self, u: &[T]) -> T {
        self.terms.iter().fold(self.constant, |acc, &(d, w)| acc + w * u[d])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_and_compact() {
        let mut a = LinearFunctional::<f64>::dof(3);
        let mut b = LinearFunctional::dof(5);
        b.push(3, 2.0);
        b.add_constant(1.0);
        a.add_scaled(&b, -1.0);
        a.compact();
        assert_eq!(a.terms(), &[(3, -1.0), (5, -1.0)]);
        assert_eq!(a.constant(), -1.0);
        let u = [0.0, 0.0, 0.0, 2.0, 0.0, 4.0];
        assert_eq!(a.evaluate(&u), -7.0);
    }

    #[test]
    fn cancelling_terms_vanish() {
        let mut a = LinearFunctional::<f64>::dof(1);
        a.push(1, -1.0);
        a.compact();
        assert!(a.terms().is_empty());
    }
}
