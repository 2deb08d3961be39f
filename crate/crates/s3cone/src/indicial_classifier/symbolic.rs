use crate::cone_calculus::Radial;
use crate::numerics::Poly1;

/// Σ p_i(b) r^{b + m_i}: the radial factor of an unknown power r^b pushed
/// through the flat operators.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicPower {
    pub terms: Vec<(Poly1<f64>, i32)>,
}

impl SymbolicPower {
    /// r^b
    pub fn base() -> Self {
        Self { terms: vec![(Poly1::constant(1.0), 0)] }
    }

    fn merged(mut terms: Vec<(Poly1<f64>, i32)>) -> Self {
        terms.sort_by_key(|t| t.1);
        let mut out: Vec<(Poly1<f64>, i32)> = Vec::new();
        for (p, m) in terms {
            match out.last_mut() {
                Some(last) if last.1 == m => last.0 = last.0.add(&p),
                _ => out.push((p, m)),
            }
        }
        out.retain(|t| !t.0.is_zero());
        Self { terms: out }
    }
}

impl Radial for SymbolicPower {
    type S = f64;

    fn deriv(&self) -> Self {
        Self::merged(self.terms.iter().map(|(p, m)| (p.mul(&Poly1::shifted_identity(*m as f64)), m - 1)).collect())
    }

    fn shift(&self, k: i32) -> Self {
        Self { terms: self.terms.iter().map(|(p, m)| (p.clone(), m + k)).collect() }
    }

    fn times(&self, c: &f64) -> Self {
        Self::merged(self.terms.iter().map(|(p, m)| (p.scale(c), *m)).collect())
    }

    fn plus(&self, o: &Self) -> Self {
        Self::merged(self.terms.iter().chain(&o.terms).cloned().collect())
    }

    fn vanishes(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_operator() {
        // r² (r^b)'' = b(b − 1) r^b
        let p = SymbolicPower::base().nth_deriv(2).shift(2);
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms[0].1, 0);
        for b in [-3.0, 0.5, 2.0] {
            assert!((p.terms[0].0.eval(&b) - b * (b - 1.0)).abs() < 1e-14);
        }
        assert!(SymbolicPower::base().times(&0.0).vanishes());
    }
}
